// Copyright 2026 The dephcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

namespace dephcap {

// Dimensionless dephasing rate gamma >= 0 of the bosonic dephasing channel.
class DephasingParams {
 public:
  explicit DephasingParams(double gamma);

  double gamma() const { return gamma_; }
  // e^{-gamma/2}: the overlap of neighbouring environment coherent states.
  double epsilon() const { return epsilon_; }

 private:
  double gamma_;
  double epsilon_;
};

// Probability vector p_0..p_N over the Fock states |0>..|N>.
//
// Construction validates nonnegativity and normalization (1e-12). The
// object is immutable afterwards.
class InputDistribution {
 public:
  explicit InputDistribution(std::vector<double> weights);

  // Rescales arbitrary nonnegative weights to unit sum.
  static InputDistribution Normalized(std::vector<double> weights);
  static InputDistribution Uniform(int n_max);
  // Point mass on |level> inside a space truncated at n_max.
  static InputDistribution PointMass(int n_max, int level);

  int n_max() const { return static_cast<int>(p_.size()) - 1; }
  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int m) const { return p_[static_cast<std::size_t>(m)]; }
  std::span<const double> weights() const { return p_; }

  double mean_energy() const;
  // Indices with strictly positive weight.
  std::vector<int> support() const;

 private:
  std::vector<double> p_;
};

}  // namespace dephcap
