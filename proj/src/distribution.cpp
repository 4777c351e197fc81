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

#include "dephcap/distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dephcap {

DephasingParams::DephasingParams(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("dephasing rate must be finite and >= 0, got " +
                                std::to_string(gamma));
  }
  epsilon_ = std::exp(-0.5 * gamma);
}

InputDistribution::InputDistribution(std::vector<double> weights) : p_(std::move(weights)) {
  if (p_.empty()) throw std::invalid_argument("input distribution must be nonempty");
  double total = 0.0;
  for (std::size_t m = 0; m < p_.size(); ++m) {
    if (!(p_[m] >= 0.0) || !std::isfinite(p_[m])) {
      throw std::invalid_argument("input distribution weight p_" + std::to_string(m) +
                                  " is negative or not finite");
    }
    total += p_[m];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("input distribution sums to " + std::to_string(total));
  }
}

InputDistribution InputDistribution::Normalized(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("weights have no positive mass");
  for (double& w : weights) w /= total;
  return InputDistribution(std::move(weights));
}

InputDistribution InputDistribution::Uniform(int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  return InputDistribution(std::vector<double>(static_cast<std::size_t>(n_max) + 1,
                                               1.0 / (n_max + 1)));
}

InputDistribution InputDistribution::PointMass(int n_max, int level) {
  if (level < 0 || level > n_max) throw std::invalid_argument("level outside 0..n_max");
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  w[static_cast<std::size_t>(level)] = 1.0;
  return InputDistribution(std::move(w));
}

double InputDistribution::mean_energy() const {
  double e = 0.0;
  for (std::size_t m = 0; m < p_.size(); ++m) e += static_cast<double>(m) * p_[m];
  return e;
}

std::vector<int> InputDistribution::support() const {
  std::vector<int> idx;
  for (std::size_t m = 0; m < p_.size(); ++m) {
    if (p_[m] > 0.0) idx.push_back(static_cast<int>(m));
  }
  return idx;
}

}  // namespace dephcap
