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

// Entropy of the complementary output sum_m p_m |sqrt(g) m><sqrt(g) m|
// through the (N+1)x(N+1) replica matrix A_ij = <sqrt(g) i|sqrt(g) j> p_j,
// which shares the nonzero spectrum of the infinite-dimensional mixture.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/distribution.hpp"

namespace dephcap {

// Overlap kernel G_ij between environment coherent states. Swappable so the
// validation suite can run against a deliberately corrupted kernel.
using GramKernel = std::function<double(const DephasingParams&, int, int)>;

// <sqrt(g) i|sqrt(g) j> = e^{-g (i-j)^2 / 2}.
double GramOverlap(const DephasingParams& params, int i, int j);

// A = G diag(p), indices 0..N.
class ReplicaMatrix {
 public:
  ReplicaMatrix(const InputDistribution& p, const DephasingParams& params,
                const GramKernel& kernel = GramOverlap);

  int size() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  // Spectrum of A in ascending order, zero-padded to size(). Computed from
  // the symmetric similarity D^{1/2} G D^{1/2} on the support of p.
  Eigen::VectorXd eigenvalues() const;

 private:
  std::vector<double> weights_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd a_;
};

ReplicaMatrix BuildReplicaMatrix(const InputDistribution& p, const DephasingParams& params);

// Eigen-decomposition of D^{1/2} G D^{1/2} restricted to indices with
// positive weight. Weights need not be normalized.
struct ReplicaSpectrum {
  std::vector<int> support;
  Eigen::VectorXd eigenvalues;   // clamped at 0
  Eigen::MatrixXd eigenvectors;  // columns, rows indexed like `support`
};

ReplicaSpectrum SymmetricReplicaSpectrum(std::span<const double> weights,
                                         const DephasingParams& params,
                                         const GramKernel& kernel = GramOverlap);

// -sum a log2 a over a clamped spectrum.
double SpectralEntropyBits(const Eigen::VectorXd& eigenvalues);

// S(N^c(diag p)) in bits.
double EntropyReplica(const InputDistribution& p, const DephasingParams& params,
                      const GramKernel& kernel = GramOverlap);

// Same entropy from the explicit env_dim x env_dim mixture of coherent
// vectors. Throws TruncationError when env_dim cannot hold the states.
double EntropyBruteforceOracle(const InputDistribution& p, const DephasingParams& params,
                               int env_dim);
double EntropyBruteforceOracle(const InputDistribution& p, const DephasingParams& params);

double ShannonEntropy(const InputDistribution& p);

// J(diag p, N_g) = H(p) - S(A(p)) in bits.
double CoherentInformationDiagonal(const InputDistribution& p, const DephasingParams& params,
                                   const GramKernel& kernel = GramOverlap);

}  // namespace dephcap
