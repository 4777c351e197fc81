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

#include "dephcap/replica_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dephcap/fock_core.hpp"

namespace dephcap {

double GramOverlap(const DephasingParams& params, int i, int j) {
  const double d = i - j;
  return std::exp(-0.5 * params.gamma() * d * d);
}

ReplicaMatrix::ReplicaMatrix(const InputDistribution& p, const DephasingParams& params,
                             const GramKernel& kernel)
    : weights_(p.weights().begin(), p.weights().end()) {
  const int n = p.size();
  gram_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram_(i, j) = kernel(params, i, j);
  }
  const Eigen::Map<const Eigen::VectorXd> d(weights_.data(), n);
  a_ = gram_ * d.asDiagonal();
}

Eigen::VectorXd ReplicaMatrix::eigenvalues() const {
  // Rebuild the kernel-weighted symmetric form directly from the stored Gram
  // matrix so custom kernels are honoured.
  std::vector<int> support;
  for (int i = 0; i < size(); ++i) {
    if (weights_[static_cast<std::size_t>(i)] > 0.0) support.push_back(i);
  }
  const int k = static_cast<int>(support.size());
  Eigen::MatrixXd sym(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const auto ia = static_cast<std::size_t>(support[static_cast<std::size_t>(a)]);
      const auto ib = static_cast<std::size_t>(support[static_cast<std::size_t>(b)]);
      sym(a, b) = std::sqrt(weights_[ia] * weights_[ib]) *
                  gram_(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib));
    }
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  if (k > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    out.tail(k) = es.eigenvalues();
  }
  std::sort(out.begin(), out.end());
  return out;
}

ReplicaMatrix BuildReplicaMatrix(const InputDistribution& p, const DephasingParams& params) {
  return ReplicaMatrix(p, params);
}

ReplicaSpectrum SymmetricReplicaSpectrum(std::span<const double> weights,
                                         const DephasingParams& params,
                                         const GramKernel& kernel) {
  ReplicaSpectrum spec;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("replica weights must be nonnegative");
    if (weights[i] > 0.0) spec.support.push_back(static_cast<int>(i));
  }
  const int k = static_cast<int>(spec.support.size());
  Eigen::MatrixXd sym(k, k);
  for (int a = 0; a < k; ++a) {
    const int i = spec.support[static_cast<std::size_t>(a)];
    for (int b = 0; b <= a; ++b) {
      const int j = spec.support[static_cast<std::size_t>(b)];
      const double v = std::sqrt(weights[static_cast<std::size_t>(i)] *
                                 weights[static_cast<std::size_t>(j)]) *
                       kernel(params, i, j);
      sym(a, b) = v;
      sym(b, a) = v;
    }
  }
  if (k == 0) return spec;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  spec.eigenvalues = es.eigenvalues().cwiseMax(0.0);
  spec.eigenvectors = es.eigenvectors();
  return spec;
}

double SpectralEntropyBits(const Eigen::VectorXd& eigenvalues) {
  double nats = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double a = eigenvalues[i];
    if (a > 0.0) nats -= a * std::log(a);
  }
  return nats / std::numbers::ln2;
}

double EntropyReplica(const InputDistribution& p, const DephasingParams& params,
                      const GramKernel& kernel) {
  return SpectralEntropyBits(SymmetricReplicaSpectrum(p.weights(), params, kernel).eigenvalues);
}

double EntropyBruteforceOracle(const InputDistribution& p, const DephasingParams& params,
                               int env_dim) {
  return VonNeumannEntropyBits(ComplementaryOutput(p, params, env_dim).matrix());
}

double EntropyBruteforceOracle(const InputDistribution& p, const DephasingParams& params) {
  return EntropyBruteforceOracle(p, params, DefaultEnvDim(params, p.n_max()));
}

double ShannonEntropy(const InputDistribution& p) {
  double nats = 0.0;
  for (double w : p.weights()) {
    if (w > 0.0) nats -= w * std::log(w);
  }
  return nats / std::numbers::ln2;
}

double CoherentInformationDiagonal(const InputDistribution& p, const DephasingParams& params,
                                   const GramKernel& kernel) {
  return ShannonEntropy(p) - EntropyReplica(p, params, kernel);
}

}  // namespace dephcap
