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

// Truncated quantum capacity Q_{N+1}: maximization of the diagonal coherent
// information over the probability simplex, plus the closed-form two-point
// bound, the discrete-Gaussian ansatz and the large-gamma expansion.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/distribution.hpp"

namespace dephcap {

enum class GradientMode { kAnalytic, kFiniteDifference };

struct OptimizerConfig {
  double objective_tolerance = 1e-10;
  int max_iterations = 20000;
  int restarts = 3;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on tolerance <= 0, restarts < 1 or
  // max_iterations < 1.
  void Validate() const;
};

// Tangent-gradient norm below which a point counts as stationary.
inline constexpr double kGradientResidualTarget = 1e-8;

struct CapacityResult {
  double gamma = 0.0;
  int n = 0;
  double q_bits = 0.0;
  InputDistribution p_opt = InputDistribution::Uniform(0);
  int iterations = 0;
  bool converged = false;
  double gradient_residual = 0.0;
  double wall_seconds = 0.0;
  // Nonempty when the point could not be evaluated at all; the numeric
  // fields are then meaningless.
  std::string failure;
};

struct TwoPointBound {
  double gamma = 0.0;
  int j = 1;
  double q_plus = 1.0;
  double q_minus = 0.0;
  double value_bits = 1.0;
};

// Coherent information of (|n><n| + |n+j><n+j|)/2:
// 1 - H2(q+, q-), q+- = (1 +- e^{-g j^2/2}) / 2. Independent of n.
TwoPointBound TwoPointLowerBound(const DephasingParams& params, int j);

// Gradient of J(p) = H(p) - S(A(p)) in bits, on the extension
//   J(w) = -sum w log2 w + sum a log2 a - (sum w - 1) / ln 2
// (a the spectrum of A(w)), which agrees with J on the simplex and whose
// gradient reduces to that of H at gamma = 0. Finite-difference mode uses
// central differences of the same extension with step 1e-6.
//
// Requires p_m > 0 for all m; throws std::domain_error naming the offending
// index if a component is not finite.
Eigen::VectorXd ObjectiveGradient(const InputDistribution& p, const DephasingParams& params,
                                  GradientMode mode);

// Euclidean norm of g projected onto {v : sum v = 0}, over `support`.
double TangentResidual(const Eigen::VectorXd& gradient, const std::vector<int>& support);

// Mirror ascent (exponentiated gradient with backtracking) over the simplex
// on 0..n_max. Never throws for non-convergence: the best iterate is
// returned with converged = false.
CapacityResult MaximizeCoherentInformation(int n_max, const DephasingParams& params,
                                           const OptimizerConfig& config = {});

struct DiscreteGaussianAnsatz {
  double mu = 0.0;
  double sigma = 1.0;
  int n_max = 1;

  // mu = N/2.
  static DiscreteGaussianAnsatz Centered(int n_max, double sigma);
};

// p_m proportional to e^{-(m - mu)^2 / (2 sigma^2)} on 0..N.
InputDistribution AnsatzDistribution(const DiscreteGaussianAnsatz& ansatz);

// sigma = 0.2 N + 0.6, the empirical optimum width for gamma > 0.2.
double EmpiricalAnsatzWidth(int n_max);

struct AnsatzOptimum {
  double sigma = 0.0;
  double q_bits = 0.0;
  // False when the maximizer sits on an end of the search bracket.
  bool interior = true;
};

// Golden-section search over sigma in [0.05, 5N] of J(ansatz(N/2, sigma)).
AnsatzOptimum MaximizeOverAnsatz(int n_max, const DephasingParams& params);

// e^{-g} sum_{m<N} p_m p_{m+1} / (p_m - p_{m+1}) log2(p_m / p_{m+1}).
// Near-equal neighbours (relative gap < 1e-8) use the limit p_m / ln 2;
// pairs with a zero weight contribute 0.
double AsymptoticCapacity(const InputDistribution& p, const DephasingParams& params);

// True when e^{-g/2} < 0.1, where the leading-order expansion is trustworthy.
bool AsymptoticRegimeReliable(const DephasingParams& params);

// One result per (gamma, N) pair in gamma-major input order. Points run on
// `threads` workers (0 = hardware concurrency); each point is seeded from
// (config.seed, N, gamma) so the output does not depend on scheduling.
std::vector<CapacityResult> CapacitySweep(const std::vector<double>& gammas,
                                          const std::vector<int>& ns,
                                          const OptimizerConfig& config, int threads = 0);

}  // namespace dephcap
