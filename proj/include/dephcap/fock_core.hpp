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

// Bosonic dephasing channel on a truncated Fock space, together with the
// independent representations used to cross-check it: Kraus sum, master
// equation integration, environment dilation and Gaussian phase averaging.

#include <complex>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/distribution.hpp"

namespace dephcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Raised when an environment truncation cannot hold the coherent states the
// channel produces. `worst_residual` is the largest discarded probability.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double worst_residual)
      : std::runtime_error(what), worst_residual_(worst_residual) {}
  double worst_residual() const { return worst_residual_; }

 private:
  double worst_residual_;
};

// Hermitian, positive semidefinite, unit-trace matrix in the Fock basis.
//
// The constructor checks Hermiticity (1e-12), trace (1e-12) and that every
// eigenvalue is >= -1e-10, throwing std::invalid_argument otherwise.
class FockDensityMatrix {
 public:
  explicit FockDensityMatrix(ComplexMatrix entries);

  static FockDensityMatrix FromDistribution(const InputDistribution& p);
  // |psi><psi| / <psi|psi>.
  static FockDensityMatrix Pure(const ComplexVector& psi);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }
  Complex operator()(int m, int n) const { return rho_(m, n); }

  // The diagonal as a probability vector (the channel's fixed-point part).
  InputDistribution populations() const;
  // rho with all off-diagonal coherences removed.
  FockDensityMatrix diagonal_part() const;

 private:
  ComplexMatrix rho_;
};

// Random full-rank state with generic coherences: W W^dagger / Tr for a
// complex Ginibre matrix W.
FockDensityMatrix RandomDensityMatrix(int dim, std::mt19937_64& rng);

// Truncated Fock coefficients of the coherent state |amplitude>.
class CoherentVector {
 public:
  CoherentVector(Complex amplitude, int dim);

  Complex amplitude() const { return amplitude_; }
  int dim() const { return static_cast<int>(entries_.size()); }
  const ComplexVector& entries() const { return entries_; }
  // Probability mass beyond the truncation: 1 - sum_k |c_k|^2.
  double residual() const { return residual_; }

 private:
  Complex amplitude_;
  ComplexVector entries_;
  double residual_;
};

// System-environment state, ordered system-major: index = m * env_dim + k.
class JointState {
 public:
  JointState(int sys_dim, int env_dim, ComplexMatrix entries);

  int sys_dim() const { return sys_dim_; }
  int env_dim() const { return env_dim_; }
  const ComplexMatrix& matrix() const { return entries_; }

  ComplexMatrix TraceOutEnvironment() const;
  ComplexMatrix TraceOutSystem() const;

 private:
  int sys_dim_;
  int env_dim_;
  ComplexMatrix entries_;
};

// Von Neumann entropy in bits of a Hermitian matrix. Eigenvalues below zero
// (roundoff) contribute nothing.
double VonNeumannEntropyBits(const ComplexMatrix& rho);

// ceil(g N^2 + 10 sqrt(max(g N^2, 1)) + 20): environment size that holds
// |sqrt(g) m>, m <= n_max, with negligible Poisson tail.
int DefaultEnvDim(const DephasingParams& params, int n_max);

// Largest truncation residual over the coherent states |sqrt(g) m>, m <= n_max.
double WorstCoherentResidual(const DephasingParams& params, int n_max, int env_dim);

// rho_mn -> e^{-g (m-n)^2 / 2} rho_mn.
FockDensityMatrix ApplyDephasing(const FockDensityMatrix& rho, const DephasingParams& params);

struct KrausOutcome {
  ComplexMatrix output;
  int j_max = 0;
  // max_n |1 - sum_{j<=j_max} e^{-g n^2} (g n^2)^j / j!|
  double completeness_residual = 0.0;
  bool within_tolerance = false;
};

double KrausCompletenessResidual(const DephasingParams& params, int dim, int j_max);

// sum_{j=0}^{j_max} K_j rho K_j^dagger with
// K_j = e^{-g (a^dag a)^2 / 2} (-i sqrt(g) a^dag a)^j / sqrt(j!).
KrausOutcome KrausApply(const FockDensityMatrix& rho, const DephasingParams& params, int j_max,
                        double tolerance = 1e-12);
// Grows j_max until the completeness residual drops below `tolerance`.
KrausOutcome KrausApplyAdaptive(const FockDensityMatrix& rho, const DephasingParams& params,
                                double tolerance = 1e-12);

struct EvolutionOutcome {
  FockDensityMatrix state;
  // Global error of the RK4 propagator per unit coherence, maximized over
  // the decay rates of the truncated generator.
  double estimated_error;
};

// Integrates d rho/dt = n rho n - (n^2 rho + rho n^2) / 2, n = a^dag a, with
// classical fourth-order Runge-Kutta and a fixed step count. The rate is
// normalized so that time t reproduces ApplyDephasing at gamma = t.
//
// Throws std::domain_error when the step is outside the RK4 stability
// interval; the message carries the estimated error.
EvolutionOutcome EvolveMasterEquation(const FockDensityMatrix& rho, double t, int steps);

// Returns (N_{g2} o N_{g1})(rho) and N_{g1+g2}(rho).
std::pair<FockDensityMatrix, FockDensityMatrix> ComposeCheck(double gamma1, double gamma2,
                                                             const FockDensityMatrix& rho);

// U rho U^dagger with U = e^{-i theta a^dag a}.
FockDensityMatrix PhaseRotate(const FockDensityMatrix& rho, double theta);

// sum_m p_m |sqrt(g) m><sqrt(g) m| on an env_dim-dimensional Fock space.
// The constant rotation e^{-i pi a^dag a / 2} relating this to the exact
// complementary output is omitted; it does not change the spectrum.
FockDensityMatrix ComplementaryOutput(const InputDistribution& p, const DephasingParams& params,
                                      int env_dim);

struct DilationOutput {
  FockDensityMatrix system;
  FockDensityMatrix environment;
};

// Builds sum_{mn} rho_mn |m><n| (x) |-i sqrt(g) m><-i sqrt(g) n| explicitly
// and returns both reduced states.
DilationOutput DilationOracle(const FockDensityMatrix& rho, const DephasingParams& params,
                              int env_dim);

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // for weight function e^{-x^2}
};

// Golub-Welsch construction of the n-point Gauss-Hermite rule.
GaussHermiteRule GaussHermite(int n);

// Average of e^{-i phi a^dag a} rho e^{i phi a^dag a} over a zero-mean
// Gaussian phase of variance g, by Gauss-Hermite quadrature.
FockDensityMatrix PhaseAverageOracle(const FockDensityMatrix& rho, const DephasingParams& params,
                                     int nodes);

}  // namespace dephcap
