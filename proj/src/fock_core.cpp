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

#include "dephcap/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace dephcap {
namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPositivityTol = -1e-10;
constexpr double kCoherentResidualBound = 1e-12;

// Diagonal of a^dag a on a dim-dimensional truncation.
Eigen::VectorXd NumberDiagonal(int dim) {
  return Eigen::VectorXd::LinSpaced(dim, 0.0, static_cast<double>(dim - 1));
}

void RequireEnvironment(const DephasingParams& params, int n_max, int env_dim) {
  if (env_dim < 1) throw std::invalid_argument("env_dim must be positive");
  const double worst = WorstCoherentResidual(params, n_max, env_dim);
  if (!(worst < kCoherentResidualBound)) {
    std::ostringstream msg;
    msg << "environment truncation env_dim=" << env_dim << " too small for gamma="
        << params.gamma() << ", N=" << n_max << ": worst coherent-state residual " << worst;
    throw TruncationError(msg.str(), worst);
  }
}

}  // namespace

FockDensityMatrix::FockDensityMatrix(ComplexMatrix entries) : rho_(std::move(entries)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
    throw std::invalid_argument("density matrix must be square and nonempty");
  }
  const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol) {
    throw std::invalid_argument("density matrix not Hermitian (deviation " +
                                std::to_string(asym) + ")");
  }
  const Complex tr = rho_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr.real() << (tr.imag() < 0 ? "-" : "+")
        << std::abs(tr.imag()) << "i, expected 1";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < kPositivityTol) {
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(lowest));
  }
}

FockDensityMatrix FockDensityMatrix::FromDistribution(const InputDistribution& p) {
  ComplexMatrix rho = ComplexMatrix::Zero(p.size(), p.size());
  for (int m = 0; m < p.size(); ++m) rho(m, m) = p[m];
  return FockDensityMatrix(std::move(rho));
}

FockDensityMatrix FockDensityMatrix::Pure(const ComplexVector& psi) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw std::invalid_argument("pure state vector is zero");
  ComplexMatrix rho = psi * psi.adjoint() / norm2;
  // Exact Hermitian symmetrization; the outer product is Hermitian up to roundoff.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return FockDensityMatrix(std::move(rho));
}

InputDistribution FockDensityMatrix::populations() const {
  std::vector<double> p(static_cast<std::size_t>(dim()));
  for (int m = 0; m < dim(); ++m) p[static_cast<std::size_t>(m)] = std::max(0.0, rho_(m, m).real());
  return InputDistribution::Normalized(std::move(p));
}

FockDensityMatrix FockDensityMatrix::diagonal_part() const {
  ComplexMatrix d = ComplexMatrix::Zero(dim(), dim());
  for (int m = 0; m < dim(); ++m) d(m, m) = Complex(rho_(m, m).real(), 0.0);
  return FockDensityMatrix(std::move(d));
}

FockDensityMatrix RandomDensityMatrix(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix w(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) w(i, j) = Complex(gauss(rng), gauss(rng));
  }
  ComplexMatrix rho = w * w.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return FockDensityMatrix(std::move(rho));
}

CoherentVector::CoherentVector(Complex amplitude, int dim) : amplitude_(amplitude) {
  if (dim < 1) throw std::invalid_argument("coherent vector dimension must be positive");
  entries_.resize(dim);
  const double r = std::abs(amplitude);
  const double phase = std::arg(amplitude);
  double mass = 0.0;
  for (int k = 0; k < dim; ++k) {
    double magnitude;
    if (r == 0.0) {
      magnitude = (k == 0) ? 1.0 : 0.0;
    } else {
      // e^{-r^2/2} r^k / sqrt(k!) in log space; stays finite for large r.
      magnitude = std::exp(-0.5 * r * r + k * std::log(r) - 0.5 * std::lgamma(k + 1.0));
    }
    entries_[k] = std::polar(magnitude, k * phase);
    mass += magnitude * magnitude;
  }
  residual_ = std::max(0.0, 1.0 - mass);
}

JointState::JointState(int sys_dim, int env_dim, ComplexMatrix entries)
    : sys_dim_(sys_dim), env_dim_(env_dim), entries_(std::move(entries)) {
  if (sys_dim < 1 || env_dim < 1 || entries_.rows() != sys_dim * env_dim ||
      entries_.cols() != sys_dim * env_dim) {
    throw std::invalid_argument("joint state shape does not match sys_dim * env_dim");
  }
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  const double tr_dev = std::abs(entries_.trace() - Complex(1.0, 0.0));
  if (asym > 1e-10 || tr_dev > 1e-10) {
    throw std::invalid_argument("joint state is not Hermitian with unit trace");
  }
}

ComplexMatrix JointState::TraceOutEnvironment() const {
  ComplexMatrix out = ComplexMatrix::Zero(sys_dim_, sys_dim_);
  for (int m = 0; m < sys_dim_; ++m) {
    for (int n = 0; n < sys_dim_; ++n) {
      Complex acc = 0.0;
      for (int k = 0; k < env_dim_; ++k) acc += entries_(m * env_dim_ + k, n * env_dim_ + k);
      out(m, n) = acc;
    }
  }
  return out;
}

ComplexMatrix JointState::TraceOutSystem() const {
  ComplexMatrix out = ComplexMatrix::Zero(env_dim_, env_dim_);
  for (int m = 0; m < sys_dim_; ++m) {
    out += entries_.block(m * env_dim_, m * env_dim_, env_dim_, env_dim_);
  }
  return out;
}

double VonNeumannEntropyBits(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  double nats = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()[i];
    if (lambda > 0.0) nats -= lambda * std::log(lambda);
  }
  return nats / std::numbers::ln2;
}

int DefaultEnvDim(const DephasingParams& params, int n_max) {
  const double mean = params.gamma() * n_max * n_max;
  return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(std::max(mean, 1.0)) + 20.0));
}

double WorstCoherentResidual(const DephasingParams& params, int n_max, int env_dim) {
  double worst = 0.0;
  const double root = std::sqrt(params.gamma());
  for (int m = 0; m <= n_max; ++m) {
    worst = std::max(worst, CoherentVector(Complex(root * m, 0.0), env_dim).residual());
  }
  return worst;
}

FockDensityMatrix ApplyDephasing(const FockDensityMatrix& rho, const DephasingParams& params) {
  ComplexMatrix out = rho.matrix();
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < rho.dim(); ++n) {
      if (m == n) continue;
      const double d = m - n;
      out(m, n) *= std::exp(-0.5 * params.gamma() * d * d);
    }
  }
  return FockDensityMatrix(std::move(out));
}

double KrausCompletenessResidual(const DephasingParams& params, int dim, int j_max) {
  double worst = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double mean = params.gamma() * n * n;
    // Poisson(mean) mass on 0..j_max.
    double term = std::exp(-mean);
    double mass = term;
    for (int j = 1; j <= j_max; ++j) {
      term *= mean / j;
      mass += term;
    }
    worst = std::max(worst, std::abs(1.0 - mass));
  }
  return worst;
}

KrausOutcome KrausApply(const FockDensityMatrix& rho, const DephasingParams& params, int j_max,
                        double tolerance) {
  if (j_max < 0) throw std::invalid_argument("j_max must be >= 0");
  const int dim = rho.dim();
  const Eigen::VectorXd number = NumberDiagonal(dim);
  const double root = std::sqrt(params.gamma());

  // Diagonal of K_j, built by the recurrence K_j = K_{j-1} (-i sqrt(g) n) / sqrt(j).
  ComplexVector diag(dim);
  for (int n = 0; n < dim; ++n) diag[n] = std::exp(-0.5 * params.gamma() * number[n] * number[n]);

  KrausOutcome outcome;
  outcome.output = ComplexMatrix::Zero(dim, dim);
  for (int j = 0; j <= j_max; ++j) {
    if (j > 0) {
      for (int n = 0; n < dim; ++n) diag[n] *= Complex(0.0, -root * number[n]) / std::sqrt(j);
    }
    outcome.output += diag.asDiagonal() * rho.matrix() * diag.conjugate().asDiagonal();
  }
  outcome.j_max = j_max;
  outcome.completeness_residual = KrausCompletenessResidual(params, dim, j_max);
  outcome.within_tolerance = outcome.completeness_residual < tolerance;
  return outcome;
}

KrausOutcome KrausApplyAdaptive(const FockDensityMatrix& rho, const DephasingParams& params,
                                double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("Kraus tolerance must be positive");
  int j_max = 0;
  while (KrausCompletenessResidual(params, rho.dim(), j_max) >= tolerance) {
    if (++j_max > 100000) {
      throw std::runtime_error("Kraus truncation did not reach the requested tolerance");
    }
  }
  return KrausApply(rho, params, j_max, tolerance);
}

EvolutionOutcome EvolveMasterEquation(const FockDensityMatrix& rho, double t, int steps) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be >= 0");
  if (steps < 1) throw std::invalid_argument("step count must be positive");

  const int dim = rho.dim();
  const double h = t / steps;

  // Coherence |m><n| decays at rate (m-n)^2/2 and RK4 multiplies it by
  // R(-h r) per step, so the global error per unit coherence is exactly
  // |R^steps - e^{-t r}|.
  double estimated_error = 0.0;
  double worst_amplification = 0.0;
  for (int d = 1; d < dim; ++d) {
    const double rate = 0.5 * d * d;
    const double z = h * rate;
    const double rk = 1.0 - z + z * z / 2.0 - z * z * z / 6.0 + z * z * z * z / 24.0;
    worst_amplification = std::max(worst_amplification, std::abs(rk));
    estimated_error =
        std::max(estimated_error, std::abs(std::pow(rk, steps) - std::exp(-t * rate)));
  }
  if (worst_amplification > 1.0) {
    std::ostringstream msg;
    msg << "master-equation step h=" << h << " is outside the RK4 stability interval; "
        << "estimated error " << estimated_error;
    throw std::domain_error(msg.str());
  }

  const Eigen::VectorXd number = NumberDiagonal(dim);
  const Eigen::VectorXd number_sq = number.cwiseAbs2();
  auto generator = [&](const ComplexMatrix& x) -> ComplexMatrix {
    return number.asDiagonal() * x * number.asDiagonal() -
           0.5 * (number_sq.asDiagonal() * x + x * number_sq.asDiagonal());
  };

  ComplexMatrix state = rho.matrix();
  for (int s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = generator(state);
    const ComplexMatrix k2 = generator(state + 0.5 * h * k1);
    const ComplexMatrix k3 = generator(state + 0.5 * h * k2);
    const ComplexMatrix k4 = generator(state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {FockDensityMatrix(std::move(state)), estimated_error};
}

std::pair<FockDensityMatrix, FockDensityMatrix> ComposeCheck(double gamma1, double gamma2,
                                                             const FockDensityMatrix& rho) {
  const DephasingParams first(gamma1);
  const DephasingParams second(gamma2);
  const DephasingParams combined(gamma1 + gamma2);
  return {ApplyDephasing(ApplyDephasing(rho, first), second), ApplyDephasing(rho, combined)};
}

FockDensityMatrix PhaseRotate(const FockDensityMatrix& rho, double theta) {
  ComplexVector u(rho.dim());
  for (int k = 0; k < rho.dim(); ++k) u[k] = std::polar(1.0, -theta * k);
  ComplexMatrix out = u.asDiagonal() * rho.matrix() * u.conjugate().asDiagonal();
  return FockDensityMatrix(std::move(out));
}

FockDensityMatrix ComplementaryOutput(const InputDistribution& p, const DephasingParams& params,
                                      int env_dim) {
  RequireEnvironment(params, p.n_max(), env_dim);
  const double root = std::sqrt(params.gamma());
  ComplexMatrix omega = ComplexMatrix::Zero(env_dim, env_dim);
  for (int m = 0; m < p.size(); ++m) {
    if (p[m] == 0.0) continue;
    const CoherentVector c(Complex(root * m, 0.0), env_dim);
    omega += p[m] * c.entries() * c.entries().adjoint();
  }
  omega = 0.5 * (omega + omega.adjoint()).eval();
  return FockDensityMatrix(std::move(omega));
}

DilationOutput DilationOracle(const FockDensityMatrix& rho, const DephasingParams& params,
                              int env_dim) {
  const int sys_dim = rho.dim();
  RequireEnvironment(params, sys_dim - 1, env_dim);
  const double root = std::sqrt(params.gamma());

  std::vector<ComplexVector> env;
  env.reserve(static_cast<std::size_t>(sys_dim));
  for (int m = 0; m < sys_dim; ++m) {
    env.push_back(CoherentVector(Complex(0.0, -root * m), env_dim).entries());
  }

  const int total = sys_dim * env_dim;
  ComplexMatrix joint(total, total);
  for (int m = 0; m < sys_dim; ++m) {
    for (int n = 0; n < sys_dim; ++n) {
      joint.block(m * env_dim, n * env_dim, env_dim, env_dim) =
          rho(m, n) * env[static_cast<std::size_t>(m)] * env[static_cast<std::size_t>(n)].adjoint();
    }
  }
  const JointState state(sys_dim, env_dim, std::move(joint));

  ComplexMatrix sys = state.TraceOutEnvironment();
  ComplexMatrix envr = state.TraceOutSystem();
  sys = 0.5 * (sys + sys.adjoint()).eval();
  envr = 0.5 * (envr + envr.adjoint()).eval();
  return {FockDensityMatrix(std::move(sys)), FockDensityMatrix(std::move(envr))};
}

GaussHermiteRule GaussHermite(int n) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = sqrt_pi * v0 * v0;
  }
  return rule;
}

FockDensityMatrix PhaseAverageOracle(const FockDensityMatrix& rho, const DephasingParams& params,
                                     int nodes) {
  if (nodes < 1) throw std::invalid_argument("quadrature needs at least one node");
  // The phase density degenerates to a delta at gamma = 0.
  if (params.gamma() == 0.0) return rho;

  const GaussHermiteRule rule = GaussHermite(nodes);
  const double scale = std::sqrt(2.0 * params.gamma());
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  const int dim = rho.dim();

  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  ComplexVector u(dim);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double phi = scale * rule.nodes[i];
    for (int k = 0; k < dim; ++k) u[k] = std::polar(1.0, -phi * k);
    out += (norm * rule.weights[i]) * (u.asDiagonal() * rho.matrix() * u.conjugate().asDiagonal());
  }
  // The weights sum to sqrt(pi) only up to roundoff; the diagonal is exact.
  for (int k = 0; k < dim; ++k) out(k, k) = rho(k, k);
  out = 0.5 * (out + out.adjoint()).eval();
  return FockDensityMatrix(std::move(out));
}

}  // namespace dephcap
