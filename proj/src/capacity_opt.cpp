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

#include "dephcap/capacity_opt.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "dephcap/replica_entropy.hpp"

namespace dephcap {
namespace {

constexpr double kFreezeThreshold = 1e-14;
constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kArmijo = 1e-4;

// Extended objective on unnormalized nonnegative weights (see header).
double ExtendedObjective(std::span<const double> w, const DephasingParams& params) {
  double shannon_nats = 0.0;
  double total = 0.0;
  for (double x : w) {
    total += x;
    if (x > 0.0) shannon_nats -= x * std::log(x);
  }
  const ReplicaSpectrum spec = SymmetricReplicaSpectrum(w, params);
  double replica_nats = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    const double a = spec.eigenvalues[k];
    if (a > 0.0) replica_nats -= a * std::log(a);
  }
  return (shannon_nats - replica_nats - (total - 1.0)) / std::numbers::ln2;
}

// Analytic gradient on the support of w; entries off the support are 0.
Eigen::VectorXd AnalyticGradient(std::span<const double> w, const DephasingParams& params) {
  const ReplicaSpectrum spec = SymmetricReplicaSpectrum(w, params);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(w.size()));
  Eigen::VectorXd f(spec.eigenvalues.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const double a = spec.eigenvalues[k];
    f[k] = a > 0.0 ? a * std::log(a) : 0.0;
  }
  for (std::size_t s = 0; s < spec.support.size(); ++s) {
    const int m = spec.support[s];
    const double wm = w[static_cast<std::size_t>(m)];
    // [f(M)]_mm with f(a) = a ln a, M = D^{1/2} G D^{1/2}.
    const double fmm = spec.eigenvectors.row(static_cast<Eigen::Index>(s)).cwiseAbs2().dot(f);
    g[m] = (-std::log(wm) - 1.0 + fmm / wm) / std::numbers::ln2;
  }
  return g;
}

Eigen::VectorXd FiniteDifferenceGradient(std::span<const double> w,
                                         const DephasingParams& params) {
  std::vector<double> probe(w.begin(), w.end());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(w.size()));
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (w[m] <= 0.0) continue;
    const double h = std::min(kFiniteDifferenceStep, 0.5 * w[m]);
    probe[m] = w[m] + h;
    const double up = ExtendedObjective(probe, params);
    probe[m] = w[m] - h;
    const double down = ExtendedObjective(probe, params);
    probe[m] = w[m];
    g[static_cast<Eigen::Index>(m)] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd GradientOf(std::span<const double> w, const DephasingParams& params,
                           GradientMode mode) {
  Eigen::VectorXd g = mode == GradientMode::kAnalytic ? AnalyticGradient(w, params)
                                                      : FiniteDifferenceGradient(w, params);
  for (Eigen::Index m = 0; m < g.size(); ++m) {
    if (!std::isfinite(g[m])) {
      throw std::domain_error("objective gradient is not finite at index " + std::to_string(m));
    }
  }
  return g;
}

std::vector<int> SupportOf(const std::vector<double>& w) {
  std::vector<int> s;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (w[m] > 0.0) s.push_back(static_cast<int>(m));
  }
  return s;
}

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct AscentRun {
  std::vector<double> p;
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
};

AscentRun MirrorAscent(std::vector<double> p, const DephasingParams& params,
                       const OptimizerConfig& config) {
  AscentRun run;
  double value = ExtendedObjective(p, params);
  // ln 2 is the exact natural-gradient step for the Shannon term.
  double eta = std::numbers::ln2;

  for (int it = 0; it < config.max_iterations; ++it) {
    const std::vector<int> support = SupportOf(p);
    const Eigen::VectorXd g = GradientOf(p, params, config.gradient_mode);
    run.residual = TangentResidual(g, support);
    run.iterations = it;
    if (run.residual < kGradientResidualTarget) {
      run.converged = true;
      break;
    }

    double gmax = -std::numeric_limits<double>::infinity();
    for (int m : support) gmax = std::max(gmax, g[m]);

    std::vector<double> next(p.size(), 0.0);
    double next_value = value;
    bool accepted = false;
    while (eta > 1e-30) {
      double total = 0.0;
      for (int m : support) {
        const auto i = static_cast<std::size_t>(m);
        next[i] = p[i] * std::exp(eta * (g[m] - gmax));
        total += next[i];
      }
      for (int m : support) {
        auto& x = next[static_cast<std::size_t>(m)];
        x /= total;
        if (x < kFreezeThreshold) x = 0.0;
      }
      double renorm = 0.0;
      for (double x : next) renorm += x;
      for (double& x : next) x /= renorm;

      next_value = ExtendedObjective(next, params);
      double directional = 0.0;
      for (int m : support) {
        const auto i = static_cast<std::size_t>(m);
        directional += g[m] * (next[i] - p[i]);
      }
      if (next_value >= value + kArmijo * directional) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;

    const double change = next_value - value;
    p = std::move(next);
    value = next_value;
    run.iterations = it + 1;
    eta = std::min(eta * 2.0, 1e15);
    if (std::abs(change) < config.objective_tolerance) {
      const Eigen::VectorXd gf = GradientOf(p, params, config.gradient_mode);
      run.residual = TangentResidual(gf, SupportOf(p));
      run.converged = true;
      break;
    }
  }
  run.p = std::move(p);
  run.value = value;
  return run;
}

double BinaryEntropyDeficit(double x) {
  // 1 - H2((1+x)/2) = sum_k x^{2k} / (k (2k-1)) / (2 ln 2); the series avoids
  // cancellation for small x.
  x = std::abs(x);
  if (x >= 1.0) return 1.0;
  if (x < 0.5) {
    const double x2 = x * x;
    double power = x2;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double term = power / (k * (2.0 * k - 1.0));
      sum += term;
      if (term < 1e-18 * sum) break;
      power *= x2;
    }
    return sum / (2.0 * std::numbers::ln2);
  }
  return ((1.0 + x) * std::log1p(x) + (1.0 - x) * std::log1p(-x)) / (2.0 * std::numbers::ln2);
}

}  // namespace

void OptimizerConfig::Validate() const {
  if (!(objective_tolerance > 0.0)) throw std::invalid_argument("objective tolerance must be > 0");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

TwoPointBound TwoPointLowerBound(const DephasingParams& params, int j) {
  if (j < 1) throw std::invalid_argument("two-point separation j must be >= 1");
  const double overlap = std::exp(-0.5 * params.gamma() * j * j);
  TwoPointBound b;
  b.gamma = params.gamma();
  b.j = j;
  b.q_plus = 0.5 * (1.0 + overlap);
  b.q_minus = 0.5 * (1.0 - overlap);
  b.value_bits = BinaryEntropyDeficit(overlap);
  return b;
}

Eigen::VectorXd ObjectiveGradient(const InputDistribution& p, const DephasingParams& params,
                                  GradientMode mode) {
  for (int m = 0; m < p.size(); ++m) {
    if (!(p[m] > 0.0)) {
      throw std::domain_error("objective gradient needs p_" + std::to_string(m) + " > 0");
    }
  }
  return GradientOf(p.weights(), params, mode);
}

double TangentResidual(const Eigen::VectorXd& gradient, const std::vector<int>& support) {
  if (support.empty()) return 0.0;
  double mean = 0.0;
  for (int m : support) mean += gradient[m];
  mean /= static_cast<double>(support.size());
  double sq = 0.0;
  for (int m : support) sq += (gradient[m] - mean) * (gradient[m] - mean);
  return std::sqrt(sq);
}

CapacityResult MaximizeCoherentInformation(int n_max, const DephasingParams& params,
                                           const OptimizerConfig& config) {
  if (n_max < 1) throw std::invalid_argument("truncation N must be >= 1");
  config.Validate();
  const auto started = std::chrono::steady_clock::now();

  const InputDistribution seed_start =
      AnsatzDistribution(DiscreteGaussianAnsatz::Centered(n_max, EmpiricalAnsatzWidth(n_max)));
  std::mt19937_64 rng(SplitMix(config.seed ^ SplitMix(static_cast<std::uint64_t>(n_max)) ^
                               std::bit_cast<std::uint64_t>(params.gamma())));
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);

  AscentRun best;
  for (int r = 0; r < config.restarts; ++r) {
    std::vector<double> start;
    if (r == 0) {
      start.assign(seed_start.weights().begin(), seed_start.weights().end());
    } else if (r == 1) {
      start.assign(static_cast<std::size_t>(n_max) + 1, 1.0 / (n_max + 1));
    } else {
      start.assign(seed_start.weights().begin(), seed_start.weights().end());
      double total = 0.0;
      for (double& x : start) {
        x *= std::exp(jitter(rng));
        total += x;
      }
      for (double& x : start) x /= total;
    }
    AscentRun run = MirrorAscent(std::move(start), params, config);
    const bool better = run.value > best.value || (run.converged && !best.converged &&
                                                   run.value >= best.value - 1e-12);
    if (better) best = std::move(run);
  }

  CapacityResult result;
  result.gamma = params.gamma();
  result.n = n_max;
  result.q_bits = std::clamp(best.value, 0.0, std::log2(static_cast<double>(n_max + 1)));
  result.p_opt = InputDistribution::Normalized(best.p);
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.gradient_residual = best.residual;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

DiscreteGaussianAnsatz DiscreteGaussianAnsatz::Centered(int n_max, double sigma) {
  return {0.5 * n_max, sigma, n_max};
}

InputDistribution AnsatzDistribution(const DiscreteGaussianAnsatz& ansatz) {
  if (!(ansatz.sigma > 0.0)) throw std::invalid_argument("ansatz width sigma must be > 0");
  if (ansatz.n_max < 0) throw std::invalid_argument("ansatz N must be >= 0");
  // Exponents are shifted by the closest level so sigma -> 0 still normalizes.
  double closest = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= ansatz.n_max; ++m) {
    closest = std::min(closest, (m - ansatz.mu) * (m - ansatz.mu));
  }
  std::vector<double> w(static_cast<std::size_t>(ansatz.n_max) + 1);
  for (int m = 0; m <= ansatz.n_max; ++m) {
    const double d2 = (m - ansatz.mu) * (m - ansatz.mu) - closest;
    w[static_cast<std::size_t>(m)] = std::exp(-d2 / (2.0 * ansatz.sigma * ansatz.sigma));
  }
  return InputDistribution::Normalized(std::move(w));
}

double EmpiricalAnsatzWidth(int n_max) { return 0.2 * n_max + 0.6; }

AnsatzOptimum MaximizeOverAnsatz(int n_max, const DephasingParams& params) {
  if (n_max < 1) throw std::invalid_argument("truncation N must be >= 1");
  const double lo = 0.05;
  const double hi = 5.0 * n_max;
  auto value = [&](double sigma) {
    return CoherentInformationDiagonal(
        AnsatzDistribution(DiscreteGaussianAnsatz::Centered(n_max, sigma)), params);
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value(c);
  double fd = value(d);
  while (b - a > 1e-9 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  AnsatzOptimum opt;
  opt.sigma = 0.5 * (a + b);
  opt.q_bits = value(opt.sigma);
  const double edge_tol = 1e-6 * (hi - lo);
  opt.interior = opt.sigma - lo > edge_tol && hi - opt.sigma > edge_tol;
  return opt;
}

double AsymptoticCapacity(const InputDistribution& p, const DephasingParams& params) {
  double sum = 0.0;
  for (int m = 0; m + 1 < p.size(); ++m) {
    const double a = p[m];
    const double b = p[m + 1];
    if (a == 0.0 || b == 0.0) continue;
    if (std::abs(a - b) < 1e-8 * std::max(a, b)) {
      sum += a / std::numbers::ln2;
    } else {
      sum += a * b / (a - b) * std::log2(a / b);
    }
  }
  return std::exp(-params.gamma()) * sum;
}

bool AsymptoticRegimeReliable(const DephasingParams& params) { return params.epsilon() < 0.1; }

std::vector<CapacityResult> CapacitySweep(const std::vector<double>& gammas,
                                          const std::vector<int>& ns,
                                          const OptimizerConfig& config, int threads) {
  if (gammas.empty() || ns.empty()) throw std::invalid_argument("sweep grids must be nonempty");
  config.Validate();

  struct Point {
    double gamma;
    int n;
  };
  std::vector<Point> points;
  for (double g : gammas) {
    for (int n : ns) points.push_back({g, n});
  }
  std::vector<CapacityResult> results(points.size());

  auto evaluate = [&](std::size_t i) {
    const Point& pt = points[i];
    try {
      results[i] = MaximizeCoherentInformation(pt.n, DephasingParams(pt.gamma), config);
    } catch (const std::exception& e) {
      CapacityResult failed;
      failed.gamma = pt.gamma;
      failed.n = pt.n;
      failed.q_bits = std::numeric_limits<double>::quiet_NaN();
      failed.failure = e.what();
      results[i] = std::move(failed);
    }
  };

  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(points.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) evaluate(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
        evaluate(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace dephcap
