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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
//
//   acceptance [work_dir]
//
// work_dir receives the sweep files compared by the determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dephcap/capacity_opt.hpp"
#include "dephcap/cli_io.hpp"
#include "dephcap/fock_core.hpp"
#include "dephcap/replica_entropy.hpp"
#include "oracles.hpp"

namespace {

using namespace dephcap;
using dephcap::testing::RandomSimplexPoint;
using dephcap::testing::TwoPointClosedForm;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double MaxAbs(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Optimizer results shared by the structural criteria, keyed by (gamma, N).
class OptimaCache {
 public:
  void Fill(const std::vector<double>& gammas, const std::vector<int>& ns) {
    OptimizerConfig config;
    for (auto& r : CapacitySweep(gammas, ns, config)) {
      results_.emplace(std::make_pair(r.gamma, r.n), std::move(r));
    }
  }
  const CapacityResult& at(double gamma, int n) const { return results_.at({gamma, n}); }

 private:
  std::map<std::pair<double, int>, CapacityResult> results_;
};

Outcome TwoLevelClosedForm() {
  double worst_p = 0.0, worst_q = 0.0;
  bool all_converged = true;
  for (int i = 0; i < 30; ++i) {
    const double gamma = 0.1 + (3.0 - 0.1) * i / 29.0;
    const auto r = MaximizeCoherentInformation(1, DephasingParams(gamma));
    all_converged = all_converged && r.converged;
    worst_p = std::max({worst_p, std::abs(r.p_opt[0] - 0.5), std::abs(r.p_opt[1] - 0.5)});
    worst_q = std::max(worst_q, std::abs(r.q_bits - TwoPointClosedForm(gamma, 1)));
  }
  return {all_converged && worst_p <= 1e-4 && worst_q <= 1e-8,
          "30 gammas in [0.1, 3]; max |p-1/2| = " + Sci(worst_p) + " (tol 1e-4), max |q-closed| = " +
              Sci(worst_q) + " (tol 1e-8)"};
}

Outcome ReplicaVsBruteForce() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 5; ++n) {
    for (double gamma : {0.25, 1.0, 2.0}) {
      const DephasingParams params(gamma);
      for (int s = 0; s < 50; ++s) {
        auto w = RandomSimplexPoint(n + 1, rng);
        if (s % 5 == 4) w[static_cast<std::size_t>(s % (n + 1))] = 0.0;
        const auto p = InputDistribution::Normalized(w);
        worst = std::max(worst,
                         std::abs(EntropyReplica(p, params) - EntropyBruteforceOracle(p, params)));
        ++cases;
      }
    }
  }
  return {worst <= 1e-8, std::to_string(cases) + " distributions; max |S_replica - S_brute| = " +
                             Sci(worst) + " bits (tol 1e-8)"};
}

Outcome RepresentationEquivalence() {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 5; ++n) {
    const int dim = n + 1;
    for (double gamma : {0.25, 1.0, 2.0}) {
      const DephasingParams params(gamma);
      // RK4 step of 0.02 in units of the fastest coherence decay rate.
      const double fastest = 0.5 * (dim - 1) * (dim - 1);
      const int steps = static_cast<int>(std::ceil(gamma * fastest / 0.02));
      // Gauss-Hermite nodes: enough to integrate e^{-i sqrt(2g) d x} to ~1e-12.
      const double f = std::sqrt(2.0 * gamma) * (dim - 1);
      const int nodes = std::max(16, static_cast<int>(std::ceil(f * f + 4.0 * f + 40.0)));
      for (int s = 0; s < 20; ++s) {
        const auto rho = RandomDensityMatrix(dim, rng);
        std::vector<ComplexMatrix> paths;
        paths.push_back(ApplyDephasing(rho, params).matrix());
        paths.push_back(KrausApplyAdaptive(rho, params).output);
        paths.push_back(EvolveMasterEquation(rho, gamma, steps).state.matrix());
        paths.push_back(DilationOracle(rho, params, DefaultEnvDim(params, n)).system.matrix());
        paths.push_back(PhaseAverageOracle(rho, params, nodes).matrix());
        for (std::size_t a = 0; a < paths.size(); ++a) {
          for (std::size_t b = a + 1; b < paths.size(); ++b) {
            worst = std::max(worst, MaxAbs(paths[a], paths[b]));
          }
        }
        ++cases;
      }
    }
  }
  return {worst <= 1e-8, std::to_string(cases) +
                             " states x 5 paths (closed form, Kraus, master eq., dilation, "
                             "quadrature); max pairwise entry gap = " +
                             Sci(worst) + " (tol 1e-8)"};
}

Outcome SemigroupAndCovariance() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> rate(0.0, 3.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double worst_compose = 0.0, worst_covariance = 0.0;
  int cases = 0;
  for (int dim = 2; dim <= 9; ++dim) {
    for (int s = 0; s < 25; ++s) {
      const auto rho = RandomDensityMatrix(dim, rng);
      const auto [composed, direct] = ComposeCheck(rate(rng), rate(rng), rho);
      worst_compose = std::max(worst_compose, MaxAbs(composed.matrix(), direct.matrix()));
      const DephasingParams params(rate(rng));
      const double theta = angle(rng);
      worst_covariance = std::max(
          worst_covariance, MaxAbs(ApplyDephasing(PhaseRotate(rho, theta), params).matrix(),
                                   PhaseRotate(ApplyDephasing(rho, params), theta).matrix()));
      ++cases;
    }
  }
  return {worst_compose <= 1e-14 && worst_covariance <= 1e-14,
          std::to_string(cases) + " states; semigroup gap = " + Sci(worst_compose) +
              ", phase covariance gap = " + Sci(worst_covariance) + " (tol 1e-14)"};
}

// J(rho) from the explicit isometry: S(system marginal) - S(environment marginal).
double DilationCoherentInformation(const FockDensityMatrix& rho, const DephasingParams& params) {
  const auto out = DilationOracle(rho, params, DefaultEnvDim(params, rho.dim() - 1));
  return VonNeumannEntropyBits(out.system.matrix()) -
         VonNeumannEntropyBits(out.environment.matrix());
}

Outcome DiagonalDominance() {
  std::mt19937_64 rng(1004);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_diag_gap = 0.0;
  int cases = 0;
  for (double gamma : {0.5, 1.0}) {
    const DephasingParams params(gamma);
    for (int s = 0; s < 50; ++s) {
      const int n = 1 + s % 4;
      const auto rho = RandomDensityMatrix(n + 1, rng);
      const auto diag = rho.diagonal_part();
      const double j_rho = DilationCoherentInformation(rho, params);
      const double j_diag = DilationCoherentInformation(diag, params);
      worst_excess = std::max(worst_excess, j_rho - j_diag);
      worst_diag_gap = std::max(
          worst_diag_gap, std::abs(j_diag - CoherentInformationDiagonal(rho.populations(), params)));
      ++cases;
    }
  }
  return {worst_excess <= 1e-9 && worst_diag_gap <= 1e-9,
          std::to_string(cases) + " non-diagonal states; max J(rho) - J(diag rho) = " +
              Sci(worst_excess) + " (tol 1e-9); diagonal J vs replica objective gap = " +
              Sci(worst_diag_gap)};
}

Outcome OptimalStructure(const OptimaCache& cache) {
  double worst_mirror = 0.0, worst_energy = 0.0;
  int monotone_violations = 0, unconverged = 0, cases = 0;
  for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 8; ++n) {
      const auto& r = cache.at(gamma, n);
      if (!r.converged) ++unconverged;
      for (int m = 0; m <= n; ++m) {
        worst_mirror = std::max(worst_mirror, std::abs(r.p_opt[m] - r.p_opt[n - m]));
      }
      for (int m = 0; m + 1 <= n / 2; ++m) {
        if (r.p_opt[m + 1] < r.p_opt[m]) ++monotone_violations;
      }
      worst_energy = std::max(worst_energy, std::abs(r.p_opt.mean_energy() - 0.5 * n));
      ++cases;
    }
  }
  return {unconverged == 0 && monotone_violations == 0 && worst_mirror <= 1e-3 &&
              worst_energy <= 1e-3,
          std::to_string(cases) + " optima (N<=8); monotone violations = " +
              std::to_string(monotone_violations) + ", max |p_m - p_{N-m}| = " + Sci(worst_mirror) +
              ", max |<n> - N/2| = " + Sci(worst_energy) + " (tol 1e-3), unconverged = " +
              std::to_string(unconverged)};
}

Outcome MonotonicityAndSaturation(const OptimaCache& cache, const std::vector<double>& gammas) {
  int gamma_violations = 0, n_violations = 0;
  double min_gamma_drop = std::numeric_limits<double>::infinity();
  double min_n_step = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 8; ++n) {
    for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
      const double drop = cache.at(gammas[i], n).q_bits - cache.at(gammas[i + 1], n).q_bits;
      min_gamma_drop = std::min(min_gamma_drop, drop);
      if (!(drop > 0.0)) ++gamma_violations;
    }
  }
  for (double gamma : gammas) {
    for (int n = 1; n < 8; ++n) {
      const double step = cache.at(gamma, n + 1).q_bits - cache.at(gamma, n).q_bits;
      min_n_step = std::min(min_n_step, step);
      if (step < 0.0) ++n_violations;
    }
  }
  // Saturation at gamma = 2: smallest N after which every increment up to
  // N = 16 stays below 1e-3 bits.
  constexpr int kLargest = 16;
  int threshold = -1;
  std::ostringstream increments;
  for (int n = 1; n < kLargest; ++n) {
    const double step = cache.at(2.0, n + 1).q_bits - cache.at(2.0, n).q_bits;
    if (step < 0.0) ++n_violations;
    if (step >= 1e-3) threshold = -1;
    else if (threshold < 0) threshold = n;
    if (n >= 10) increments << " " << n << "->" << n + 1 << ":" << Sci(step);
  }
  const bool saturates = threshold > 0 && threshold <= kLargest - 3;
  return {gamma_violations == 0 && n_violations == 0 && saturates,
          "min q drop along gamma = " + Sci(min_gamma_drop) +
              " (must be > 0), min q step along N = " + Sci(min_n_step) +
              " (must be >= 0); gamma=2 increments < 1e-3 from N = " + std::to_string(threshold) +
              " through 16;" + increments.str()};
}

Outcome AnsatzAdequacy(const OptimaCache& cache) {
  double worst_gap = 0.0, worst_sigma = 0.0, worst_excess = -1.0;
  for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 5; ++n) {
      const DephasingParams params(gamma);
      const auto ansatz = MaximizeOverAnsatz(n, params);
      const double full = cache.at(gamma, n).q_bits;
      worst_gap = std::max(worst_gap, full - ansatz.q_bits);
      worst_excess = std::max(worst_excess, ansatz.q_bits - full);
      // At N = 1 every centered width gives (1/2, 1/2), so sigma has no optimum.
      if (n >= 2) {
        const double fit = 0.2 * n + 0.6;
        worst_sigma = std::max(worst_sigma, std::abs(ansatz.sigma - fit) / fit);
      }
    }
  }
  return {worst_gap <= 1e-3 && worst_excess <= 1e-9 && worst_sigma <= 0.25,
          "N<=5; max (q_full - q_ansatz) = " + Sci(worst_gap) +
              " bits (tol 1e-3); max relative |sigma - (0.2N+0.6)| = " + Sci(worst_sigma) +
              " (tol 0.25, N>=2 since sigma is free at N=1)"};
}

Outcome AsymptoticDecay(const OptimaCache& cache) {
  const double expected = std::exp(-8.0) / (2.0 * std::numbers::ln2);
  const double two_level = std::abs(cache.at(8.0, 1).q_bits - expected) / expected;
  double worst = 0.0;
  for (double gamma : {6.0, 8.0}) {
    for (int n = 1; n <= 4; ++n) {
      const auto& r = cache.at(gamma, n);
      const double approx = AsymptoticCapacity(r.p_opt, DephasingParams(gamma));
      worst = std::max(worst, std::abs(approx - r.q_bits) / r.q_bits);
    }
  }
  return {two_level <= 1e-3 && worst <= 0.05,
          "N=1, gamma=8 relative gap to e^-8/(2 ln 2) = " + Sci(two_level) +
              " (tol 1e-3); N<=4, gamma in {6,8} max relative gap = " + Sci(worst) + " (tol 0.05)"};
}

Outcome GradientCorrectness() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> rate(0.05, 3.0);
  double worst_mode = 0.0, worst_tangent = 0.0;
  for (int s = 0; s < 50; ++s) {
    const int n = 1 + s % 6;
    const DephasingParams params(rate(rng));
    const auto w = RandomSimplexPoint(n + 1, rng, 0.05);
    const InputDistribution p(w);
    const auto analytic = ObjectiveGradient(p, params, GradientMode::kAnalytic);
    const auto numeric = ObjectiveGradient(p, params, GradientMode::kFiniteDifference);
    worst_mode = std::max(worst_mode, (analytic - numeric).norm() / analytic.norm());

    // Directional derivatives along e_a - e_0 of the objective itself.
    const double h = 1e-5;
    Eigen::VectorXd exact(n), fd(n);
    for (int a = 1; a <= n; ++a) {
      auto up = w, down = w;
      up[static_cast<std::size_t>(a)] += h;
      up[0] -= h;
      down[static_cast<std::size_t>(a)] -= h;
      down[0] += h;
      fd[a - 1] = (CoherentInformationDiagonal(InputDistribution::Normalized(up), params) -
                   CoherentInformationDiagonal(InputDistribution::Normalized(down), params)) /
                  (2.0 * h);
      exact[a - 1] = analytic[a] - analytic[0];
    }
    worst_tangent = std::max(worst_tangent, (exact - fd).norm() / std::max(exact.norm(), 1e-12));
  }
  return {worst_mode <= 1e-6 && worst_tangent <= 1e-6,
          "50 interior points, N<=6; analytic vs central differences relative gap = " +
              Sci(worst_mode) + ", along simplex directions = " + Sci(worst_tangent) +
              " (tol 1e-6)"};
}

std::string ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome Determinism(const std::filesystem::path& work_dir) {
  std::filesystem::create_directories(work_dir);
  const auto config = ParseSweepConfig(R"([grid]
gammas = [0.25, 0.5, 1, 2]
n_min = 1
n_max = 5
[optimizer]
restarts = 4
seed = 7
)");
  const auto provenance = MakeProvenance(config.Hash());
  std::vector<std::string> names;
  int run = 0;
  for (int threads : {4, 4, 1}) {
    auto results = CapacitySweep(config.gamma_grid, config.n_grid, config.optimizer, threads);
    std::vector<ResultRecord> records;
    for (const auto& r : results) records.push_back(ToRecord(r, provenance));
    const std::string stem = "sweep_run" + std::to_string(run++) + "_t" + std::to_string(threads);
    WriteFile(work_dir / (stem + ".csv"), WriteCsv(records));
    WriteFile(work_dir / (stem + ".json"), WriteJson(records, provenance));
    names.push_back(stem);
  }
  bool identical = true;
  for (const char* ext : {".csv", ".json"}) {
    const auto reference = ReadBytes(work_dir / (names[0] + ext));
    identical = identical && !reference.empty();
    for (std::size_t i = 1; i < names.size(); ++i) {
      identical = identical && ReadBytes(work_dir / (names[i] + ext)) == reference;
    }
  }
  return {identical, "3 runs (4, 4, 1 threads) of a 20-point sweep, seed 7; CSV and JSON files " +
                         std::string(identical ? "byte-identical" : "DIFFER") + " in " +
                         work_dir.string()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path work_dir =
      argc > 1 ? std::filesystem::path(argv[1])
               : std::filesystem::temp_directory_path() / "dephcap_acceptance";

  const std::vector<double> gamma_grid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};
  OptimaCache cache;
  std::vector<double> all_gammas = gamma_grid;
  all_gammas.insert(all_gammas.end(), {6.0, 8.0});
  cache.Fill(all_gammas, {1, 2, 3, 4, 5, 6, 7, 8});
  cache.Fill({2.0}, {9, 10, 11, 12, 13, 14, 15, 16});

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 two-level closed form", TwoLevelClosedForm},
      {"C2 replica vs brute-force entropy", ReplicaVsBruteForce},
      {"C3 channel representation equivalence", RepresentationEquivalence},
      {"C4 semigroup and phase covariance", SemigroupAndCovariance},
      {"C5 diagonal inputs dominate", DiagonalDominance},
      {"C6 optimal distribution structure", [&] { return OptimalStructure(cache); }},
      {"C7 monotonicity and saturation",
       [&] { return MonotonicityAndSaturation(cache, gamma_grid); }},
      {"C8 discrete Gaussian ansatz", [&] { return AnsatzAdequacy(cache); }},
      {"C9 large-rate asymptotics", [&] { return AsymptoticDecay(cache); }},
      {"C10 gradient correctness", GradientCorrectness},
      {"C11 sweep determinism", [&] { return Determinism(work_dir); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.passed) ++failures;
    std::printf("%s %s: %s [%.2fs]\n", outcome.passed ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
