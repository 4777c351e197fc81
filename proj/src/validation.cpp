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

#include "dephcap/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dephcap/fock_core.hpp"

namespace dephcap {
namespace {

constexpr std::array<double, 3> kRates = {0.25, 1.0, 2.0};

bool Full(const ValidationOptions& o) { return o.level == ValidationLevel::kFull; }

double MaxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

InputDistribution RandomDistribution(int size, std::mt19937_64& rng) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> w(static_cast<std::size_t>(size));
  for (double& x : w) x = draw(rng);
  return InputDistribution::Normalized(std::move(w));
}

SuiteReport Finish(SuiteReport r) {
  r.passed = r.worst <= r.tolerance;
  std::ostringstream d;
  d << r.cases << " cases, worst deviation " << r.worst << " (tolerance " << r.tolerance << ")";
  if (!r.detail.empty()) d << "; " << r.detail;
  r.detail = d.str();
  return r;
}

}  // namespace

int RecommendedMasterSteps(double t, int dim) {
  const double fastest = 0.5 * (dim - 1) * (dim - 1);
  return std::max(1, static_cast<int>(std::ceil(t * fastest / 0.02)));
}

int RecommendedQuadratureNodes(const DephasingParams& params, int dim) {
  // The integrand e^{-i sqrt(2g) x d} needs roughly (sqrt(2g) d)^2 / 2 nodes
  // plus a margin for 1e-10 accuracy.
  const double freq = std::sqrt(2.0 * params.gamma()) * (dim - 1);
  return std::max(16, static_cast<int>(std::ceil(freq * freq + 4.0 * freq + 40.0)));
}

SuiteReport ValidateRepresentations(const ValidationOptions& options) {
  SuiteReport r{"representation-equivalence", false, 0, 0.0, 1e-8, {}};
  std::mt19937_64 rng(options.seed);
  const int max_n = Full(options) ? 5 : 3;
  const int states = Full(options) ? 20 : 3;
  for (double gamma : kRates) {
    const DephasingParams params(gamma);
    for (int n = 1; n <= max_n; ++n) {
      for (int s = 0; s < states; ++s) {
        const FockDensityMatrix rho = RandomDensityMatrix(n + 1, rng);
        const std::array<ComplexMatrix, 5> paths = {
            ApplyDephasing(rho, params).matrix(),
            KrausApplyAdaptive(rho, params, 1e-14).output,
            EvolveMasterEquation(rho, gamma, RecommendedMasterSteps(gamma, n + 1)).state.matrix(),
            DilationOracle(rho, params, DefaultEnvDim(params, n)).system.matrix(),
            PhaseAverageOracle(rho, params, RecommendedQuadratureNodes(params, n + 1)).matrix(),
        };
        for (std::size_t a = 0; a < paths.size(); ++a) {
          for (std::size_t b = a + 1; b < paths.size(); ++b) {
            r.worst = std::max(r.worst, MaxAbsDiff(paths[a], paths[b]));
          }
        }
        ++r.cases;
      }
    }
  }
  return Finish(r);
}

SuiteReport ValidateReplicaEntropy(const ValidationOptions& options) {
  SuiteReport r{"replica-vs-bruteforce", false, 0, 0.0, 1e-8, {}};
  std::mt19937_64 rng(options.seed + 1);
  const int max_n = Full(options) ? 5 : 3;
  const int samples = Full(options) ? 50 : 10;
  for (double gamma : kRates) {
    const DephasingParams params(gamma);
    for (int n = 1; n <= max_n; ++n) {
      const int env_dim = DefaultEnvDim(params, n);
      for (int s = 0; s < samples; ++s) {
        const InputDistribution p = RandomDistribution(n + 1, rng);
        const double fast = EntropyReplica(p, params, options.kernel);
        const double slow = EntropyBruteforceOracle(p, params, env_dim);
        r.worst = std::max(r.worst, std::abs(fast - slow));
        ++r.cases;
      }
    }
  }
  return Finish(r);
}

SuiteReport ValidateSemigroup(const ValidationOptions& options) {
  SuiteReport r{"semigroup", false, 0, 0.0, 1e-14, {}};
  std::mt19937_64 rng(options.seed + 2);
  std::uniform_real_distribution<double> rate(0.0, 3.0);
  const int samples = Full(options) ? 100 : 20;
  for (int s = 0; s < samples; ++s) {
    const int dim = 2 + s % 5;
    const FockDensityMatrix rho = RandomDensityMatrix(dim, rng);
    const double g1 = rate(rng);
    const double g2 = rate(rng);
    const auto [composed, direct] = ComposeCheck(g1, g2, rho);
    r.worst = std::max(r.worst, MaxAbsDiff(composed.matrix(), direct.matrix()));
    ++r.cases;
  }
  return Finish(r);
}

SuiteReport ValidateCovariance(const ValidationOptions& options) {
  SuiteReport r{"phase-covariance", false, 0, 0.0, 1e-14, {}};
  std::mt19937_64 rng(options.seed + 3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rate(0.0, 3.0);
  const int samples = Full(options) ? 100 : 20;
  for (int s = 0; s < samples; ++s) {
    const int dim = 2 + s % 5;
    const FockDensityMatrix rho = RandomDensityMatrix(dim, rng);
    const DephasingParams params(rate(rng));
    const double theta = angle(rng);
    const auto lhs = ApplyDephasing(PhaseRotate(rho, theta), params);
    const auto rhs = PhaseRotate(ApplyDephasing(rho, params), theta);
    r.worst = std::max(r.worst, MaxAbsDiff(lhs.matrix(), rhs.matrix()));
    ++r.cases;
  }
  return Finish(r);
}

SuiteReport ValidateDiagonalDominance(const ValidationOptions& options) {
  SuiteReport r{"diagonal-dominance", false, 0, 0.0, 1e-9, {}};
  std::mt19937_64 rng(options.seed + 4);
  const int samples = Full(options) ? 100 : 20;
  constexpr std::array<double, 2> kDominanceRates = {0.5, 1.0};
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 4;
    const DephasingParams params(kDominanceRates[static_cast<std::size_t>(s / 4) % 2]);
    const int env_dim = DefaultEnvDim(params, n);
    const FockDensityMatrix rho = RandomDensityMatrix(n + 1, rng);
    auto coherent_information = [&](const FockDensityMatrix& input) {
      const DilationOutput out = DilationOracle(input, params, env_dim);
      return VonNeumannEntropyBits(out.system.matrix()) -
             VonNeumannEntropyBits(out.environment.matrix());
    };
    const double excess = coherent_information(rho) - coherent_information(rho.diagonal_part());
    r.worst = std::max(r.worst, excess);
    ++r.cases;
  }
  // A negative worst excess means strict dominance everywhere.
  r.worst = std::max(r.worst, 0.0);
  return Finish(r);
}

std::vector<SuiteReport> RunValidation(const ValidationOptions& options) {
  return {ValidateRepresentations(options), ValidateReplicaEntropy(options),
          ValidateSemigroup(options), ValidateCovariance(options),
          ValidateDiagonalDominance(options)};
}

}  // namespace dephcap
