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

// Oracle and property suites comparing every fast path against an
// independent route. Used by `dephcap validate` and the test suites.

#include <cstdint>
#include <string>
#include <vector>

#include "dephcap/replica_entropy.hpp"

namespace dephcap {

enum class ValidationLevel { kQuick, kFull };

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::kQuick;
  std::uint64_t seed = 20260101;
  // Kernel used by the replica route; the brute-force route never uses it.
  GramKernel kernel = GramOverlap;
};

struct SuiteReport {
  std::string name;
  bool passed = false;
  int cases = 0;
  double worst = 0.0;      // largest observed violation
  double tolerance = 0.0;
  std::string detail;
};

// RK4 step count keeping h * (N^2/2) <= 0.02 over [0, t].
int RecommendedMasterSteps(double t, int dim);
// Gauss-Hermite node count for 1e-10 agreement at the given rate and size.
int RecommendedQuadratureNodes(const DephasingParams& params, int dim);

SuiteReport ValidateRepresentations(const ValidationOptions& options);
SuiteReport ValidateReplicaEntropy(const ValidationOptions& options);
SuiteReport ValidateSemigroup(const ValidationOptions& options);
SuiteReport ValidateCovariance(const ValidationOptions& options);
SuiteReport ValidateDiagonalDominance(const ValidationOptions& options);

std::vector<SuiteReport> RunValidation(const ValidationOptions& options);

}  // namespace dephcap
