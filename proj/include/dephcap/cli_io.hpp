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

// Configuration files and tabular record formats shared by the command-line
// tool: sweep configs, CSV/JSON result tables and number formatting.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dephcap/capacity_opt.hpp"

namespace dephcap {

std::string_view ToolVersion();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 12 significant digits, shortest of fixed/scientific, lowercase exponent,
// independent of the global locale. Non-finite values print as "nan"/"inf".
std::string FormatNumber(double value);
// Locale-independent inverse of FormatNumber. Throws ConfigError.
double ParseNumber(std::string_view text);

enum class OutputFormat { kCsv, kJson };

OutputFormat ParseOutputFormat(std::string_view name);
GradientMode ParseGradientMode(std::string_view name);
std::string_view ToString(GradientMode mode);

struct SweepConfig {
  std::vector<double> gamma_grid;
  std::vector<int> n_grid;
  OptimizerConfig optimizer;
  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;
  // 0 = machine parallelism.
  int threads = 0;

  void Validate() const;
  // Canonical text of everything that influences the numbers in the output.
  std::string Canonical() const;
  // 16 hex digits of FNV-1a over Canonical().
  std::string Hash() const;
};

// Flat TOML-style text:
//
//   [grid]
//   gammas = [0.25, 0.5, 1.0]      # or gamma_start / gamma_stop / gamma_count
//   ns = [1, 2, 3]                 # or n_min / n_max
//   [optimizer]
//   objective_tolerance = 1e-10
//   max_iterations = 20000
//   restarts = 3
//   gradient_mode = "analytic"     # or "finite_difference"
//   seed = 7
//   [output]
//   path = "sweep.csv"
//   format = "csv"                 # or "json"
//   threads = 4
//
// Throws ConfigError with the offending line number.
SweepConfig ParseSweepConfig(std::string_view text);
SweepConfig LoadSweepConfig(const std::filesystem::path& path);

struct Provenance {
  std::string tool_version;
  std::string config_hash;
  // Taken from SOURCE_DATE_EPOCH when set; empty otherwise so repeated runs
  // stay byte-identical.
  std::string timestamp;
};

Provenance MakeProvenance(const std::string& config_hash);

// One row of output: a flattened CapacityResult. Numeric fields hold the
// values exactly as printed (rounded to 12 significant digits).
struct ResultRecord {
  double gamma = 0.0;
  int n = 0;
  std::optional<double> q_bits;
  bool converged = false;
  int iterations = 0;
  std::optional<double> mean_energy;
  std::vector<double> p;
  Provenance provenance;
};

// Rounds to the printed precision.
double RoundToPrinted(double value);

ResultRecord ToRecord(const CapacityResult& result, const Provenance& provenance);

// Header `gamma,N,q_bits,converged,iterations,mean_energy,p_0,...,p_Nmax`;
// rows sorted by (N, gamma); short rows right-padded with empty fields.
std::string WriteCsv(std::vector<ResultRecord> records);
std::vector<ResultRecord> ParseCsv(std::string_view text);

// {"tool_version", "config_hash", "timestamp", "records": [...]} with the
// same ordering and rounding as the CSV table.
std::string WriteJson(std::vector<ResultRecord> records, const Provenance& provenance);
std::vector<ResultRecord> ParseJson(std::string_view text);

// Writes `contents` to `path`; throws std::runtime_error on I/O failure.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace dephcap
