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

// Command-line front end: capacity curves, bounds, ansatz fits, asymptotics
// and the oracle validation suites.
//
// Exit codes: 0 success, 1 invalid usage or config, 2 optimizer did not
// converge (capacity), 3 I/O failure, 4 validation failure.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dephcap/capacity_opt.hpp"
#include "dephcap/cli_io.hpp"
#include "dephcap/validation.hpp"

namespace {

using namespace dephcap;

constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

// Prints a single-row table (CSV) or object (JSON) with printed precision.
class RowPrinter {
 public:
  explicit RowPrinter(OutputFormat format) : format_(format) {}

  RowPrinter& Add(const std::string& key, double v) {
    keys_.push_back(key);
    text_.push_back(FormatNumber(v));
    json_[key] = std::isfinite(v) ? nlohmann::ordered_json(RoundToPrinted(v)) : nullptr;
    return *this;
  }
  RowPrinter& Add(const std::string& key, int v) {
    keys_.push_back(key);
    text_.push_back(std::to_string(v));
    json_[key] = v;
    return *this;
  }
  RowPrinter& Add(const std::string& key, bool v) {
    keys_.push_back(key);
    text_.push_back(v ? "true" : "false");
    json_[key] = v;
    return *this;
  }

  void Print(std::ostream& out) const {
    if (format_ == OutputFormat::kJson) {
      out << json_.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < keys_.size(); ++i) out << (i ? "," : "") << keys_[i];
    out << '\n';
    for (std::size_t i = 0; i < text_.size(); ++i) out << (i ? "," : "") << text_[i];
    out << '\n';
  }

 private:
  OutputFormat format_;
  std::vector<std::string> keys_;
  std::vector<std::string> text_;
  nlohmann::ordered_json json_;
};

int DefaultThreads() {
  if (const char* env = std::getenv("DEPHCAP_THREADS"); env != nullptr) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid DEPHCAP_THREADS='" << env << "'\n";
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct OptimizerFlags {
  double tolerance = OptimizerConfig{}.objective_tolerance;
  int max_iterations = OptimizerConfig{}.max_iterations;
  int restarts = OptimizerConfig{}.restarts;
  std::string gradient_mode = "analytic";
  std::uint64_t seed = 0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--tolerance", tolerance, "Objective-change tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iterations", max_iterations, "Iteration cap per restart")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", restarts, "Number of optimizer starts")->check(CLI::PositiveNumber);
    cmd->add_option("--gradient-mode", gradient_mode, "analytic or finite_difference")
        ->check(CLI::IsMember({"analytic", "finite_difference"}));
    cmd->add_option("--seed", seed, "Seed for perturbed restarts");
  }

  OptimizerConfig ToConfig() const {
    OptimizerConfig c;
    c.objective_tolerance = tolerance;
    c.max_iterations = max_iterations;
    c.restarts = restarts;
    c.gradient_mode = ParseGradientMode(gradient_mode);
    c.seed = seed;
    return c;
  }
};

int RunCapacity(int n, double gamma, const OptimizerFlags& flags, OutputFormat format) {
  const OptimizerConfig config = flags.ToConfig();
  const CapacityResult result = MaximizeCoherentInformation(n, DephasingParams(gamma), config);
  OptimizerConfig hashed = config;
  SweepConfig as_sweep{{gamma}, {n}, hashed, "", format, 1};
  const Provenance prov = MakeProvenance(as_sweep.Hash());
  const ResultRecord record = ToRecord(result, prov);
  std::cout << (format == OutputFormat::kCsv ? WriteCsv({record}) : WriteJson({record}, prov));
  return result.converged ? 0 : kExitNotConverged;
}

int RunSweep(const std::string& config_path, const std::string& output_override,
             const std::string& format_override, int threads_override,
             const std::optional<std::uint64_t>& seed_override) {
  SweepConfig cfg = LoadSweepConfig(config_path);
  if (!output_override.empty()) cfg.output_path = output_override;
  if (!format_override.empty()) cfg.format = ParseOutputFormat(format_override);
  if (threads_override > 0) cfg.threads = threads_override;
  if (seed_override) cfg.optimizer.seed = *seed_override;
  if (cfg.threads == 0) cfg.threads = DefaultThreads();
  cfg.Validate();

  const auto results = CapacitySweep(cfg.gamma_grid, cfg.n_grid, cfg.optimizer, cfg.threads);
  const Provenance prov = MakeProvenance(cfg.Hash());
  std::vector<ResultRecord> records;
  records.reserve(results.size());
  int failures = 0;
  for (const auto& r : results) {
    records.push_back(ToRecord(r, prov));
    if (!r.failure.empty()) {
      ++failures;
      std::cerr << "warning: gamma=" << FormatNumber(r.gamma) << " N=" << r.n
                << " failed: " << r.failure << '\n';
    } else if (!r.converged) {
      std::cerr << "warning: gamma=" << FormatNumber(r.gamma) << " N=" << r.n
                << " did not converge (residual " << FormatNumber(r.gradient_residual) << ")\n";
    }
  }
  const std::string text =
      cfg.format == OutputFormat::kCsv ? WriteCsv(records) : WriteJson(records, prov);
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) return kExitIo;
  } else {
    try {
      WriteFile(cfg.output_path, text);
    } catch (const std::runtime_error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitIo;
    }
  }
  std::cerr << results.size() << " points, " << failures << " failed\n";
  return 0;
}

int RunValidate(const std::string& level, bool corrupt_gram) {
  ValidationOptions options;
  options.level = level == "full" ? ValidationLevel::kFull : ValidationLevel::kQuick;
  if (corrupt_gram) {
    options.kernel = [](const DephasingParams& params, int i, int j) {
      const double d = i - j;
      return std::exp(-0.45 * params.gamma() * d * d);
    };
  }
  bool all = true;
  for (const SuiteReport& r : RunValidation(options)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum capacity of the bosonic dephasing channel on truncated Fock spaces"};
  app.set_version_flag("--version", std::string(dephcap::ToolVersion()));
  app.require_subcommand(1);

  std::string format = "csv";
  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  int n = 1;
  double gamma = 0.0;
  OptimizerFlags opt_flags;
  auto* capacity = app.add_subcommand("capacity", "Maximize coherent information at one (N, gamma)");
  capacity->add_option("--n", n, "Fock truncation N")->required()->check(CLI::PositiveNumber);
  capacity->add_option("--gamma", gamma, "Dephasing rate")->required()->check(CLI::NonNegativeNumber);
  opt_flags.Register(capacity);
  add_format(capacity);

  std::string config_path;
  std::string output_override;
  std::string sweep_format;
  int threads = 0;
  std::optional<std::uint64_t> sweep_seed;
  auto* sweep = app.add_subcommand("sweep", "Run a (gamma, N) grid from a config file");
  sweep->add_option("config", config_path, "Sweep config file")->required();
  sweep->add_option("--output", output_override, "Output path ('-' for stdout)");
  sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--threads", threads, "Worker threads (default: DEPHCAP_THREADS or cores)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "Override the optimizer seed");

  int j = 1;
  auto* lower = app.add_subcommand("lower-bound", "Two-point coherent-information bound");
  lower->add_option("--gamma", gamma, "Dephasing rate")->required()->check(CLI::NonNegativeNumber);
  lower->add_option("--j", j, "Fock-level separation")->check(CLI::PositiveNumber);
  add_format(lower);

  auto* ansatz = app.add_subcommand("ansatz", "Best discrete-Gaussian input distribution");
  ansatz->add_option("--n", n, "Fock truncation N")->required()->check(CLI::PositiveNumber);
  ansatz->add_option("--gamma", gamma, "Dephasing rate")->required()->check(CLI::NonNegativeNumber);
  add_format(ansatz);

  std::vector<double> weights;
  auto* asymptotic = app.add_subcommand("asymptotic", "Large-gamma capacity expansion");
  asymptotic->add_option("--n", n, "Fock truncation N")->required()->check(CLI::PositiveNumber);
  asymptotic->add_option("--gamma", gamma, "Dephasing rate")->required()->check(CLI::NonNegativeNumber);
  asymptotic->add_option("--p", weights, "Input weights p_0..p_N (default: numerical optimum)")
      ->delimiter(',');
  add_format(asymptotic);

  std::string level = "quick";
  bool corrupt_gram = false;
  auto* validate = app.add_subcommand("validate", "Run the oracle and property suites");
  validate->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  validate->add_flag("--corrupt-gram", corrupt_gram, "Negative control: perturb the Gram kernel")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const OutputFormat out_format = ParseOutputFormat(format);
    if (*capacity) return RunCapacity(n, gamma, opt_flags, out_format);
    if (*sweep) {
      return RunSweep(config_path, output_override, sweep_format, threads, sweep_seed);
    }
    if (*lower) {
      const TwoPointBound b = TwoPointLowerBound(DephasingParams(gamma), j);
      RowPrinter(out_format)
          .Add("gamma", b.gamma)
          .Add("j", b.j)
          .Add("q_plus", b.q_plus)
          .Add("q_minus", b.q_minus)
          .Add("value_bits", b.value_bits)
          .Print(std::cout);
      return 0;
    }
    if (*ansatz) {
      const AnsatzOptimum a = MaximizeOverAnsatz(n, DephasingParams(gamma));
      RowPrinter(out_format)
          .Add("gamma", gamma)
          .Add("N", n)
          .Add("sigma_opt", a.sigma)
          .Add("q_bits", a.q_bits)
          .Add("interior", a.interior)
          .Print(std::cout);
      return 0;
    }
    if (*asymptotic) {
      const DephasingParams params(gamma);
      const CapacityResult full = MaximizeCoherentInformation(n, params);
      if (!weights.empty() && static_cast<int>(weights.size()) != n + 1) {
        std::cerr << "error: --p needs exactly N+1 = " << n + 1 << " weights\n";
        return kExitUsage;
      }
      const InputDistribution p =
          weights.empty() ? full.p_opt : InputDistribution::Normalized(weights);
      if (!AsymptoticRegimeReliable(params)) {
        std::cerr << "warning: e^{-gamma/2} = " << FormatNumber(params.epsilon())
                  << " >= 0.1; the leading-order expansion may be inaccurate\n";
      }
      const double approx = AsymptoticCapacity(p, params);
      const double exact = weights.empty() ? full.q_bits : CoherentInformationDiagonal(p, params);
      RowPrinter(out_format)
          .Add("gamma", gamma)
          .Add("N", n)
          .Add("q_asymptotic", approx)
          .Add("q_exact", exact)
          .Add("relative_deviation", exact > 0.0 ? std::abs(approx - exact) / exact : 0.0)
          .Add("regime_reliable", AsymptoticRegimeReliable(params))
          .Print(std::cout);
      return 0;
    }
    if (*validate) return RunValidate(level, corrupt_gram);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
