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

#include "dephcap/cli_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "json.hpp"

#ifndef DEPHCAP_VERSION
#define DEPHCAP_VERSION "0.0.0"
#endif

namespace dephcap {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

long long ParseInteger(std::string_view text) {
  text = Trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::string ParseString(std::string_view text) {
  text = Trim(text);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return std::string(text.substr(1, text.size() - 2));
  }
  return std::string(text);
}

std::vector<std::string_view> ParseArray(std::string_view text) {
  text = Trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError("expected an array like [1, 2, 3]");
  }
  std::vector<std::string_view> items;
  const std::string_view body = Trim(text.substr(1, text.size() - 2));
  if (body.empty()) return items;
  for (auto item : Split(body, ',')) items.push_back(Trim(item));
  return items;
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool ParseBool(std::string_view text) {
  text = Trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("not a boolean: '" + std::string(text) + "'");
}

void SortRecords(std::vector<ResultRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.gamma < b.gamma;
  });
}

nlohmann::json OptionalNumber(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return RoundToPrinted(*v);
}

}  // namespace

std::string_view ToolVersion() { return DEPHCAP_VERSION; }

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

double ParseNumber(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

double RoundToPrinted(double value) {
  if (!std::isfinite(value)) return value;
  return ParseNumber(FormatNumber(value));
}

OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError("unknown output format '" + std::string(name) + "' (csv or json)");
}

GradientMode ParseGradientMode(std::string_view name) {
  if (name == "analytic") return GradientMode::kAnalytic;
  if (name == "finite_difference") return GradientMode::kFiniteDifference;
  throw ConfigError("unknown gradient mode '" + std::string(name) +
                    "' (analytic or finite_difference)");
}

std::string_view ToString(GradientMode mode) {
  return mode == GradientMode::kAnalytic ? "analytic" : "finite_difference";
}

void SweepConfig::Validate() const {
  if (gamma_grid.empty()) throw ConfigError("gamma grid is empty");
  if (n_grid.empty()) throw ConfigError("N grid is empty");
  for (double g : gamma_grid) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("gamma values must be >= 0");
  }
  for (int n : n_grid) {
    if (n < 1) throw ConfigError("N values must be >= 1");
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
  try {
    optimizer.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string SweepConfig::Canonical() const {
  std::ostringstream out;
  out << "gammas=";
  for (double g : gamma_grid) out << FormatNumber(g) << ';';
  out << "\nns=";
  for (int n : n_grid) out << n << ';';
  out << "\nobjective_tolerance=" << FormatNumber(optimizer.objective_tolerance)
      << "\nmax_iterations=" << optimizer.max_iterations << "\nrestarts=" << optimizer.restarts
      << "\ngradient_mode=" << ToString(optimizer.gradient_mode) << "\nseed=" << optimizer.seed
      << '\n';
  return out.str();
}

std::string SweepConfig::Hash() const {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << Fnv1a(Canonical());
  return out.str();
}

SweepConfig ParseSweepConfig(std::string_view text) {
  SweepConfig cfg;
  std::string section;
  std::optional<double> gamma_start, gamma_stop;
  std::optional<long long> gamma_count, n_min, n_max;
  bool explicit_gammas = false;
  bool explicit_ns = false;

  int line_no = 0;
  for (std::string_view raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    // '#' starts a comment unless it sits inside a quoted string.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("malformed section header");
        section = std::string(Trim(line.substr(1, line.size() - 2)));
        if (section != "grid" && section != "optimizer" && section != "output") {
          throw ConfigError("unknown section [" + section + "]");
        }
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected key = value");
      const std::string key =
          (section.empty() ? "" : section + ".") + std::string(Trim(line.substr(0, eq)));
      const std::string_view value = Trim(line.substr(eq + 1));

      if (key == "grid.gammas") {
        explicit_gammas = true;
        for (auto item : ParseArray(value)) cfg.gamma_grid.push_back(ParseNumber(item));
      } else if (key == "grid.gamma_start") {
        gamma_start = ParseNumber(value);
      } else if (key == "grid.gamma_stop") {
        gamma_stop = ParseNumber(value);
      } else if (key == "grid.gamma_count") {
        gamma_count = ParseInteger(value);
      } else if (key == "grid.ns") {
        explicit_ns = true;
        for (auto item : ParseArray(value)) cfg.n_grid.push_back(static_cast<int>(ParseInteger(item)));
      } else if (key == "grid.n_min") {
        n_min = ParseInteger(value);
      } else if (key == "grid.n_max") {
        n_max = ParseInteger(value);
      } else if (key == "optimizer.objective_tolerance") {
        cfg.optimizer.objective_tolerance = ParseNumber(value);
      } else if (key == "optimizer.max_iterations") {
        cfg.optimizer.max_iterations = static_cast<int>(ParseInteger(value));
      } else if (key == "optimizer.restarts") {
        cfg.optimizer.restarts = static_cast<int>(ParseInteger(value));
      } else if (key == "optimizer.gradient_mode") {
        cfg.optimizer.gradient_mode = ParseGradientMode(ParseString(value));
      } else if (key == "optimizer.seed") {
        const long long seed = ParseInteger(value);
        if (seed < 0) throw ConfigError("seed must be >= 0");
        cfg.optimizer.seed = static_cast<std::uint64_t>(seed);
      } else if (key == "output.path") {
        cfg.output_path = ParseString(value);
      } else if (key == "output.format") {
        cfg.format = ParseOutputFormat(ParseString(value));
      } else if (key == "output.threads") {
        cfg.threads = static_cast<int>(ParseInteger(value));
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  const bool range_gammas = gamma_start || gamma_stop || gamma_count;
  if (explicit_gammas && range_gammas) {
    throw ConfigError("give either grid.gammas or gamma_start/gamma_stop/gamma_count");
  }
  if (range_gammas) {
    if (!gamma_start || !gamma_stop || !gamma_count || *gamma_count < 1) {
      throw ConfigError("gamma range needs gamma_start, gamma_stop and gamma_count >= 1");
    }
    for (long long i = 0; i < *gamma_count; ++i) {
      const double t = *gamma_count == 1 ? 0.0 : static_cast<double>(i) / (*gamma_count - 1);
      cfg.gamma_grid.push_back(*gamma_start + t * (*gamma_stop - *gamma_start));
    }
  }
  const bool range_ns = n_min || n_max;
  if (explicit_ns && range_ns) throw ConfigError("give either grid.ns or n_min/n_max");
  if (range_ns) {
    if (!n_min || !n_max || *n_min > *n_max) throw ConfigError("N range needs n_min <= n_max");
    for (long long n = *n_min; n <= *n_max; ++n) cfg.n_grid.push_back(static_cast<int>(n));
  }
  return cfg;
}

SweepConfig LoadSweepConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseSweepConfig(text);
}

Provenance MakeProvenance(const std::string& config_hash) {
  Provenance p;
  p.tool_version = std::string(ToolVersion());
  p.config_hash = config_hash;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr) {
    p.timestamp = epoch;
  }
  return p;
}

ResultRecord ToRecord(const CapacityResult& result, const Provenance& provenance) {
  ResultRecord r;
  r.gamma = RoundToPrinted(result.gamma);
  r.n = result.n;
  r.provenance = provenance;
  r.iterations = result.iterations;
  if (!result.failure.empty()) {
    r.converged = false;
    return r;
  }
  r.q_bits = RoundToPrinted(result.q_bits);
  r.converged = result.converged;
  r.mean_energy = RoundToPrinted(result.p_opt.mean_energy());
  for (double w : result.p_opt.weights()) r.p.push_back(RoundToPrinted(w));
  return r;
}

std::string WriteCsv(std::vector<ResultRecord> records) {
  SortRecords(records);
  std::size_t width = 0;
  for (const auto& r : records) width = std::max(width, r.p.size());
  for (const auto& r : records) width = std::max(width, static_cast<std::size_t>(r.n) + 1);

  std::string out = "gamma,N,q_bits,converged,iterations,mean_energy";
  for (std::size_t m = 0; m < width; ++m) out += ",p_" + std::to_string(m);
  out += '\n';
  for (const auto& r : records) {
    out += FormatNumber(r.gamma);
    out += ',' + std::to_string(r.n);
    out += ',' + (r.q_bits ? FormatNumber(*r.q_bits) : std::string());
    out += r.converged ? ",true" : ",false";
    out += ',' + std::to_string(r.iterations);
    out += ',' + (r.mean_energy ? FormatNumber(*r.mean_energy) : std::string());
    for (std::size_t m = 0; m < width; ++m) {
      out += ',';
      if (m < r.p.size()) out += FormatNumber(r.p[m]);
    }
    out += '\n';
  }
  return out;
}

std::vector<ResultRecord> ParseCsv(std::string_view text) {
  std::vector<ResultRecord> records;
  auto lines = Split(text, '\n');
  if (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ConfigError("empty CSV table");
  const auto header = Split(Trim(lines.front()), ',');
  static constexpr std::array<std::string_view, 6> kFixed = {
      "gamma", "N", "q_bits", "converged", "iterations", "mean_energy"};
  if (header.size() < kFixed.size() ||
      !std::equal(kFixed.begin(), kFixed.end(), header.begin())) {
    throw ConfigError("unexpected CSV header");
  }
  for (std::size_t m = kFixed.size(); m < header.size(); ++m) {
    if (header[m] != "p_" + std::to_string(m - kFixed.size())) {
      throw ConfigError("unexpected CSV column '" + std::string(header[m]) + "'");
    }
  }
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = Split(Trim(lines[l]), ',');
    if (fields.size() != header.size()) {
      throw ConfigError("CSV row " + std::to_string(l) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(header.size()));
    }
    ResultRecord r;
    r.gamma = ParseNumber(fields[0]);
    r.n = static_cast<int>(ParseInteger(fields[1]));
    if (!fields[2].empty()) r.q_bits = ParseNumber(fields[2]);
    r.converged = ParseBool(fields[3]);
    r.iterations = static_cast<int>(ParseInteger(fields[4]));
    if (!fields[5].empty()) r.mean_energy = ParseNumber(fields[5]);
    for (std::size_t m = kFixed.size(); m < fields.size(); ++m) {
      if (fields[m].empty()) break;
      r.p.push_back(ParseNumber(fields[m]));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string WriteJson(std::vector<ResultRecord> records, const Provenance& provenance) {
  SortRecords(records);
  nlohmann::ordered_json doc;
  doc["tool_version"] = provenance.tool_version;
  doc["config_hash"] = provenance.config_hash;
  doc["timestamp"] = provenance.timestamp.empty() ? nlohmann::ordered_json(nullptr)
                                                  : nlohmann::ordered_json(provenance.timestamp);
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["gamma"] = RoundToPrinted(r.gamma);
    row["N"] = r.n;
    row["q_bits"] = OptionalNumber(r.q_bits);
    row["converged"] = r.converged;
    row["iterations"] = r.iterations;
    row["mean_energy"] = OptionalNumber(r.mean_energy);
    auto p = nlohmann::ordered_json::array();
    for (double w : r.p) p.push_back(RoundToPrinted(w));
    row["p"] = std::move(p);
    doc["records"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

std::vector<ResultRecord> ParseJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  Provenance prov;
  prov.tool_version = doc.value("tool_version", "");
  prov.config_hash = doc.value("config_hash", "");
  if (doc.contains("timestamp") && doc["timestamp"].is_string()) {
    prov.timestamp = doc["timestamp"].get<std::string>();
  }
  std::vector<ResultRecord> records;
  try {
    for (const auto& row : doc.at("records")) {
      ResultRecord r;
      r.gamma = row.at("gamma").get<double>();
      r.n = row.at("N").get<int>();
      if (!row.at("q_bits").is_null()) r.q_bits = row["q_bits"].get<double>();
      r.converged = row.at("converged").get<bool>();
      r.iterations = row.at("iterations").get<int>();
      if (!row.at("mean_energy").is_null()) r.mean_energy = row["mean_energy"].get<double>();
      r.p = row.at("p").get<std::vector<double>>();
      r.provenance = prov;
      records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed record: ") + e.what());
  }
  return records;
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace dephcap
