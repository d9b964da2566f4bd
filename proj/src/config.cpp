// Copyright 2026 The delocalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deloc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace deloc {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"deloc-sup",      "deloc-iso",     "gumbel",
                                              "emf-duality",    "emf-stationarity", "levelrep-tail",
                                              "reg-audit",      "dbm-stationarity", "decimation"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ", field '" + key + "': " + msg);
}

template <class T>
T parse_number(const std::string& text, int line, const std::string& key) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(line, key, "cannot parse '" + text + "' as a number");
  return value;
}

std::vector<int> parse_int_list(const std::string& text, int line, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(trim(item), line, key));
  if (out.empty()) fail(line, key, "list is empty");
  return out;
}

template <class T>
std::string fmt(const T& v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::string ns;
  for (std::size_t i = 0; i < n_list.size(); ++i) ns += (i ? "," : "") + std::to_string(n_list[i]);
  return {{"schema_version", std::to_string(kConfigSchemaVersion)},
          {"experiment", experiment},
          {"ensemble", ensemble},
          {"m4", fmt(m4)},
          {"n_list", ns},
          {"replicas", std::to_string(replicas)},
          {"seed", std::to_string(seed)},
          {"workers", std::to_string(workers)},
          {"out", out},
          {"format", format},
          {"t", fmt(t)},
          {"steps", std::to_string(steps)},
          {"index", std::to_string(index)},
          {"particles", std::to_string(particles)},
          {"energy", fmt(energy)},
          {"delta", fmt(delta)},
          {"a", fmt(a)},
          {"k_max", std::to_string(k_max)},
          {"delta1", fmt(reg.delta1)},
          {"eps1", fmt(reg.eps1)},
          {"delta2", fmt(reg.delta2)},
          {"eps2", fmt(reg.eps2)},
          {"omega", fmt(reg.omega)},
          {"nu", fmt(reg.nu)},
          {"k", std::to_string(reg.k)},
          {"beta", fmt(reg.beta)}};
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ConfigError("field 'experiment': unknown experiment '" + experiment + "'");
  static const std::vector<std::string> ensembles{"goe", "gue", "bernoulli", "three-point", "flat-gaussian"};
  if (std::find(ensembles.begin(), ensembles.end(), ensemble) == ensembles.end())
    throw ConfigError("field 'ensemble': unknown ensemble '" + ensemble + "'");
  if (ensemble == "three-point" && !(m4 >= 1.0)) throw ConfigError("field 'm4': must be >= 1");
  if (replicas < 1) throw ConfigError("field 'replicas': must be >= 1");
  if (workers < 1) throw ConfigError("field 'workers': must be >= 1");
  if (format != "csv" && format != "json") throw ConfigError("field 'format': must be csv or json");
  for (int n : n_list)
    if (n < 1) throw ConfigError("field 'n_list': every N must be >= 1");
  if (!(t >= 0.0)) throw ConfigError("field 't': must be >= 0");
  if (steps < 1) throw ConfigError("field 'steps': must be >= 1");
  if (index < 0) throw ConfigError("field 'index': must be >= 0");
  for (int n : n_list)
    if (index > n) throw ConfigError("field 'index': exceeds N = " + std::to_string(n));
  if (particles < 0 || particles > 3) throw ConfigError("field 'particles': must be in [0, 3]");
  if (!(a > 0.0)) throw ConfigError("field 'a': must be > 0");
  if (k_max < 1) throw ConfigError("field 'k_max': must be >= 1");
  try {
    reg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("regularization fields: ") + e.what());
  }
  if (experiment == "gumbel" || experiment == "deloc-sup")
    for (int n : n_list)
      if (n < 3) throw ConfigError("field 'n_list': " + experiment + " needs N >= 3");
  if (experiment == "emf-duality" && ensemble != "goe")
    throw ConfigError("field 'ensemble': emf-duality runs on goe");
  if ((experiment == "deloc-sup" || experiment == "deloc-iso" || experiment == "gumbel") && ensemble == "gue")
    throw ConfigError("field 'ensemble': " + experiment + " needs a real ensemble");
  if ((experiment == "emf-duality" || experiment == "emf-stationarity" || experiment == "dbm-stationarity") &&
      ensemble == "gue")
    throw ConfigError("field 'ensemble': flow experiments need a real ensemble");
}

EnsembleSpec ExperimentConfig::ensemble_spec(int N) const {
  if (ensemble == "goe") return EnsembleSpec::goe(N, seed);
  if (ensemble == "gue") return EnsembleSpec::gue(N, seed);
  if (ensemble == "bernoulli") return EnsembleSpec::bernoulli(N, seed);
  EnsembleSpec s{Symmetry::real, VarianceProfile::flat(N), EntryLaw::gaussian(), seed};
  if (ensemble == "three-point") s.law = matched_moment_law(m4);
  return s;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, int, const std::string&)>;
  auto dbl = [](double& field) -> Setter {
    return [&field](const std::string& v, int line, const std::string& key) { field = parse_number<double>(v, line, key); };
  };
  auto integer = [](int& field) -> Setter {
    return [&field](const std::string& v, int line, const std::string& key) { field = parse_number<int>(v, line, key); };
  };
  auto text = [](std::string& field) -> Setter {
    return [&field](const std::string& v, int, const std::string&) { field = v; };
  };
  const std::map<std::string, Setter> setters{
      {"experiment", text(cfg.experiment)},
      {"ensemble", text(cfg.ensemble)},
      {"m4", dbl(cfg.m4)},
      {"n_list", [&](const std::string& v, int line, const std::string& key) { cfg.n_list = parse_int_list(v, line, key); }},
      {"replicas", integer(cfg.replicas)},
      {"seed", [&](const std::string& v, int line, const std::string& key) { cfg.seed = parse_number<std::uint64_t>(v, line, key); }},
      {"workers", integer(cfg.workers)},
      {"out", text(cfg.out)},
      {"format", text(cfg.format)},
      {"t", dbl(cfg.t)},
      {"steps", integer(cfg.steps)},
      {"index", integer(cfg.index)},
      {"particles", integer(cfg.particles)},
      {"energy", dbl(cfg.energy)},
      {"delta", dbl(cfg.delta)},
      {"a", dbl(cfg.a)},
      {"k_max", integer(cfg.k_max)},
      {"delta1", dbl(cfg.reg.delta1)},
      {"eps1", dbl(cfg.reg.eps1)},
      {"delta2", dbl(cfg.reg.delta2)},
      {"eps2", dbl(cfg.reg.eps2)},
      {"omega", dbl(cfg.reg.omega)},
      {"nu", dbl(cfg.reg.nu)},
      {"k", integer(cfg.reg.k)},
      {"beta", dbl(cfg.reg.beta)},
  };

  std::string raw;
  int line = 0;
  bool have_schema = false;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, s, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!have_schema) {
      if (key != "schema_version") fail(line, key, "the first entry must be schema_version");
      const int v = parse_number<int>(value, line, key);
      if (v != kConfigSchemaVersion)
        fail(line, key, "unsupported schema version " + value + " (expected " + std::to_string(kConfigSchemaVersion) + ")");
      have_schema = true;
      continue;
    }
    if (seen.count(key)) fail(line, key, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    seen[key] = line;
    auto it = setters.find(key);
    if (it == setters.end()) fail(line, key, "unknown key");
    if (value.empty()) fail(line, key, "empty value");
    it->second(value, line, key);
  }
  if (!have_schema) throw ConfigError("config: missing schema_version line");
  if (cfg.experiment.empty()) throw ConfigError("field 'experiment': required");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f);
}

}  // namespace deloc
