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

// Command-line runner: one subcommand per experiment.
//
//   deloclab deloc-sup --config run.cfg --seed 7 --workers 4 --out results --format csv
//
// Exit status is 0 on success, 2 for configuration errors, 3 for runtime failures.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "deloc/config.hpp"
#include "deloc/experiments.hpp"
#include "deloc/results.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::vector<int> n_list;
  std::optional<int> replicas;
};

deloc::ExperimentConfig resolve(const std::string& experiment, const Overrides& o) {
  deloc::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    cfg = deloc::load_config(o.config_path);
    if (cfg.experiment != experiment)
      throw deloc::ConfigError("field 'experiment': config names '" + cfg.experiment + "' but subcommand is '" +
                               experiment + "'");
  }
  cfg.experiment = experiment;
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.out) cfg.out = *o.out;
  if (o.format) cfg.format = *o.format;
  if (!o.n_list.empty()) cfg.n_list = o.n_list;
  if (o.replicas) cfg.replicas = *o.replicas;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on eigenvector delocalization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(deloc::kToolVersion));

  Overrides o;
  for (const std::string& name : deloc::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", o.config_path, "flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--workers", o.workers, "worker threads");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--n", o.n_list, "matrix sizes (overrides n_list)")->delimiter(',');
    sub->add_option("--replicas", o.replicas, "replicas per size");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  deloc::ExperimentConfig cfg;
  try {
    cfg = resolve(experiment, o);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const deloc::ExperimentRun run = deloc::run_experiment(cfg);
    const auto files = deloc::emit_results(run.rows, run.manifest, cfg.out, cfg.format);
    long long failures = 0;
    for (const auto& r : run.rows)
      if (r.status != "ok") ++failures;
    std::cout << experiment << ": " << run.rows.size() << " rows in " << run.manifest.wall_seconds << " s";
    if (failures) std::cout << " (" << failures << " failed replicas)";
    std::cout << "\n";
    for (const auto& f : files) std::cout << "  " << f << "\n";
    return failures ? kExitRuntime : 0;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
