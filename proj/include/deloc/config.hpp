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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "deloc/ensembles.hpp"
#include "deloc/regularization.hpp"

namespace deloc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
  std::string experiment;
  std::string ensemble = "goe";  // goe | gue | bernoulli | three-point | flat-gaussian
  double m4 = 3.0;
  std::vector<int> n_list{100};
  int replicas = 10;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = "out";
  std::string format = "csv";

  // Time horizon and grid for flow experiments.
  double t = 0.3;
  int steps = 10;
  // Eigenvalue index (1-based, 0 = middle) and particle count.
  int index = 0;
  int particles = 1;
  // Level repulsion.
  double energy = 0.0;
  double delta = 0.1;
  double a = 1.0;
  int k_max = 3;
  // Regularization.
  RegParams reg = RegParams::hierarchy(0.1);

  // Echo of every key, in canonical form, for the run manifest.
  std::map<std::string, std::string> echo() const;

  void validate() const;
  EnsembleSpec ensemble_spec(int N) const;
  int resolved_index(int N) const { return index > 0 ? index : (N + 1) / 2; }
};

// Flat "key = value" text. The first non-comment line must be
// "schema_version = 1". '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace deloc
