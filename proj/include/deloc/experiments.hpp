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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "deloc/config.hpp"
#include "deloc/emf.hpp"
#include "deloc/linalg.hpp"
#include "deloc/results.hpp"

namespace deloc {

inline constexpr const char* kToolVersion = "delocalab 0.1.0";

struct ExperimentRun {
  RunManifest manifest;
  std::vector<ResultRow> rows;
};

// Runs every (N, replica) job of the config on cfg.workers threads. Rows come
// back ordered by N, then reference rows, then stream id, whatever the
// completion order was.
ExperimentRun run_experiment(const ExperimentConfig& cfg);

// Statistics of one replica. Pure in (cfg, N, stream).
std::vector<ResultRow> run_replica(const ExperimentConfig& cfg, int N, long long stream);

// Deterministic comparison values (stream -1) for experiments that have them.
std::vector<ResultRow> reference_rows(const ExperimentConfig& cfg, int N);

// Statistic name -> description for the manifest.
std::map<std::string, std::string> statistic_docs(const std::string& experiment);

// RNG used by replica `stream` at size N.
CounterRng replica_rng(std::uint64_t seed, int N, long long stream);

// Standard Gaussian vector normalized to the unit sphere.
Vector random_direction(int N, const CounterRng& rng);

// Intervals used by the decimation experiment.
std::vector<std::pair<double, double>> decimation_intervals();

// Fixed setup shared by every replica of emf-duality at size N.
struct DualitySetup {
  Vector lambda;
  Matrix U0;
  Vector q;
  std::vector<Configuration> configurations;
};
DualitySetup duality_setup(const ExperimentConfig& cfg, int N);
std::string configuration_label(const Configuration& xi);

}  // namespace deloc
