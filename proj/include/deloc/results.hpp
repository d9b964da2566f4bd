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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace deloc {

struct ResultRow {
  std::string experiment;
  int N = 0;
  // Replica stream id; -1 marks deterministic reference values.
  long long stream = 0;
  std::string statistic;
  double value = 0.0;
  std::string status = "ok";
  std::string aux;

  bool operator==(const ResultRow& o) const;
};

struct RunManifest {
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::string version;
  double wall_seconds = 0.0;
  std::map<std::string, double> calibration;
  std::map<std::string, std::string> statistics;
};

struct StatSummary {
  long long count = 0;
  long long failures = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sum by a fixed balanced binary tree over the input order.
double pairwise_sum(std::span<const double> v);

// Linear-interpolation quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

StatSummary summarize_values(std::vector<double> values);

// Summaries keyed by (N, statistic); rows are ordered by stream id before reduction.
std::map<std::pair<int, std::string>, StatSummary> summarize_rows(const std::vector<ResultRow>& rows);

extern const char* const kResultColumns[7];

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_rows_csv(std::istream& in);

std::string rows_json(const std::vector<ResultRow>& rows);
std::string summary_json(const std::vector<ResultRow>& rows, const RunManifest& manifest);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

// Writes results.csv or results.json plus summary.json into dir. On failure
// no partial files are left behind.
std::vector<std::string> emit_results(const std::vector<ResultRow>& rows, const RunManifest& manifest,
                                      const std::string& dir, const std::string& format);

}  // namespace deloc
