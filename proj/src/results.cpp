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

#include "deloc/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace deloc {

namespace fs = std::filesystem;

const char* const kResultColumns[7] = {"experiment", "N", "stream", "statistic", "value", "status", "aux"};

bool ResultRow::operator==(const ResultRow& o) const {
  auto same_value = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return experiment == o.experiment && N == o.N && stream == o.stream && statistic == o.statistic &&
         same_value(value, o.value) && status == o.status && aux == o.aux;
}

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) return std::nan("");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

StatSummary summarize_values(std::vector<double> values) {
  StatSummary s;
  s.count = static_cast<long long>(values.size());
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = pairwise_sum(values) / n;
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - s.mean) * (values[i] - s.mean);
  s.std_error = values.size() > 1 ? std::sqrt(pairwise_sum(dev) / (n - 1.0) / n) : 0.0;
  std::sort(values.begin(), values.end());
  s.q05 = quantile_sorted(values, 0.05);
  s.q25 = quantile_sorted(values, 0.25);
  s.q50 = quantile_sorted(values, 0.50);
  s.q75 = quantile_sorted(values, 0.75);
  s.q95 = quantile_sorted(values, 0.95);
  return s;
}

std::map<std::pair<int, std::string>, StatSummary> summarize_rows(const std::vector<ResultRow>& rows) {
  std::map<std::pair<int, std::string>, std::vector<std::pair<long long, double>>> groups;
  std::map<std::pair<int, std::string>, long long> failures;
  for (const ResultRow& r : rows) {
    auto key = std::make_pair(r.N, r.statistic);
    if (r.status == "ok") groups[key].emplace_back(r.stream, r.value);
    else ++failures[key];
  }
  std::map<std::pair<int, std::string>, StatSummary> out;
  for (auto& [key, vals] : groups) {
    std::stable_sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> v;
    v.reserve(vals.size());
    for (const auto& p : vals) v.push_back(p.second);
    out[key] = summarize_values(std::move(v));
  }
  for (const auto& [key, n] : failures) out[key].failures = n;
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Reads one RFC-4180 record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string cur;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          cur += '"';
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return true;
}

}  // namespace

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  for (int c = 0; c < 7; ++c) out << (c ? "," : "") << kResultColumns[c];
  out << "\r\n";
  for (const ResultRow& r : rows) {
    out << csv_field(r.experiment) << ',' << r.N << ',' << r.stream << ',' << csv_field(r.statistic) << ','
        << format_double(r.value) << ',' << csv_field(r.status) << ',' << csv_field(r.aux) << "\r\n";
  }
}

std::vector<ResultRow> parse_rows_csv(std::istream& in) {
  std::vector<std::string> f;
  if (!read_record(in, f) || f.size() != 7 || f[0] != kResultColumns[0])
    throw IoError("results CSV: missing or malformed header");
  std::vector<ResultRow> rows;
  while (read_record(in, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 7) throw IoError("results CSV: record with " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.experiment = f[0];
    r.N = std::stoi(f[1]);
    r.stream = std::stoll(f[2]);
    r.statistic = f[3];
    r.value = std::strtod(f[4].c_str(), nullptr);
    r.status = f[5];
    r.aux = f[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string rows_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    arr.push_back({{"experiment", r.experiment},
                   {"N", r.N},
                   {"stream", r.stream},
                   {"statistic", r.statistic},
                   {"value", json_number(r.value)},
                   {"status", r.status},
                   {"aux", r.aux}});
  }
  return arr.dump(1);
}

std::string summary_json(const std::vector<ResultRow>& rows, const RunManifest& manifest) {
  nlohmann::json doc;
  doc["manifest"] = {{"seed", manifest.seed},
                     {"config", manifest.config},
                     {"version", manifest.version},
                     {"wall_seconds", manifest.wall_seconds},
                     {"calibration", manifest.calibration},
                     {"statistics", manifest.statistics}};
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& [key, s] : summarize_rows(rows)) {
    stats.push_back({{"N", key.first},
                     {"statistic", key.second},
                     {"count", s.count},
                     {"failures", s.failures},
                     {"mean", json_number(s.mean)},
                     {"stderr", json_number(s.std_error)},
                     {"quantiles",
                      {{"q05", json_number(s.q05)},
                       {"q25", json_number(s.q25)},
                       {"q50", json_number(s.q50)},
                       {"q75", json_number(s.q75)},
                       {"q95", json_number(s.q95)}}}});
  }
  doc["summary"] = stats;
  doc["row_count"] = rows.size();
  return doc.dump(2);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp + "' for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

std::vector<std::string> emit_results(const std::vector<ResultRow>& rows, const RunManifest& manifest,
                                      const std::string& dir, const std::string& format) {
  if (format != "csv" && format != "json") throw IoError("unknown output format '" + format + "'");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());

  const std::string rows_path = (fs::path(dir) / (format == "csv" ? "results.csv" : "results.json")).string();
  const std::string summary_path = (fs::path(dir) / "summary.json").string();
  std::string rows_text;
  if (format == "csv") {
    std::ostringstream os;
    write_rows_csv(os, rows);
    rows_text = os.str();
  } else {
    rows_text = rows_json(rows);
  }
  write_file_atomic(rows_path, rows_text);
  try {
    write_file_atomic(summary_path, summary_json(rows, manifest));
  } catch (...) {
    fs::remove(rows_path, ec);
    throw;
  }
  return {rows_path, summary_path};
}

}  // namespace deloc
