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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "deloc/config.hpp"
#include "deloc/ensembles.hpp"
#include "deloc/experiments.hpp"
#include "deloc/results.hpp"
#include "deloc/statistics.hpp"

using namespace deloc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string& text) {
  try {
    parse(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("delocalab_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse(
      "schema_version = 1\n"
      "# comment line\n"
      "experiment = gumbel   # trailing comment\n"
      "n_list = 50, 100\n"
      "replicas = 7\n"
      "seed = 18446744073709551615\n"
      "delta1 = 0.2\n");
  CHECK(c.experiment == "gumbel");
  CHECK(c.n_list == std::vector<int>{50, 100});
  CHECK(c.replicas == 7);
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.reg.delta1 == 0.2);
  CHECK_NOTHROW(c.validate());
  CHECK(c.echo().at("n_list") == "50,100");
  CHECK(c.resolved_index(100) == 50);
}

TEST_CASE("config errors name the field") {
  CHECK(config_error("experiment = gumbel\n").find("schema_version") != std::string::npos);
  CHECK(config_error("schema_version = 2\nexperiment = gumbel\n").find("unsupported schema") != std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = gumbel\nbogus = 3\n").find("line 3, field 'bogus'") !=
        std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = gumbel\nreplicas = x\n").find("'replicas'") !=
        std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = gumbel\nreplicas = 0\n").find("'replicas'") !=
        std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = gumbel\nseed = 1\nseed = 2\n").find("duplicate") !=
        std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = nothing\n").find("'experiment'") != std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = gumbel\nensemble = gue\n").find("'ensemble'") !=
        std::string::npos);
  CHECK(config_error("schema_version = 1\nexperiment = reg-audit\ndelta2 = 0.5\n").find("regularization") !=
        std::string::npos);
}

TEST_CASE("statistics on hand-built spectra") {
  Spectrum one{Vector::Ones(1), Matrix::Ones(1, 1)};
  for (auto& [name, v] : deloc_statistics(one, nullptr))
    if (name.find("_normalized") == std::string::npos) CHECK(v == 1.0);

  // Known 3x3 eigenbasis.
  Matrix U(3, 3);
  const double a = 1.0 / std::sqrt(2.0), b = 1.0 / std::sqrt(3.0), c = 1.0 / std::sqrt(6.0);
  U << b, a, c, b, -a, c, b, 0, -2 * c;
  Spectrum S{Eigen::Vector3d(-1, 0, 1), U};
  const double expected = 0.5 * (3.0 * (4.0 / 6.0) - 4.0 * std::log(3.0) + std::log(std::log(3.0)) +
                                 std::log(2.0 * std::numbers::pi));
  CHECK(gumbel_statistic(S) == doctest::Approx(expected).epsilon(1e-14));
  Spectrum flipped = S;
  flipped.U.col(1) *= -1.0;
  CHECK(gumbel_statistic(flipped) == gumbel_statistic(S));

  const Matrix H = sample_goe(12, CounterRng(3, 3));
  Eigen::PermutationMatrix<Eigen::Dynamic> P(12);
  P.setIdentity();
  std::swap(P.indices()[0], P.indices()[7]);
  std::swap(P.indices()[3], P.indices()[5]);
  Matrix PH = P * H * P.transpose();
  const Spectrum s1 = eigh(H), s2 = eigh(PH);
  CHECK(max_sup_norm_sq(s1) == doctest::Approx(max_sup_norm_sq(s2)).epsilon(1e-12));
  CHECK_THROWS(gumbel_statistic(Spectrum{Vector::Ones(2), Matrix::Identity(2, 2)}));
}

TEST_CASE("CSV round trip with quoting") {
  std::vector<ResultRow> rows{
      {"deloc-sup", 10, 0, "max_sup_norm", 0.123456789012345678, "ok", ""},
      {"deloc-sup", 10, 1, "odd,name", -1e-300, "ok", "a \"quoted\" aux"},
      {"deloc-sup", 10, 2, "replica", std::nan(""), "error", "line\nbreak"},
      {"deloc-sup", 10, -1, "ref", std::numeric_limits<double>::infinity(), "ok", ""},
  };
  std::stringstream ss;
  write_rows_csv(ss, rows);
  CHECK(parse_rows_csv(ss) == rows);

  std::stringstream empty;
  write_rows_csv(empty, {});
  CHECK(empty.str() == "experiment,N,stream,statistic,value,status,aux\r\n");
  CHECK(parse_rows_csv(empty).empty());
}

TEST_CASE("pairwise summation and summaries") {
  std::vector<double> v;
  for (int i = 0; i < 1001; ++i) v.push_back(0.1 * i);
  CHECK(pairwise_sum(v) == doctest::Approx(0.1 * 1000 * 1001 / 2).epsilon(1e-14));
  const StatSummary s = summarize_values(v);
  CHECK(s.count == 1001);
  CHECK(s.q50 == doctest::Approx(50.0));
  CHECK(s.q05 == doctest::Approx(5.0));
  CHECK(summarize_values({}).count == 0);
}

TEST_CASE("emit results: files, summary, empty set, failures") {
  RunManifest m;
  m.seed = 3;
  m.version = kToolVersion;
  const fs::path dir = scratch("emit");
  const auto files = emit_results({}, m, dir.string(), "csv");
  CHECK(files.size() == 2);
  std::ifstream csv(files[0]);
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == "experiment,N,stream,statistic,value,status,aux\r\n");
  std::ifstream js(files[1]);
  std::stringstream jbuf;
  jbuf << js.rdbuf();
  CHECK(jbuf.str().find("\"row_count\": 0") != std::string::npos);

  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker.string()) << "x";
  CHECK_THROWS_AS(emit_results({}, m, (blocker / "sub").string(), "csv"), IoError);
  CHECK_THROWS_AS(emit_results({}, m, dir.string(), "xml"), IoError);
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
  fs::remove_all(dir);
  fs::remove(blocker);
}

TEST_CASE("single replica equals the replica statistics") {
  for (const std::string& name : experiment_names()) {
    ExperimentConfig c;
    c.experiment = name;
    c.n_list = {8};
    c.replicas = 1;
    c.seed = 5;
    c.t = 0.05;
    c.reg = RegParams::hierarchy(0.1);
    if (name == "levelrep-tail") c.ensemble = "gue";
    const ExperimentRun run = run_experiment(c);
    std::vector<ResultRow> expected = reference_rows(c, 8);
    for (auto& r : run_replica(c, 8, 0)) expected.push_back(r);
    INFO(name);
    CHECK(run.rows == expected);
    CHECK(run.manifest.statistics.size() > 0);
  }
}

TEST_CASE("worker count does not change results") {
  ExperimentConfig c;
  c.experiment = "deloc-iso";
  c.n_list = {30, 40};
  c.replicas = 25;
  c.seed = 77;
  c.workers = 1;
  const auto one = run_experiment(c).rows;
  c.workers = 8;
  const auto many = run_experiment(c).rows;
  CHECK(one == many);
  c.seed = 78;
  CHECK_FALSE(run_experiment(c).rows == one);
}

TEST_CASE("deloc-sup on GOE N=400: rows populated and CSV parses back") {
  ExperimentConfig c;
  c.experiment = "deloc-sup";
  c.n_list = {400};
  c.replicas = 200;
  c.seed = 11;
  c.workers = 2;
  const ExperimentRun run = run_experiment(c);
  int max_rows = 0;
  for (const auto& r : run.rows) {
    CHECK(r.status == "ok");
    if (r.statistic == "max_sup_norm") {
      ++max_rows;
      CHECK(r.value > 0.0);
      CHECK(r.value <= 1.0);
    }
  }
  CHECK(max_rows == 200);
  const fs::path dir = scratch("n400");
  const auto files = emit_results(run.rows, run.manifest, dir.string(), "csv");
  std::ifstream in(files[0]);
  const auto back = parse_rows_csv(in);
  CHECK(back == run.rows);

  // Summary mean against a recomputation from the CSV.
  double sum = 0;
  int n = 0;
  for (const auto& r : back)
    if (r.statistic == "n_max_sup_sq") {
      sum += r.value;
      ++n;
    }
  const auto summary = summarize_rows(back);
  CHECK(std::abs(summary.at({400, "n_max_sup_sq"}).mean - sum / n) <= 1e-12 * std::abs(sum / n));
  fs::remove_all(dir);
}

TEST_CASE("per-replica failures become rows") {
  ExperimentConfig c;
  c.experiment = "emf-duality";
  c.n_list = {120};
  c.particles = 3;
  c.t = 1e-4;
  c.replicas = 2;
  // C(122, 3) configurations exceed the moment-flow state cap; the reference job fails alone.
  const auto rows = run_experiment(c).rows;
  int errors = 0, ok = 0;
  for (const auto& r : rows) {
    if (r.status == "error") {
      ++errors;
      CHECK(r.stream == -1);
      CHECK(r.aux.find("exceeds the cap") != std::string::npos);
    } else {
      ++ok;
    }
  }
  CHECK(errors == 1);
  CHECK(ok > 0);
}
