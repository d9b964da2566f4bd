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

#include "deloc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "deloc/dbm.hpp"
#include "deloc/levelrep.hpp"
#include "deloc/regularization.hpp"
#include "deloc/semicircle.hpp"
#include "deloc/statistics.hpp"

namespace deloc {

namespace {

constexpr std::uint64_t kDirectionTag = 0x71;
constexpr std::uint64_t kFlowTag = 0xf1;
constexpr std::uint64_t kDualityStream = 0xd0a1;

ResultRow row(const ExperimentConfig& cfg, int N, long long stream, std::string stat, double value) {
  return {cfg.experiment, N, stream, std::move(stat), value, "ok", ""};
}

Matrix sample_real(const ExperimentConfig& cfg, int N, long long stream) {
  return sample_symmetric(cfg.ensemble_spec(N), replica_rng(cfg.seed, N, stream).stream());
}

Vector sample_spectrum(const ExperimentConfig& cfg, int N, long long stream) {
  SampledMatrix M = sample_ensemble(cfg.ensemble_spec(N), replica_rng(cfg.seed, N, stream).stream());
  if (auto* R = std::get_if<Matrix>(&M)) return eigvalsh(*R);
  return eigvalsh(std::get<CMatrix>(M));
}

std::vector<int> audit_indices(int N) {
  std::vector<int> idx;
  for (int i : {1, 10, N / 2})
    if (i >= 1 && i <= N && std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
  return idx;
}

std::vector<ResultRow> deloc_rows(const ExperimentConfig& cfg, int N, long long stream, bool isotropic) {
  const Spectrum S = eigh(sample_real(cfg, N, stream));
  std::vector<ResultRow> out;
  NamedValues stats;
  if (isotropic) {
    const Vector q = random_direction(N, replica_rng(cfg.seed, N, stream).child(kDirectionTag));
    stats = deloc_statistics(S, &q);
  } else {
    stats = deloc_statistics(S);
  }
  for (auto& [name, v] : stats) out.push_back(row(cfg, N, stream, name, v));
  const double scaled = N * max_sup_norm_sq(S);
  out.push_back(row(cfg, N, stream, "n_max_sup_sq", scaled));
  if (N > 1) out.push_back(row(cfg, N, stream, "n_max_sup_sq_over_log_n", scaled / std::log(N)));
  return out;
}

std::vector<ResultRow> gumbel_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const Spectrum S = eigh(sample_real(cfg, N, stream));
  const double g = gumbel_statistic(S);
  return {row(cfg, N, stream, "gumbel_half", g), row(cfg, N, stream, "gumbel_le0", g <= 0.0 ? 1.0 : 0.0)};
}

std::vector<ResultRow> duality_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const DualitySetup setup = duality_setup(cfg, N);
  const EigenvaluePath path = EigenvaluePath::frozen(setup.lambda, cfg.t);
  const EigenvectorPath p = eigenvector_sde(setup.U0, path, replica_rng(cfg.seed, N, stream).child(kFlowTag));
  std::vector<ResultRow> out;
  for (const Configuration& xi : setup.configurations)
    out.push_back(row(cfg, N, stream, "sde_" + configuration_label(xi), moment_observable(p.bases.back(), setup.q, xi)));
  return out;
}

std::vector<ResultRow> stationarity_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const CounterRng rng = replica_rng(cfg.seed, N, stream);
  const Matrix H0 = sample_real(cfg, N, stream);
  const Vector q = random_direction(N, CounterRng(cfg.seed, kDualityStream).child(static_cast<std::uint64_t>(N)));
  const Matrix Ht = H0 + sample_goe(N, rng.child(kFlowTag), cfg.t);
  const Spectrum S0 = eigh(H0);
  const Spectrum St = eigh(Ht);
  const int site = cfg.resolved_index(N);
  std::vector<ResultRow> out;
  const int max_n = std::max(cfg.particles, 2);
  for (int n = 1; n <= max_n; ++n) {
    const Configuration xi(std::map<int, int>{{site, n}});
    const std::string tag = "m" + std::to_string(n);
    out.push_back(row(cfg, N, stream, tag + "_t0", moment_observable(S0.U, q, xi)));
    out.push_back(row(cfg, N, stream, tag + "_t", moment_observable(St.U, q, xi)));
  }
  return out;
}

std::vector<ResultRow> levelrep_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const Vector lam = sample_spectrum(cfg, N, stream);
  const RepulsionInterval I = RepulsionInterval::make(cfg.energy, N, cfg.delta, cfg.a);
  const int count = count_in_interval(lam, I.lo(), I.hi());
  std::vector<ResultRow> out{row(cfg, N, stream, "count", count)};
  for (int k = 1; k <= cfg.k_max; ++k)
    out.push_back(row(cfg, N, stream, "ge" + std::to_string(k), count >= k ? 1.0 : 0.0));
  const int i = std::min(cfg.resolved_index(N), N - 1);
  if (i >= 1) {
    const double threshold = std::pow(static_cast<double>(N), -cfg.delta - 2.0 / 3.0) / std::cbrt(hat(i, N));
    out.push_back(row(cfg, N, stream, "small_gap", lam[i] - lam[i - 1] < threshold ? 1.0 : 0.0));
  }
  return out;
}

std::vector<ResultRow> audit_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const Vector lam = sample_spectrum(cfg, N, stream);
  HsRegularizer reg(lam, cfg.reg.delta1, cfg.reg.eps1);
  std::vector<ResultRow> out;
  for (int i : audit_indices(N)) {
    const double lt = reg.lambda_tilde(i);
    const double bound = regularized_closeness_bound(N, i, cfg.reg.delta1, cfg.reg.eps1);
    ResultRow r = row(cfg, N, stream, "closeness_ratio_i" + std::to_string(i), std::abs(lt - lam[i - 1]) / bound);
    r.aux = "bound=" + std::to_string(bound);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRow> dbm_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const Matrix H0 = sample_real(cfg, N, stream);
  DbmConfig dc{cfg.t, cfg.steps, DbmVariant::ou};
  const Matrix Ht = evolve_final(H0, dc, replica_rng(cfg.seed, N, stream).child(kFlowTag));
  std::vector<ResultRow> out{row(cfg, N, stream, "lambda_max_t0", eigvalsh(H0)[N - 1]),
                             row(cfg, N, stream, "lambda_max_t", eigvalsh(Ht)[N - 1])};
  if (N > 1) out.push_back(row(cfg, N, stream, "n_h12_sq_t", N * Ht(0, 1) * Ht(0, 1)));
  return out;
}

std::vector<ResultRow> decimation_rows(const ExperimentConfig& cfg, int N, long long stream) {
  const Vector lam = decimate_goe_pair(N, replica_rng(cfg.seed, N, stream));
  std::vector<ResultRow> out;
  const auto intervals = decimation_intervals();
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const int c = count_in_interval(lam, intervals[k].first, intervals[k].second);
    const std::string tag = "_I" + std::to_string(k + 1);
    out.push_back(row(cfg, N, stream, "count" + tag, c));
    out.push_back(row(cfg, N, stream, "fm2" + tag, static_cast<double>(c) * (c - 1)));
  }
  return out;
}

}  // namespace

CounterRng replica_rng(std::uint64_t seed, int N, long long stream) {
  return CounterRng(seed, derive_stream(static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(stream)));
}

Vector random_direction(int N, const CounterRng& rng) {
  Vector q(N);
  for (int i = 0; i < N; i += 2) {
    auto [a, b] = rng.normal_pair(static_cast<std::uint64_t>(i / 2));
    q[i] = a;
    if (i + 1 < N) q[i + 1] = b;
  }
  return q / q.norm();
}

std::vector<std::pair<double, double>> decimation_intervals() { return {{-0.2, 0.2}, {0.5, 1.0}}; }

std::string configuration_label(const Configuration& xi) {
  std::string s;
  for (const auto& [site, mult] : xi.sites()) {
    if (!s.empty()) s += '_';
    s += std::to_string(site) + "x" + std::to_string(mult);
  }
  return s;
}

DualitySetup duality_setup(const ExperimentConfig& cfg, int N) {
  const CounterRng base = CounterRng(cfg.seed, kDualityStream).child(static_cast<std::uint64_t>(N));
  DualitySetup s;
  const Spectrum S = eigh(sample_goe(N, base.child(1)));
  s.lambda = S.lambda;
  s.U0 = S.U;
  s.q = random_direction(N, base.child(2));
  const int n = std::max(cfg.particles, 1);
  const CounterRng pick = base.child(3);
  std::uint64_t draw = 0;
  const int wanted = 5;
  for (int c = 0; c < wanted; ++c) {
    std::vector<int> sites;
    for (int p = 0; p < n; ++p) sites.push_back(1 + static_cast<int>(pick.uniform(draw++) * N));
    std::sort(sites.begin(), sites.end());
    Configuration xi = Configuration::from_sites(sites);
    if (std::find(s.configurations.begin(), s.configurations.end(), xi) == s.configurations.end())
      s.configurations.push_back(std::move(xi));
  }
  return s;
}

std::vector<ResultRow> run_replica(const ExperimentConfig& cfg, int N, long long stream) {
  const std::string& e = cfg.experiment;
  if (e == "deloc-sup") return deloc_rows(cfg, N, stream, false);
  if (e == "deloc-iso") return deloc_rows(cfg, N, stream, true);
  if (e == "gumbel") return gumbel_rows(cfg, N, stream);
  if (e == "emf-duality") return duality_rows(cfg, N, stream);
  if (e == "emf-stationarity") return stationarity_rows(cfg, N, stream);
  if (e == "levelrep-tail") return levelrep_rows(cfg, N, stream);
  if (e == "reg-audit") return audit_rows(cfg, N, stream);
  if (e == "dbm-stationarity") return dbm_rows(cfg, N, stream);
  if (e == "decimation") return decimation_rows(cfg, N, stream);
  throw ConfigError("unknown experiment '" + e + "'");
}

std::vector<ResultRow> reference_rows(const ExperimentConfig& cfg, int N) {
  std::vector<ResultRow> out;
  const std::string& e = cfg.experiment;
  if (e == "emf-duality") {
    const DualitySetup setup = duality_setup(cfg, N);
    const EmfState f0 = initial_emf_state(setup.U0, setup.q, std::max(cfg.particles, 1));
    const EmfState ft = integrate_emf(f0, EigenvaluePath::frozen(setup.lambda, cfg.t), cfg.t);
    for (const Configuration& xi : setup.configurations)
      out.push_back(row(cfg, N, -1, "ref_" + configuration_label(xi), ft(xi)));
  } else if (e == "emf-stationarity") {
    out.push_back(row(cfg, N, -1, "ref_m1", 1.0));
    out.push_back(row(cfg, N, -1, "ref_m2", static_cast<double>(N) / (N + 2)));
  } else if (e == "levelrep-tail" && cfg.ensemble == "gue" && N <= 500) {
    const RepulsionInterval I = RepulsionInterval::make(cfg.energy, N, cfg.delta, cfg.a);
    const double mu = gue_expected_count(N, I.lo(), I.hi());
    out.push_back(row(cfg, N, -1, "ref_expected_count", mu));
    for (int k = 1; k <= cfg.k_max; ++k)
      out.push_back(row(cfg, N, -1, "ref_chernoff_ge" + std::to_string(k), chernoff_tail_bound(k, mu).value));
  } else if (e == "decimation" && N <= 500) {
    const auto intervals = decimation_intervals();
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const std::string tag = "_I" + std::to_string(k + 1);
      out.push_back(row(cfg, N, -1, "ref_count" + tag, gue_expected_count(N, intervals[k].first, intervals[k].second)));
      out.push_back(row(cfg, N, -1, "ref_fm2" + tag,
                        gue_second_factorial_moment(N, intervals[k].first, intervals[k].second)));
    }
  }
  return out;
}

std::map<std::string, std::string> statistic_docs(const std::string& e) {
  if (e == "deloc-sup" || e == "deloc-iso") {
    std::map<std::string, std::string> d{
        {"max_sup_norm", "max over eigenvectors of the largest absolute entry"},
        {"sup_norm_bulk", "largest absolute entry of the middle eigenvector"},
        {"sup_norm_edge", "largest absolute entry of the eigenvector of the smallest eigenvalue"},
        {"n_max_sup_sq", "N times the squared max_sup_norm"},
        {"n_max_sup_sq_over_log_n", "n_max_sup_sq divided by log N"},
        {"*_normalized", "statistic divided by sqrt(log N / N)"}};
    if (e == "deloc-iso") d["iso_sup"] = "max over eigenvectors of |<q,u>| for a fresh uniform direction q";
    return d;
  }
  if (e == "gumbel")
    return {{"gumbel_half", "(N max sup norm^2 - 4 log N + log log N + log 2pi) / 2, Gumbel in the limit"},
            {"gumbel_le0", "indicator gumbel_half <= 0; limit mean exp(-1)"}};
  if (e == "emf-duality")
    return {{"sde_<config>", "moment observable of the eigenvector SDE at time t on a frozen spectrum"},
            {"ref_<config>", "moment-flow solution at time t for the same configuration"}};
  if (e == "emf-stationarity")
    return {{"m<n>_t0", "n-particle single-site moment observable of the initial matrix"},
            {"m<n>_t", "same observable after additive Dyson flow to time t"},
            {"ref_m<n>", "exact Haar value of the moment"}};
  if (e == "levelrep-tail")
    return {{"count", "eigenvalues in the repulsion interval around the energy"},
            {"ge<k>", "indicator count >= k"},
            {"small_gap", "indicator that the gap after the index is below N^{-delta-2/3} hat^{-1/3}"},
            {"ref_expected_count", "GUE kernel expected count on the interval"},
            {"ref_chernoff_ge<k>", "optimized Chernoff bound on P(count >= k)"}};
  if (e == "reg-audit")
    return {{"closeness_ratio_i<idx>", "|lambda_tilde - lambda| divided by the closeness bound"}};
  if (e == "dbm-stationarity")
    return {{"lambda_max_t0", "top eigenvalue of the initial matrix"},
            {"lambda_max_t", "top eigenvalue after OU Dyson flow to time t"},
            {"n_h12_sq_t", "N times the squared (1,2) entry after the flow"}};
  if (e == "decimation")
    return {{"count_I<k>", "decimated GOE pair eigenvalues in test interval k"},
            {"fm2_I<k>", "count (count - 1) on interval k"},
            {"ref_count_I<k>", "GUE kernel expected count"},
            {"ref_fm2_I<k>", "GUE kernel second factorial moment"}};
  return {};
}

ExperimentRun run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  struct Job {
    int N;
    long long stream;
  };
  std::vector<Job> jobs;
  for (int N : cfg.n_list) {
    jobs.push_back({N, -1});
    for (long long r = 0; r < cfg.replicas; ++r) jobs.push_back({N, r});
  }
  std::vector<std::vector<ResultRow>> slots(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const Job& job = jobs[j];
      try {
        slots[j] = job.stream < 0 ? reference_rows(cfg, job.N) : run_replica(cfg, job.N, job.stream);
      } catch (const std::exception& ex) {
        slots[j] = {{cfg.experiment, job.N, job.stream, "replica", std::numeric_limits<double>::quiet_NaN(),
                     "error", ex.what()}};
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentRun run;
  for (auto& s : slots)
    for (auto& r : s) run.rows.push_back(std::move(r));

  run.manifest.seed = cfg.seed;
  run.manifest.config = cfg.echo();
  run.manifest.version = kToolVersion;
  run.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.manifest.calibration = {{"msc_constant", kMscConstant}};
  run.manifest.statistics = statistic_docs(cfg.experiment);
  return run;
}

}  // namespace deloc
