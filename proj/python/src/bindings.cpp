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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "deloc/config.hpp"
#include "deloc/dbm.hpp"
#include "deloc/emf.hpp"
#include "deloc/ensembles.hpp"
#include "deloc/experiments.hpp"
#include "deloc/levelrep.hpp"
#include "deloc/linalg.hpp"
#include "deloc/regularization.hpp"
#include "deloc/semicircle.hpp"
#include "deloc/statistics.hpp"

namespace py = pybind11;
using namespace deloc;

namespace {

ExperimentConfig config_from_dict(const py::dict& d) {
  std::ostringstream text;
  text << "schema_version = " << kConfigSchemaVersion << "\n";
  for (auto [key, value] : d) {
    std::string v;
    if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
      for (auto item : value) v += (v.empty() ? "" : ",") + py::str(item).cast<std::string>();
    } else {
      v = py::str(value).cast<std::string>();
    }
    text << py::str(key).cast<std::string>() << " = " << v << "\n";
  }
  std::istringstream in(text.str());
  return parse_config(in);
}

EnsembleSpec spec_for(const std::string& ensemble, int N, std::uint64_t seed, double m4) {
  ExperimentConfig cfg;
  cfg.ensemble = ensemble;
  cfg.m4 = m4;
  cfg.seed = seed;
  return cfg.ensemble_spec(N);
}

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["N"] = r.N;
  d["stream"] = r.stream;
  d["statistic"] = r.statistic;
  d["value"] = r.value;
  d["status"] = r.status;
  d["aux"] = r.aux;
  return d;
}

}  // namespace

PYBIND11_MODULE(_delocalab, m) {
  m.doc() = "Random-matrix eigenvector delocalization toolkit";
  m.attr("__version__") = kToolVersion;
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CollisionError>(m, "CollisionError", PyExc_RuntimeError);

  m.def("rho_sc", py::vectorize(rho_sc), py::arg("E"));
  m.def("cdf_sc", py::vectorize(cdf_sc), py::arg("E"));
  m.def("m_sc", [](double E, double eta) { return m_sc(HalfPlanePoint(E, eta)); }, py::arg("E"), py::arg("eta"));
  m.def("classical_locations", [](int N) { return classical_locations(N).values(); }, py::arg("N"));

  m.def("sample",
        [](const std::string& ensemble, int N, std::uint64_t seed, std::uint64_t stream, double m4) -> py::object {
          const SampledMatrix M = sample_ensemble(spec_for(ensemble, N, seed, m4), stream);
          if (const auto* real = std::get_if<Matrix>(&M)) return py::cast(*real);
          return py::cast(std::get<CMatrix>(M));
        },
        py::arg("ensemble"), py::arg("N"), py::arg("seed") = 0, py::arg("stream") = 0, py::arg("m4") = 3.0,
        "Sample one matrix; ensemble is goe, gue, bernoulli, three-point or flat-gaussian.");

  m.def("eigh", [](const Matrix& M) {
          Spectrum S = eigh(M);
          return py::make_tuple(S.lambda, S.U);
        }, py::arg("M"));
  m.def("eigh", [](const CMatrix& M) {
          HermSpectrum S = eigh(M);
          return py::make_tuple(S.lambda, S.U);
        }, py::arg("M"));

  m.def("max_sup_norm_sq", [](const Matrix& H) { return max_sup_norm_sq(eigh(H)); }, py::arg("H"));
  m.def("gumbel_statistic", [](const Matrix& H) { return gumbel_statistic(eigh(H)); }, py::arg("H"));

  m.def("evolve",
        [](const Matrix& H0, double t, int steps, const std::string& variant, std::uint64_t seed,
           std::uint64_t stream) {
          if (variant != "additive" && variant != "ou") throw std::invalid_argument("variant must be additive or ou");
          DbmConfig cfg{t, steps, variant == "ou" ? DbmVariant::ou : DbmVariant::additive};
          return evolve_final(H0, cfg, CounterRng(seed, stream));
        },
        py::arg("H0"), py::arg("t"), py::arg("steps") = 1, py::arg("variant") = "additive", py::arg("seed") = 0,
        py::arg("stream") = 0);

  m.def("moment_observable",
        [](const Matrix& U, const Vector& q, const std::map<int, int>& sites) {
          return moment_observable(U, q, Configuration(sites));
        },
        py::arg("U"), py::arg("q"), py::arg("sites"));
  m.def("integrate_emf_frozen",
        [](const Vector& lambda, const Matrix& U, const Vector& q, int n, double t, const std::string& norm) {
          if (norm != "dynamics" && norm != "displayed")
            throw std::invalid_argument("normalization must be dynamics or displayed");
          EmfIntegration opts;
          opts.normalization = norm == "displayed" ? EmfNormalization::displayed : EmfNormalization::dynamics;
          const EmfState out = integrate_emf(initial_emf_state(U, q, n), EigenvaluePath::frozen(lambda, t), t, opts);
          std::vector<std::vector<int>> configs;
          for (std::uint64_t r = 0; r < out.codec->size(); ++r) configs.push_back(out.codec->unrank_sites(r));
          return py::make_tuple(configs, out.f);
        },
        py::arg("lambda_"), py::arg("U"), py::arg("q"), py::arg("n"), py::arg("t"), py::arg("normalization") = "dynamics",
        "Integrate the moment flow on a frozen spectrum; returns (sorted site lists, values).");

  m.def("regularized_eigenvalue",
        [](const Vector& lambda, int i, double delta1, double eps1) {
          return HsRegularizer(lambda, delta1, eps1).lambda_tilde(i);
        },
        py::arg("lambda_"), py::arg("i"), py::arg("delta1") = 0.1, py::arg("eps1") = 1e-5);
  m.def("regularized_closeness_bound", &regularized_closeness_bound, py::arg("N"), py::arg("i"), py::arg("delta1"),
        py::arg("eps1"));
  m.def("regularized_projection",
        [](const Vector& lambda, const Matrix& U, const Vector& q, int ell, double delta1) {
          return regularized_projection(Spectrum{lambda, U}, q, ell, RegParams::hierarchy(delta1));
        },
        py::arg("lambda_"), py::arg("U"), py::arg("q"), py::arg("ell"), py::arg("delta1") = 0.1);
  m.def("free_energy", [](const std::vector<double>& w, double beta) { return free_energy(w, beta); }, py::arg("w"),
        py::arg("beta"));

  m.def("kappa", &kappa, py::arg("E"), py::arg("N"));
  m.def("gue_density", py::vectorize(gue_density), py::arg("N"), py::arg("x"));
  m.def("gue_expected_count", &gue_expected_count, py::arg("N"), py::arg("lo"), py::arg("hi"));
  m.def("gue_second_factorial_moment", &gue_second_factorial_moment, py::arg("N"), py::arg("lo"), py::arg("hi"));
  m.def("chernoff_tail_bound",
        [](int k, double expected) {
          const ChernoffBound b = chernoff_tail_bound(k, expected);
          return py::make_tuple(b.value, b.lambda, b.vacuous);
        },
        py::arg("k"), py::arg("expected"), "Returns (bound, lambda, vacuous).");
  m.def("decimate_goe_pair",
        [](int N, std::uint64_t seed, std::uint64_t stream) { return decimate_goe_pair(N, CounterRng(seed, stream)); },
        py::arg("N"), py::arg("seed") = 0, py::arg("stream") = 0);

  m.def("experiment_names", &experiment_names);
  m.def("run_experiment",
        [](const py::dict& config) {
          const ExperimentConfig cfg = config_from_dict(config);
          ExperimentRun run;
          {
            py::gil_scoped_release release;
            run = run_experiment(cfg);
          }
          py::list rows;
          for (const ResultRow& r : run.rows) rows.append(row_dict(r));
          return rows;
        },
        py::arg("config"), "Run an experiment from a dict of config keys; returns a list of row dicts.");
}
