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
#include <set>

#include <Eigen/Eigenvalues>

#include "deloc/emf.hpp"
#include "deloc/ensembles.hpp"

using namespace deloc;

namespace {

Configuration cfg(std::map<int, int> m) { return Configuration(std::move(m)); }

// exp(tL) f through a dense eigendecomposition of the rate matrix.
Vector expm_apply(const Matrix& L, const Vector& f, double t) {
  Eigen::EigenSolver<Matrix> es(L);
  const Eigen::MatrixXcd V = es.eigenvectors();
  const Eigen::VectorXcd d = (es.eigenvalues() * t).array().exp();
  const Eigen::VectorXcd coeff = V.partialPivLu().solve(f.cast<std::complex<double>>());
  return (V * d.asDiagonal() * coeff).real();
}

}  // namespace

TEST_CASE("particle moves") {
  const Configuration xi = cfg({{3, 2}});
  CHECK(move_particle(xi, 3, 5) == cfg({{3, 1}, {5, 1}}));
  CHECK(move_particle(xi, 7, 5) == xi);
  CHECK(move_particle(xi, 3, 3) == xi);
  CHECK(move_particle(cfg({{1, 1}}), 1, 2) == cfg({{2, 1}}));
}

TEST_CASE("double factorial normalization") {
  CHECK(normalization(cfg({{4, 1}})) == 1.0);
  CHECK(normalization(cfg({{4, 2}})) == 3.0);
  CHECK(normalization(cfg({{4, 2}, {6, 1}})) == 3.0);
  CHECK(normalization(cfg({{1, 3}, {2, 2}})) == 45.0);
  CHECK(normalization(Configuration()) == 1.0);
}

TEST_CASE("configuration codec is a bijection") {
  const ConfigurationCodec codec(6, 3);
  CHECK(codec.size() == 56);
  std::set<std::vector<int>> seen;
  for (std::uint64_t r = 0; r < codec.size(); ++r) {
    const auto s = codec.unrank_sites(r);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(codec.rank_sites(s) == r);
    CHECK(codec.rank(codec.unrank(r)) == r);
    seen.insert(s);
  }
  CHECK(seen.size() == 56);
  CHECK_THROWS(ConfigurationCodec(1000, 4));
}

TEST_CASE("generator annihilates constants") {
  const Vector lam = eigvalsh(sample_goe(7, CounterRng(1, 0)));
  auto codec = std::make_shared<const ConfigurationCodec>(7, 2);
  EmfState st{codec, Vector::Constant(static_cast<Eigen::Index>(codec->size()), 2.5)};
  CHECK(emf_generator(st, lam).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-site rate matrix") {
  const Vector lam = Eigen::Vector2d(-0.4, 0.6);
  auto codec = std::make_shared<const ConfigurationCodec>(2, 1);
  const double d2 = 1.0;
  const Matrix shown = EmfGenerator(codec, EmfNormalization::displayed).rate_matrix(lam);
  CHECK(shown(0, 1) == doctest::Approx(2.0 / (2 * d2)));
  CHECK(shown(1, 0) == doctest::Approx(2.0 / (2 * d2)));
  CHECK(shown.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
  const Matrix dyn = EmfGenerator(codec, EmfNormalization::dynamics).rate_matrix(lam);
  CHECK(dyn(0, 1) == doctest::Approx(1.0 / (2 * d2)));
}

TEST_CASE("generator matches a direct evaluation of the flow") {
  const int N = 5, n = 2;
  const Vector lam = eigvalsh(sample_goe(N, CounterRng(2, 0)));
  const Spectrum S = eigh(sample_goe(N, CounterRng(2, 1)));
  const Vector q = Vector::Ones(N).normalized();
  const EmfState st = initial_emf_state(S.U, q, n);
  const Vector g = emf_generator(st, lam, EmfNormalization::displayed);
  for (std::uint64_t r = 0; r < st.codec->size(); ++r) {
    const Configuration xi = st.codec->unrank(r);
    double ref = 0.0;
    for (int k = 1; k <= N; ++k)
      for (int l = 1; l <= N; ++l) {
        if (k == l) continue;
        const double c = 1.0 / (N * std::pow(lam[k - 1] - lam[l - 1], 2));
        ref += c * 2.0 * xi[k] * (1.0 + 2.0 * xi[l]) * (st(move_particle(xi, k, l)) - st(xi));
      }
    CHECK(g[static_cast<Eigen::Index>(r)] == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("maximum entry has non-positive derivative") {
  const int N = 6;
  const Vector lam = eigvalsh(sample_goe(N, CounterRng(3, 0)));
  const Spectrum S = eigh(sample_goe(N, CounterRng(3, 1)));
  const EmfState st = initial_emf_state(S.U, S.U.col(2), 2);
  Eigen::Index arg;
  st.f.maxCoeff(&arg);
  CHECK(emf_generator(st, lam)[arg] <= 0.0);
}

TEST_CASE("integration against the matrix exponential") {
  const int N = 5;
  const Vector lam = eigvalsh(sample_goe(N, CounterRng(4, 0)));
  const Spectrum S = eigh(sample_goe(N, CounterRng(4, 1)));
  const Vector q = Vector::Ones(N).normalized();
  for (int n : {1, 2}) {
    const EmfState f0 = initial_emf_state(S.U, q, n);
    const EigenvaluePath path = EigenvaluePath::frozen(lam, 2.0);
    CHECK((integrate_emf(f0, path, 0.0).f - f0.f).norm() == 0.0);
    const EmfState ft = integrate_emf(f0, path, 0.3);
    const Matrix L = EmfGenerator(f0.codec).rate_matrix(lam);
    CHECK((ft.f - expm_apply(L, f0.f, 0.3)).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("one particle relaxes to the average") {
  const int N = 5;
  const Vector lam = eigvalsh(sample_goe(N, CounterRng(5, 0)));
  const Spectrum S = eigh(sample_goe(N, CounterRng(5, 1)));
  const EmfState f0 = initial_emf_state(S.U, S.U.col(0), 1);
  const EmfState ft = integrate_emf(f0, EigenvaluePath::frozen(lam, 200.0), 200.0);
  CHECK((ft.f.array() - f0.f.mean()).abs().maxCoeff() < 1e-8);
  CHECK(f0.f.mean() == doctest::Approx(1.0));
}

TEST_CASE("maximum principle along the integration") {
  const int N = 6;
  const Vector lam = eigvalsh(sample_goe(N, CounterRng(6, 0)));
  const Spectrum S = eigh(sample_goe(N, CounterRng(6, 1)));
  const EmfState f0 = initial_emf_state(S.U, Vector::Ones(N).normalized(), 2);
  double last = f0.f.maxCoeff();
  bool monotone = true;
  EmfIntegration opts;
  opts.observer = [&](double, const Vector& f) {
    if (f.maxCoeff() > last + 1e-12) monotone = false;
    last = f.maxCoeff();
  };
  integrate_emf(f0, EigenvaluePath::frozen(lam, 1.0), 1.0, opts);
  CHECK(monotone);
}

TEST_CASE("unconditional moments under orthogonal invariance") {
  const int N = 30;
  const Vector q = Vector::Unit(N, 0);
  CHECK(moment_mc_unconditional(Matrix::Zero(N, N), q, Configuration(), 0.5, 10, CounterRng(1, 1)).mean == 1.0);
  auto goe = [&](int r) { return sample_goe(N, CounterRng(7, 0).child(r)); };
  const Estimate m1 = moment_mc_unconditional(goe, q, cfg({{4, 1}}), 0.3, 2000, CounterRng(7, 1));
  CHECK(std::abs(m1.mean - 1.0) <= 3 * m1.std_error);
  const Estimate m2 = moment_mc_unconditional(goe, q, cfg({{4, 2}}), 0.3, 2000, CounterRng(7, 2));
  CHECK(std::abs(m2.mean - N / (N + 2.0)) <= 3 * m2.std_error);
}

TEST_CASE("small duality check") {
  const int N = 5;
  const Spectrum S = eigh(sample_goe(N, CounterRng(8, 0)));
  const Vector q = Vector::Ones(N).normalized();
  const EigenvaluePath path = EigenvaluePath::frozen(S.lambda, 0.2);
  const EmfState ft = integrate_emf(initial_emf_state(S.U, q, 1), path, 0.2);
  std::vector<Configuration> xis{cfg({{1, 1}}), cfg({{3, 1}}), cfg({{5, 1}})};
  const auto est = moment_mc_conditional(S.U, path, q, xis, 0.2, 3000, CounterRng(8, 1));
  for (std::size_t c = 0; c < xis.size(); ++c) CHECK(std::abs(est[c].mean - ft(xis[c])) <= 3.5 * est[c].std_error);
}
