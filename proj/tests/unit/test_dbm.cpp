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
#include <sstream>

#include "deloc/dbm.hpp"
#include "deloc/ensembles.hpp"

using namespace deloc;

namespace {

double op_norm(const Matrix& M) { return eigvalsh(M).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("zero time step leaves the matrix fixed") {
  const Matrix H0 = sample_goe(6, CounterRng(1, 0));
  for (DbmVariant v : {DbmVariant::additive, DbmVariant::ou}) {
    const MatrixPath p = evolve(H0, {0.0, 5, v}, CounterRng(2, 0));
    REQUIRE(p.snapshots.size() == 6);
    for (const Matrix& H : p.snapshots) CHECK((H - H0).norm() == 0.0);
  }
}

TEST_CASE("one additive step from zero is a scaled GOE sample") {
  const CounterRng rng(3, 1);
  const Matrix Ht = evolve_final(Matrix::Zero(7, 7), {0.4, 1, DbmVariant::additive}, rng);
  CHECK((Ht - sample_goe(7, rng.child(0), 0.4)).norm() < 1e-15);
  CHECK((Ht - std::sqrt(0.4) * sample_goe(7, rng.child(0))).norm() < 1e-14);
}

TEST_CASE("additive increments have variance t/N") {
  const int N = 100, reps = 400;
  const Matrix H0 = sample_goe(N, CounterRng(4, 0));
  double s2 = 0;
  for (int r = 0; r < reps; ++r) {
    const Matrix Ht = evolve_final(H0, {1.0, 4, DbmVariant::additive}, CounterRng(4, 1).child(r));
    const double d = Ht(0, 1) - H0(0, 1);
    s2 += d * d;
  }
  const double v = N * s2 / reps;
  CHECK(std::abs(v - 1.0) <= 3.0 * std::sqrt(2.0 / reps));
}

TEST_CASE("OU flow preserves GOE and relaxes to it") {
  const int N = 60, reps = 600;
  double off_stat = 0, diag_stat = 0, off_relax = 0;
  for (int r = 0; r < reps; ++r) {
    const Matrix H0 = sample_goe(N, CounterRng(5, 0).child(r));
    const Matrix Ht = evolve_final(H0, {0.7, 3, DbmVariant::ou}, CounterRng(5, 1).child(r));
    off_stat += Ht(0, 1) * Ht(0, 1);
    diag_stat += Ht(2, 2) * Ht(2, 2);
    const Matrix Hr = evolve_final(Matrix::Zero(N, N), {20.0, 4, DbmVariant::ou}, CounterRng(5, 2).child(r));
    off_relax += Hr(0, 1) * Hr(0, 1);
  }
  const double band = 3.0 * std::sqrt(2.0 / reps);
  CHECK(std::abs(N * off_stat / reps - 1.0) <= band);
  CHECK(std::abs(N * diag_stat / reps / 2.0 - 1.0) <= band);
  CHECK(std::abs(N * off_relax / reps - 1.0) <= band);
}

TEST_CASE("spectral path of a rotation family") {
  MatrixPath p;
  for (int s = 0; s <= 10; ++s) {
    const double th = 0.1 * s;
    Matrix R(2, 2);
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Matrix H = R * Vector(Eigen::Vector2d(-0.3, 1.1)).asDiagonal() * R.transpose();
    H(1, 0) = H(0, 1);
    p.times.push_back(th);
    p.snapshots.push_back(H);
  }
  const SpectralPath sp = spectral_path(p);
  for (const Spectrum& S : sp.spectra) {
    CHECK(S.lambda[0] == doctest::Approx(-0.3).epsilon(1e-13));
    CHECK(S.lambda[1] == doctest::Approx(1.1).epsilon(1e-13));
  }
  for (std::size_t m = 1; m < sp.spectra.size(); ++m)
    for (int k = 0; k < 2; ++k) CHECK(sp.spectra[m].U.col(k).dot(sp.spectra[m - 1].U.col(k)) > 0);
}

TEST_CASE("constant path has constant spectra") {
  const Matrix H = sample_goe(5, CounterRng(6, 0));
  MatrixPath p{{0.0, 1.0, 2.0}, {H, H, H}};
  const EigenvaluePath ev = EigenvaluePath::from(spectral_path(p));
  for (const Vector& l : ev.lambda) CHECK((l - ev.lambda[0]).norm() == 0.0);
}

TEST_CASE("eigenvalue paths are continuous") {
  const int N = 20;
  const DbmConfig cfg{0.2, 200, DbmVariant::additive};
  const MatrixPath p = evolve(sample_goe(N, CounterRng(7, 0)), cfg, CounterRng(7, 1));
  const SpectralPath sp = spectral_path(p);
  double worst = 0.0;
  for (std::size_t m = 1; m < sp.spectra.size(); ++m) {
    const double jump = (sp.spectra[m].lambda - sp.spectra[m - 1].lambda).cwiseAbs().maxCoeff();
    const double inc = op_norm(p.snapshots[m] - p.snapshots[m - 1]);
    // Weyl's inequality.
    CHECK(jump <= inc * (1 + 1e-12));
    worst = std::max(worst, jump / (std::sqrt(cfg.step()) * inc));
  }
  CHECK(worst <= 5.0 / std::sqrt(cfg.step()));

  std::ostringstream os;
  write_path_csv(os, EigenvaluePath::from(sp));
  CHECK(os.str().rfind("time,index,eigenvalue\n", 0) == 0);
}

TEST_CASE("eigenvector SDE without noise keeps the basis") {
  const Spectrum S = eigh(sample_goe(8, CounterRng(8, 0)));
  SdeOptions o;
  o.noise_scale = 0.0;
  const EigenvectorPath p = eigenvector_sde(S.U, EigenvaluePath::frozen(S.lambda, 0.1), CounterRng(8, 1), o);
  CHECK((p.bases.back() - S.U).norm() < 1e-12);
}

TEST_CASE("eigenvector SDE keeps orthonormal columns at every step") {
  const Spectrum S = eigh(sample_goe(10, CounterRng(9, 0)));
  SdeOptions o;
  o.record_path = true;
  o.max_step = 0.01;
  EigenvaluePath path;
  for (int m = 0; m <= 10; ++m) {
    path.times.push_back(0.01 * m);
    path.lambda.push_back(S.lambda);
  }
  const EigenvectorPath p = eigenvector_sde(S.U, path, CounterRng(9, 1), o);
  CHECK(p.bases.size() == 11);
  for (const Matrix& U : p.bases) CHECK((U.transpose() * U - Matrix::Identity(10, 10)).norm() < 1e-12);
}

TEST_CASE("two-level overlap decay matches the rotation diffusion") {
  // For N = 2 the basis rotates by a Brownian angle of variance t / (N gap^2).
  const Vector lam = Eigen::Vector2d(-1.0, 1.0);
  const double gap = 2.0, t = 0.4;
  const int reps = 4000;
  double sum = 0, sum2 = 0;
  for (int r = 0; r < reps; ++r) {
    SdeOptions o;
    o.max_step = 1e-3;
    const EigenvectorPath p =
        eigenvector_sde(Matrix::Identity(2, 2), EigenvaluePath::frozen(lam, t), CounterRng(10, 0).child(r), o);
    const double c = p.bases.back()(0, 0) * p.bases.back()(0, 0);
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  const double var = t / (2.0 * gap * gap);
  const double exact = 0.5 * (1.0 + std::exp(-2.0 * var));
  CHECK(std::abs(mean - exact) <= 3.0 * se + 1e-3);
  // First order in t.
  CHECK(std::abs((1.0 - exact) - var) < var * var * 1.1);
}

TEST_CASE("collisions are reported") {
  const Vector lam = Eigen::Vector3d(0.0, 0.0, 1.0);
  CHECK_THROWS_AS(eigenvector_sde(Matrix::Identity(3, 3), EigenvaluePath::frozen(lam, 0.1), CounterRng(1, 1)),
                  CollisionError);
}
