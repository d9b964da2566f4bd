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
#include <numbers>

#include "deloc/semicircle.hpp"
#include "oracles.hpp"

using namespace deloc;
using std::numbers::pi;

TEST_CASE("semicircle density") {
  CHECK(rho_sc(2.0) == 0.0);
  CHECK(rho_sc(3.0) == 0.0);
  CHECK(rho_sc(-2.5) == 0.0);
  CHECK(rho_sc(0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(oracle::adaptive_simpson(rho_sc, -2.0, 2.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("semicircle distribution function") {
  CHECK(cdf_sc(-2.0) == 0.0);
  CHECK(cdf_sc(-7.0) == 0.0);
  CHECK(cdf_sc(2.0) == 1.0);
  CHECK(cdf_sc(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double E : {-1.0, -1.7, 0.3, 1.9}) {
    const double ref = oracle::adaptive_simpson(rho_sc, -2.0, E, 1e-14);
    CHECK(std::abs(cdf_sc(E) - ref) <= 1e-10);
  }
}

TEST_CASE("Stieltjes transform against its defining integral") {
  auto m_ref = [](double E, double eta) {
    // x = 2 cos(theta) removes the square-root endpoints.
    auto re = [&](double th) {
      const double x = 2 * std::cos(th);
      const double w = 2 * std::sin(th) * std::sin(th) / pi;
      return w * (x - E) / ((x - E) * (x - E) + eta * eta);
    };
    auto im = [&](double th) {
      const double x = 2 * std::cos(th);
      const double w = 2 * std::sin(th) * std::sin(th) / pi;
      return w * eta / ((x - E) * (x - E) + eta * eta);
    };
    return std::complex<double>(oracle::adaptive_simpson(re, 0, pi, 1e-13), oracle::adaptive_simpson(im, 0, pi, 1e-13));
  };
  const auto mi = m_sc(HalfPlanePoint(0.0, 1.0));
  CHECK(mi.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mi.imag() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-14));
  for (auto [E, eta] : {std::pair{0.5, 0.1}, {-1.5, 0.3}, {3.0, 0.5}, {0.0, 2.0}, {1.99, 0.05}}) {
    const auto m = m_sc(HalfPlanePoint(E, eta));
    const auto ref = m_ref(E, eta);
    CHECK(std::abs(m - ref) < 1e-8);
    // Self-consistent equation m^2 + z m + 1 = 0.
    const std::complex<double> z(E, eta);
    CHECK(std::abs(m * m + z * m + 1.0) < 1e-12);
  }
}

TEST_CASE("Stieltjes transform is Herglotz") {
  for (double E = -20; E <= 20; E += 0.37)
    for (double eta : {1e-9, 1e-4, 0.1, 1.0, 10.0}) CHECK(m_sc(HalfPlanePoint(E, eta)).imag() > 0);
}

TEST_CASE("half plane points reject the real axis") {
  CHECK_THROWS_AS(HalfPlanePoint(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HalfPlanePoint(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("certified lower and upper profile constant") {
  const auto scan = scan_msc_constant();
  CHECK(scan.constant >= kMscConstant);
  CHECK(scan.constant < kMscConstant * 1.01);
  const double r = msc_profile_ratio(HalfPlanePoint(0.5, 0.1));
  CHECK(r >= kMscConstant);
  CHECK(r <= 1.0 / kMscConstant);
}

TEST_CASE("classical locations") {
  CHECK(classical_locations(2)(1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(classical_locations(4)(4) == 2.0);
  const double g = classical_locations(4)(1);
  const double ref = oracle::bisect(
      [](double x) { return oracle::adaptive_simpson(rho_sc, -2.0, x, 1e-14) - 0.25; }, -2.0, 2.0, 80);
  CHECK(std::abs(g - ref) < 1e-10);
  const auto loc = classical_locations(100);
  for (int i = 2; i <= 100; ++i) CHECK(loc(i) > loc(i - 1));
  CHECK_THROWS(loc(0));
  CHECK_THROWS(loc(101));
}
