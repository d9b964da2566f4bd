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

#include "deloc/semicircle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace deloc {

HalfPlanePoint::HalfPlanePoint(double E, double eta) : E_(E), eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(E) || !std::isfinite(eta)) {
    throw std::invalid_argument("HalfPlanePoint requires finite E and eta > 0, got eta = " +
                                std::to_string(eta));
  }
}

double rho_sc(double E) {
  double s = 4.0 - E * E;
  return s > 0.0 ? std::sqrt(s) / (2.0 * std::numbers::pi) : 0.0;
}

double cdf_sc(double E) {
  if (E <= -2.0) return 0.0;
  if (E >= 2.0) return 1.0;
  double v = 0.5 + E * std::sqrt(4.0 - E * E) / (4.0 * std::numbers::pi) +
             std::asin(E / 2.0) / std::numbers::pi;
  return std::clamp(v, 0.0, 1.0);
}

std::complex<double> m_sc(const HalfPlanePoint& zp) {
  const std::complex<double> z = zp.z();
  const std::complex<double> s = std::sqrt(z * z - 4.0);
  // The two roots multiply to 1; form the large one directly and invert it
  // to get the small one without cancellation.
  std::complex<double> a = -z + s;
  std::complex<double> b = -z - s;
  std::complex<double> big = (std::abs(a) >= std::abs(b) ? a : b) / 2.0;
  std::complex<double> small = 1.0 / big;
  return big.imag() > 0.0 ? big : small;
}

ClassicalLocations::ClassicalLocations(int N) : N_(N) {
  if (N < 1) throw std::invalid_argument("classical_locations requires N >= 1");
  gamma_.resize(N);
  for (int i = 1; i <= N; ++i) {
    double target = static_cast<double>(i) / N;
    if (i == N) {
      gamma_[i - 1] = 2.0;
      continue;
    }
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cdf_sc(mid) < target) lo = mid; else hi = mid;
    }
    gamma_[i - 1] = 0.5 * (lo + hi);
  }
}

double ClassicalLocations::operator()(int i) const {
  if (i < 1 || i > N_) {
    throw std::out_of_range("classical location index " + std::to_string(i) + " outside [1, " +
                            std::to_string(N_) + "]");
  }
  return gamma_[i - 1];
}

double ClassicalLocations::extended(int m) const {
  const double step = std::pow(static_cast<double>(N_), -2.0 / 3.0);
  if (m < 1) return gamma_.front() - (1 - m) * step;
  if (m > N_) return gamma_.back() + (m - N_) * step;
  return gamma_[m - 1];
}

ClassicalLocations classical_locations(int N) { return ClassicalLocations(N); }

double msc_profile_ratio(const HalfPlanePoint& z) {
  const double kappa = std::abs(std::abs(z.E()) - 2.0);
  const double root = std::sqrt(kappa + z.eta());
  const double g = std::abs(z.E()) <= 2.0 ? root : z.eta() / root;
  return m_sc(z).imag() / g;
}

MscConstantScan scan_msc_constant(int n_energy, int n_eta) {
  MscConstantScan best{1.0, 0.0, 1.0};
  for (int a = 0; a < n_energy; ++a) {
    double E = -20.0 + 40.0 * a / (n_energy - 1);
    for (int b = 0; b < n_eta; ++b) {
      double eta = std::pow(10.0, -8.0 + 9.0 * b / (n_eta - 1));
      double r = msc_profile_ratio(HalfPlanePoint(E, eta));
      double c = std::min(r, 1.0 / r);
      if (c < best.constant) best = {c, E, eta};
    }
  }
  return best;
}

}  // namespace deloc
