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

#include <complex>
#include <vector>

namespace deloc {

// A point z = E + i*eta of the open upper half plane.
class HalfPlanePoint {
 public:
  HalfPlanePoint(double E, double eta);

  double E() const { return E_; }
  double eta() const { return eta_; }
  std::complex<double> z() const { return {E_, eta_}; }

 private:
  double E_;
  double eta_;
};

double rho_sc(double E);
double cdf_sc(double E);

// Stieltjes transform of the semicircle law: the root of m^2 + z m + 1 = 0
// lying in the upper half plane.
std::complex<double> m_sc(const HalfPlanePoint& z);

// Classical locations gamma_1 < ... < gamma_N, defined by cdf_sc(gamma_i) = i/N.
class ClassicalLocations {
 public:
  explicit ClassicalLocations(int N);

  int N() const { return N_; }
  const std::vector<double>& values() const { return gamma_; }

  // 1-based access, 1 <= i <= N.
  double operator()(int i) const;

  // Extension to all integers: spacing N^{-2/3} beyond either end of the spectrum.
  double extended(int m) const;

 private:
  int N_;
  std::vector<double> gamma_;
};

ClassicalLocations classical_locations(int N);

// Largest c for which c*g <= Im m_sc <= g/c holds on the scan grid, where
// g = sqrt(kappa + eta) inside [-2, 2] and eta / sqrt(kappa + eta) outside.
struct MscConstantScan {
  double constant;
  double worst_E;
  double worst_eta;
};
MscConstantScan scan_msc_constant(int n_energy = 801, int n_eta = 121);

// Frozen regression value, certified by scan_msc_constant and rounded down.
inline constexpr double kMscConstant = 0.0106;

// Ratio Im m_sc / g used by the scan; exposed for tests.
double msc_profile_ratio(const HalfPlanePoint& z);

}  // namespace deloc
