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

#include "deloc/ensembles.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace deloc {

VarianceProfile VarianceProfile::flat(int N) {
  if (N < 1) throw std::invalid_argument("VarianceProfile: N must be >= 1");
  VarianceProfile p;
  p.sigma2 = Matrix::Constant(N, N, 1.0 / N);
  p.c_lower = 1.0;
  p.c_upper = 1.0;
  return p;
}

VarianceProfile VarianceProfile::goe(int N) {
  VarianceProfile p = flat(N);
  p.sigma2.diagonal().setConstant(2.0 / N);
  p.c_upper = 2.0;
  return p;
}

bool VarianceProfile::is_goe_shape() const {
  const int n = N();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (sigma2(i, j) != (i == j ? 2.0 / n : 1.0 / n)) return false;
  return n > 0;
}

ProfileReport validate_profile(const VarianceProfile& p, double tol) {
  ProfileReport r;
  const int n = p.N();
  if (n == 0 || p.sigma2.cols() != n) {
    r.note = "profile matrix is empty or not square";
    return r;
  }
  r.column_sums = p.sigma2.colwise().sum().transpose();
  r.min_scaled = n * p.sigma2.minCoeff();
  r.max_scaled = n * p.sigma2.maxCoeff();
  r.symmetric = is_exactly_symmetric(p.sigma2);
  r.nonnegative = p.sigma2.minCoeff() >= 0.0 && p.sigma2.allFinite();
  r.stochastic = ((r.column_sums.array() - 1.0).abs() <= tol).all();
  r.bounded = r.min_scaled >= p.c_lower * (1.0 - tol) && r.max_scaled <= p.c_upper * (1.0 + tol);
  r.pass = r.symmetric && r.nonnegative && r.stochastic && r.bounded;
  if (!r.symmetric) r.note = "profile is not symmetric";
  else if (!r.nonnegative) r.note = "profile has negative or non-finite variances";
  else if (!r.stochastic && p.is_goe_shape())
    r.note = "GOE profile: column sums are (N+1)/N; GOE is handled as a special case";
  else if (!r.stochastic) r.note = "column sums deviate from 1";
  else if (!r.bounded) r.note = "N*sigma2 outside the declared bounds [c, C]";
  return r;
}

void write_profile_csv(std::ostream& out, const VarianceProfile& p) {
  const int n = p.N();
  out << n << "\n";
  out.precision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? "," : "") << p.sigma2(i, j);
    out << "\n";
  }
}

VarianceProfile read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidProfile("profile CSV: missing header row");
  int n = 0;
  try {
    n = std::stoi(line);
  } catch (const std::exception&) {
    throw InvalidProfile("profile CSV: header must be the matrix order N");
  }
  if (n < 1) throw InvalidProfile("profile CSV: N must be >= 1");
  VarianceProfile p;
  p.sigma2.resize(n, n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw InvalidProfile("profile CSV: expected " + std::to_string(n) + " rows");
    std::stringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ','))
        throw InvalidProfile("profile CSV: row " + std::to_string(i + 1) + " is short");
      p.sigma2(i, j) = std::stod(cell);
    }
  }
  p.c_lower = n * p.sigma2.minCoeff();
  p.c_upper = n * p.sigma2.maxCoeff();
  return p;
}

EntryLaw EntryLaw::three_point(double m4) {
  if (!(m4 >= 1.0) || !std::isfinite(m4))
    throw std::invalid_argument("three-point law requires m4 >= 1 (Jensen), got " + std::to_string(m4));
  return EntryLaw(Kind::three_point, m4);
}

double EntryLaw::moment(int p) const {
  if (p % 2 == 1) return 0.0;
  if (p == 0) return 1.0;
  switch (kind_) {
    case Kind::gaussian: {
      double m = 1.0;
      for (int k = p - 1; k > 0; k -= 2) m *= k;
      return m;
    }
    case Kind::rademacher:
      return 1.0;
    case Kind::three_point:
      return std::pow(m4_, p / 2.0 - 1.0);
  }
  return 0.0;
}

double EntryLaw::draw(double u1, double u2) const {
  switch (kind_) {
    case Kind::gaussian:
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    case Kind::rademacher:
      return u1 < 0.5 ? -1.0 : 1.0;
    case Kind::three_point: {
      double half = 0.5 / m4_;
      double a = std::sqrt(m4_);
      if (u1 < half) return -a;
      if (u1 < 2.0 * half) return a;
      return 0.0;
    }
  }
  return 0.0;
}

std::string EntryLaw::name() const {
  switch (kind_) {
    case Kind::gaussian: return "gaussian";
    case Kind::rademacher: return "rademacher";
    case Kind::three_point: return "three-point(m4=" + std::to_string(m4_) + ")";
  }
  return "unknown";
}

EntryLaw matched_moment_law(double m4) {
  if (!(m4 >= 1.0)) {
    throw std::invalid_argument("matched_moment_law: m4 = " + std::to_string(m4) +
                                " < 1 is infeasible for a unit-variance law");
  }
  if (m4 == 1.0) return EntryLaw::rademacher();
  return EntryLaw::three_point(m4);
}

EnsembleSpec EnsembleSpec::goe(int N, std::uint64_t seed) {
  return {Symmetry::real, VarianceProfile::goe(N), EntryLaw::gaussian(), seed};
}

EnsembleSpec EnsembleSpec::gue(int N, std::uint64_t seed) {
  return {Symmetry::complex, VarianceProfile::flat(N), EntryLaw::gaussian(), seed};
}

EnsembleSpec EnsembleSpec::bernoulli(int N, std::uint64_t seed) {
  return {Symmetry::real, VarianceProfile::flat(N), EntryLaw::rademacher(), seed};
}

namespace {

constexpr double kSamplingTolerance = 1e-8;

void check_spec(const EnsembleSpec& spec) {
  const VarianceProfile& p = spec.profile;
  if (p.N() < 1) throw InvalidProfile("sample_ensemble: profile is empty");
  ProfileReport r = validate_profile(p, kSamplingTolerance);
  if (!r.symmetric) throw InvalidProfile("sample_ensemble: invalid profile (symmetry violated)");
  if (!r.nonnegative) throw InvalidProfile("sample_ensemble: invalid profile (nonnegativity violated)");
  if (!r.stochastic && !p.is_goe_shape())
    throw InvalidProfile("sample_ensemble: invalid profile (column sums must equal 1)");
  if (!r.bounded) throw InvalidProfile("sample_ensemble: invalid profile (c/N <= sigma2 <= C/N violated)");
  if (spec.symmetry == Symmetry::complex && spec.law.kind() != EntryLaw::Kind::gaussian)
    throw std::invalid_argument("sample_ensemble: complex symmetry requires the gaussian law");
}

inline std::uint64_t entry_index(int i, int j, int N) {
  return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(N) + static_cast<std::uint64_t>(j);
}

}  // namespace

Matrix sample_symmetric(const EnsembleSpec& spec, std::uint64_t stream) {
  check_spec(spec);
  if (spec.symmetry != Symmetry::real) throw std::invalid_argument("sample_symmetric: spec is complex");
  const int N = spec.N();
  const CounterRng rng(spec.seed, stream);
  Matrix H(N, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i <= j; ++i) {
      auto [u1, u2] = rng.uniform_pair(entry_index(i, j, N));
      double v = std::sqrt(spec.profile.sigma2(i, j)) * spec.law.draw(u1, u2);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

CMatrix sample_hermitian(const EnsembleSpec& spec, std::uint64_t stream) {
  check_spec(spec);
  if (spec.symmetry != Symmetry::complex) throw std::invalid_argument("sample_hermitian: spec is real");
  const int N = spec.N();
  const CounterRng rng(spec.seed, stream);
  CMatrix H(N, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i <= j; ++i) {
      auto [g1, g2] = rng.normal_pair(entry_index(i, j, N));
      double s = std::sqrt(spec.profile.sigma2(i, j));
      if (i == j) {
        H(i, i) = s * g1;
      } else {
        std::complex<double> v(s * g1 / std::numbers::sqrt2, s * g2 / std::numbers::sqrt2);
        H(i, j) = v;
        H(j, i) = std::conj(v);
      }
    }
  }
  return H;
}

SampledMatrix sample_ensemble(const EnsembleSpec& spec, std::uint64_t stream) {
  if (spec.symmetry == Symmetry::complex) return sample_hermitian(spec, stream);
  return sample_symmetric(spec, stream);
}

Matrix sample_goe(int N, const CounterRng& rng, double scale) {
  Matrix H(N, N);
  const double off = std::sqrt(scale / N);
  const double diag = std::sqrt(2.0 * scale / N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i <= j; ++i) {
      double g = rng.normal(entry_index(i, j, N));
      double v = (i == j ? diag : off) * g;
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

CMatrix sample_gue(int N, const CounterRng& rng) {
  EnsembleSpec spec = EnsembleSpec::gue(N, rng.seed());
  return sample_hermitian(spec, rng.stream());
}

Matrix perturb_entry(Matrix M, int a, int b, double w) {
  if (a < 0 || b < 0 || a >= M.rows() || b >= M.cols())
    throw std::out_of_range("perturb_entry: index out of range");
  M(a, b) *= w;
  if (a != b) M(b, a) *= w;
  return M;
}

}  // namespace deloc
