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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <variant>

#include "deloc/linalg.hpp"
#include "deloc/rng.hpp"

namespace deloc {

enum class Symmetry { real, complex };

// Matrix of entry variances sigma2(i, j) = E|h_ij|^2.
struct VarianceProfile {
  Matrix sigma2;
  // Declared bounds c/N <= sigma2 <= C/N.
  double c_lower = 0.0;
  double c_upper = std::numeric_limits<double>::infinity();

  int N() const { return static_cast<int>(sigma2.rows()); }

  static VarianceProfile flat(int N);
  // Off-diagonal 1/N, diagonal 2/N.
  static VarianceProfile goe(int N);
  bool is_goe_shape() const;
};

struct ProfileReport {
  Vector column_sums;
  double min_scaled = 0.0;  // min N*sigma2
  double max_scaled = 0.0;  // max N*sigma2
  bool symmetric = false;
  bool nonnegative = false;
  bool stochastic = false;
  bool bounded = false;
  bool pass = false;
  std::string note;
};

ProfileReport validate_profile(const VarianceProfile& p, double tol = 1e-12);

void write_profile_csv(std::ostream& out, const VarianceProfile& p);
VarianceProfile read_profile_csv(std::istream& in);

class EntryLaw {
 public:
  enum class Kind { gaussian, rademacher, three_point };

  static EntryLaw gaussian() { return EntryLaw(Kind::gaussian, 3.0); }
  static EntryLaw rademacher() { return EntryLaw(Kind::rademacher, 1.0); }
  // Atoms +-sqrt(m4) with probability 1/(2 m4) each, zero otherwise.
  static EntryLaw three_point(double m4);

  Kind kind() const { return kind_; }
  double m4() const { return m4_; }
  double moment(int p) const;

  // Standardized draw from one Philox block (two uniforms).
  double draw(double u1, double u2) const;

  std::string name() const;

 private:
  EntryLaw(Kind kind, double m4) : kind_(kind), m4_(m4) {}
  Kind kind_;
  double m4_;
};

// Law with moments 0, 1, 0, m4. Rejects m4 < 1.
EntryLaw matched_moment_law(double m4);

struct EnsembleSpec {
  Symmetry symmetry = Symmetry::real;
  VarianceProfile profile;
  EntryLaw law = EntryLaw::gaussian();
  std::uint64_t seed = 0;

  static EnsembleSpec goe(int N, std::uint64_t seed);
  static EnsembleSpec gue(int N, std::uint64_t seed);
  static EnsembleSpec bernoulli(int N, std::uint64_t seed);

  int N() const { return profile.N(); }
};

class InvalidProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using SampledMatrix = std::variant<Matrix, CMatrix>;

SampledMatrix sample_ensemble(const EnsembleSpec& spec, std::uint64_t stream);
Matrix sample_symmetric(const EnsembleSpec& spec, std::uint64_t stream);
CMatrix sample_hermitian(const EnsembleSpec& spec, std::uint64_t stream);

// GOE_N with off-diagonal variance scale/N and diagonal 2*scale/N, drawn from
// an explicit counter stream.
Matrix sample_goe(int N, const CounterRng& rng, double scale = 1.0);
// GUE_N with E|h_ij|^2 = 1/N and real diagonal of variance 1/N.
CMatrix sample_gue(int N, const CounterRng& rng);

Matrix perturb_entry(Matrix M, int a, int b, double w);

}  // namespace deloc
