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

#include <iosfwd>
#include <vector>

#include "deloc/linalg.hpp"
#include "deloc/rng.hpp"

namespace deloc {

enum class DbmVariant { additive, ou };

struct DbmConfig {
  double t_final = 1.0;
  int n_steps = 1;
  DbmVariant variant = DbmVariant::additive;

  void validate() const;
  double step() const { return t_final / n_steps; }
};

struct MatrixPath {
  std::vector<double> times;
  std::vector<Matrix> snapshots;
};

// Exact-in-law matrix Dyson Brownian motion on the uniform grid of cfg.
// Step s draws its increment from rng.child(s).
MatrixPath evolve_additive(const Matrix& H0, DbmConfig cfg, const CounterRng& rng);
MatrixPath evolve_ou(const Matrix& H0, DbmConfig cfg, const CounterRng& rng);
MatrixPath evolve(const Matrix& H0, const DbmConfig& cfg, const CounterRng& rng);

// Final matrix only, without storing intermediate snapshots.
Matrix evolve_final(const Matrix& H0, const DbmConfig& cfg, const CounterRng& rng);

struct SpectralPath {
  std::vector<double> times;
  std::vector<Spectrum> spectra;
};

// Eigendecomposition of every snapshot. Eigenvector signs after the first
// snapshot are chosen to have nonnegative overlap with the previous time.
SpectralPath spectral_path(const MatrixPath& path);

struct EigenvaluePath {
  std::vector<double> times;
  std::vector<Vector> lambda;

  static EigenvaluePath from(const SpectralPath& path);
  static EigenvaluePath frozen(const Vector& lambda, double t_final);

  double min_gap() const;
};

struct SdeOptions {
  double max_step = 1e-3;
  // Step is also capped by gap_factor * N * min_gap^2.
  double gap_factor = 0.1;
  bool record_path = false;
  // Zero disables the Brownian term (drift only).
  double noise_scale = 1.0;
};

struct EigenvectorPath {
  std::vector<double> times;
  std::vector<Matrix> bases;
  long long steps_taken = 0;
};

class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Euler-Maruyama discretization of the eigenvector flow driven by a frozen
// eigenvalue path, followed by modified Gram-Schmidt after every step. The
// eigenvalues are held constant on each interval of the path grid.
EigenvectorPath eigenvector_sde(const Matrix& U0, const EigenvaluePath& path,
                                const CounterRng& rng, const SdeOptions& opts = {});

void write_path_csv(std::ostream& out, const EigenvaluePath& path);

}  // namespace deloc
