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

#include "deloc/dbm.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "deloc/ensembles.hpp"

namespace deloc {

void DbmConfig::validate() const {
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw std::invalid_argument("DbmConfig: t_final must be >= 0");
  if (n_steps < 1) throw std::invalid_argument("DbmConfig: n_steps must be >= 1");
}

namespace {

template <class Visit>
void run_dbm(const Matrix& H0, const DbmConfig& cfg, const CounterRng& rng, Visit&& visit) {
  cfg.validate();
  if (!is_exactly_symmetric(H0)) throw std::invalid_argument("Dyson Brownian motion: H0 must be symmetric");
  const int N = static_cast<int>(H0.rows());
  const double dt = cfg.step();
  const double decay = std::exp(-0.5 * dt);
  const double ou_scale = -std::expm1(-dt);
  Matrix H = H0;
  visit(0.0, H);
  for (int s = 0; s < cfg.n_steps; ++s) {
    CounterRng step_rng = rng.child(static_cast<std::uint64_t>(s));
    if (cfg.variant == DbmVariant::additive) {
      H += sample_goe(N, step_rng, dt);
    } else {
      H = decay * H + sample_goe(N, step_rng, ou_scale);
    }
    visit(dt * (s + 1), H);
  }
}

}  // namespace

MatrixPath evolve(const Matrix& H0, const DbmConfig& cfg, const CounterRng& rng) {
  MatrixPath path;
  run_dbm(H0, cfg, rng, [&](double t, const Matrix& H) {
    path.times.push_back(t);
    path.snapshots.push_back(H);
  });
  return path;
}

MatrixPath evolve_additive(const Matrix& H0, DbmConfig cfg, const CounterRng& rng) {
  cfg.variant = DbmVariant::additive;
  return evolve(H0, cfg, rng);
}

MatrixPath evolve_ou(const Matrix& H0, DbmConfig cfg, const CounterRng& rng) {
  cfg.variant = DbmVariant::ou;
  return evolve(H0, cfg, rng);
}

Matrix evolve_final(const Matrix& H0, const DbmConfig& cfg, const CounterRng& rng) {
  Matrix out;
  run_dbm(H0, cfg, rng, [&](double, const Matrix& H) { out = H; });
  return out;
}

SpectralPath spectral_path(const MatrixPath& path) {
  SpectralPath sp;
  sp.times = path.times;
  sp.spectra.reserve(path.snapshots.size());
  for (const Matrix& H : path.snapshots) {
    if (!is_exactly_symmetric(H)) throw std::invalid_argument("spectral_path: snapshot is not symmetric");
    Spectrum S = eigh(H);
    if (!sp.spectra.empty()) {
      const Matrix& prev = sp.spectra.back().U;
      for (int k = 0; k < S.N(); ++k)
        if (S.U.col(k).dot(prev.col(k)) < 0.0) S.U.col(k) *= -1.0;
    }
    sp.spectra.push_back(std::move(S));
  }
  return sp;
}

EigenvaluePath EigenvaluePath::from(const SpectralPath& path) {
  EigenvaluePath out;
  out.times = path.times;
  for (const Spectrum& S : path.spectra) out.lambda.push_back(S.lambda);
  return out;
}

EigenvaluePath EigenvaluePath::frozen(const Vector& lambda, double t_final) {
  return {{0.0, t_final}, {lambda, lambda}};
}

namespace {

double min_gap_of(const Vector& lambda) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < lambda.size(); ++i) g = std::min(g, lambda[i] - lambda[i - 1]);
  return g;
}

void gram_schmidt(Matrix& U) {
  for (Eigen::Index k = 0; k < U.cols(); ++k) {
    for (Eigen::Index j = 0; j < k; ++j) U.col(k) -= U.col(j).dot(U.col(k)) * U.col(j);
    U.col(k).normalize();
  }
}

}  // namespace

double EigenvaluePath::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const Vector& l : lambda) g = std::min(g, min_gap_of(l));
  return g;
}

EigenvectorPath eigenvector_sde(const Matrix& U0, const EigenvaluePath& path, const CounterRng& rng,
                                const SdeOptions& opts) {
  if (path.times.size() < 2 || path.lambda.size() != path.times.size())
    throw std::invalid_argument("eigenvector_sde: eigenvalue path needs at least two grid times");
  const int N = static_cast<int>(U0.rows());
  if (U0.cols() != N) throw std::invalid_argument("eigenvector_sde: basis must be square");

  EigenvectorPath out;
  Matrix U = U0;
  Matrix A(N, N);
  if (opts.record_path) {
    out.times.push_back(path.times.front());
    out.bases.push_back(U);
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N));
  std::uint64_t step_id = 0;

  for (std::size_t m = 0; m + 1 < path.times.size(); ++m) {
    const Vector& lam = path.lambda[m];
    if (lam.size() != N) throw std::invalid_argument("eigenvector_sde: eigenvalue path dimension mismatch");
    const double gap = min_gap_of(lam);
    if (gap < 1e-12) {
      std::ostringstream msg;
      msg << "eigenvector_sde: collision, eigenvalue gap " << gap << " at t = " << path.times[m];
      throw CollisionError(msg.str());
    }
    const double len = path.times[m + 1] - path.times[m];
    const double cap = std::min(opts.max_step, opts.gap_factor * N * gap * gap);
    const long long n_sub = std::max<long long>(1, static_cast<long long>(std::ceil(len / cap)));
    const double h = len / static_cast<double>(n_sub);
    const double sqrt_h = std::sqrt(h);

    // Drift coefficients are constant on the interval.
    Vector drift(N);
    for (int k = 0; k < N; ++k) {
      double s = 0.0;
      for (int l = 0; l < N; ++l)
        if (l != k) s += 1.0 / ((lam[k] - lam[l]) * (lam[k] - lam[l]));
      drift[k] = -0.5 * h * s / N;
    }

    for (long long sub = 0; sub < n_sub; ++sub) {
      CounterRng step_rng = rng.child(step_id++);
      A.setZero();
      for (int k = 0; k < N; ++k) A(k, k) = 1.0 + drift[k];
      if (opts.noise_scale != 0.0) {
        for (int l = 1; l < N; ++l) {
          for (int k = 0; k < l; ++k) {
            double dB = opts.noise_scale * sqrt_h *
                        step_rng.normal(static_cast<std::uint64_t>(k) * N + l);
            // Column k of U*A is du_k; A(l, k) multiplies u_l.
            A(l, k) = inv_sqrt_n * dB / (lam[k] - lam[l]);
            A(k, l) = -A(l, k);
          }
        }
      }
      U = U * A;
      gram_schmidt(U);
      ++out.steps_taken;
    }
    if (opts.record_path) {
      out.times.push_back(path.times[m + 1]);
      out.bases.push_back(U);
    }
  }
  if (!opts.record_path) {
    out.times.push_back(path.times.back());
    out.bases.push_back(U);
  }
  return out;
}

void write_path_csv(std::ostream& out, const EigenvaluePath& path) {
  out << "time,index,eigenvalue\n";
  out.precision(17);
  for (std::size_t m = 0; m < path.times.size(); ++m)
    for (Eigen::Index i = 0; i < path.lambda[m].size(); ++i)
      out << path.times[m] << "," << (i + 1) << "," << path.lambda[m][i] << "\n";
}

}  // namespace deloc
