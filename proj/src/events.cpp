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

#include <algorithm>
#include <cmath>

#include "deloc/regularization.hpp"
#include "deloc/semicircle.hpp"

namespace deloc {

namespace {

struct LawMargins {
  double isotropic = 0.0, semicircle = 0.0, rigidity = 0.0, delocalization = 0.0;
};

LawMargins law_margins(const Spectrum& S, const Vector& w, double omega, const EventOptions& opts) {
  const int N = S.N();
  const double n = static_cast<double>(N);
  const double n_omega = std::pow(n, omega);
  LawMargins m;

  const double e_max = std::min(1.0 / omega, opts.energy_cap);
  const double eta_lo = std::pow(n, -1.0 + omega);
  const double eta_hi = std::max(eta_lo, std::min(1.0 / omega, opts.energy_cap));
  for (int b = 0; b < opts.n_eta; ++b) {
    const double t = opts.n_eta > 1 ? static_cast<double>(b) / (opts.n_eta - 1) : 0.0;
    const double eta = eta_lo * std::pow(eta_hi / eta_lo, t);
    for (int a = 0; a < opts.n_energy; ++a) {
      const double E = opts.n_energy > 1 ? -e_max + 2.0 * e_max * a / (opts.n_energy - 1) : 0.0;
      const HalfPlanePoint z(E, eta);
      const std::complex<double> msc = m_sc(z);
      const double scale = std::sqrt(msc.imag() / (n * eta)) + 1.0 / (n * eta);
      const std::complex<double> iso = resolvent_qform_weights(S.lambda, w, z);
      m.isotropic = std::max(m.isotropic, std::abs(iso - msc) / (n_omega * scale));
      const std::complex<double> mn = stieltjes(S.lambda, z);
      m.semicircle = std::max(m.semicircle, std::abs(mn - msc) * n * eta / n_omega);
    }
  }
  const ClassicalLocations gamma(N);
  for (int k = 1; k <= N; ++k) {
    const double r = std::abs(S.lambda[k - 1] - gamma(k)) * std::pow(n, 2.0 / 3.0) *
                     std::cbrt(static_cast<double>(hat(k, N))) / n_omega;
    m.rigidity = std::max(m.rigidity, r);
  }
  m.delocalization = w.maxCoeff() * n / n_omega;
  return m;
}

EventFlag flag(double margin) { return {margin, margin <= 1.0, true}; }

void merge(EventFlag& into, const EventFlag& f) {
  if (!f.evaluated) return;
  if (!into.evaluated) {
    into = f;
    return;
  }
  into.margin = std::max(into.margin, f.margin);
  into.pass = into.pass && f.pass;
}

}  // namespace

EventReport event_check(const Spectrum& S, const Vector& q, const RegParams& params, const EventOptions& opts) {
  params.validate();
  if (!S.has_vectors()) throw std::invalid_argument("event_check: spectrum needs eigenvectors");
  if (std::abs(q.norm() - 1.0) > 1e-12) throw std::invalid_argument("event_check: q must be a unit vector");
  const int N = S.N();
  const Vector w = (S.U.transpose() * q).array().square();

  EventReport r;
  r.omega = params.omega;
  LawMargins m = law_margins(S, w, params.omega, opts);
  r.isotropic = flag(m.isotropic);
  r.semicircle = flag(m.semicircle);
  r.rigidity = flag(m.rigidity);
  r.delocalization = flag(m.delocalization);

  if (opts.check_fine) {
    LawMargins f = law_margins(S, w, params.eps2 / 8.0, opts);
    r.isotropic_fine = flag(f.isotropic);
    r.semicircle_fine = flag(f.semicircle);
    r.rigidity_fine = flag(f.rigidity);
    r.delocalization_fine = flag(f.delocalization);
  }

  if (!opts.closeness_indices.empty()) {
    HsRegularizer reg(S.lambda, params.delta1, params.eps1);
    double worst = 0.0;
    for (int i : opts.closeness_indices) {
      const double bound = regularized_closeness_bound(N, i, params.delta1, params.eps1);
      worst = std::max(worst, std::abs(reg.lambda_tilde(i) - S.lambda[i - 1]) / bound);
    }
    r.closeness = flag(worst);
  }

  if (opts.ell > 0) {
    const int ell = opts.ell;
    const double half = std::pow(static_cast<double>(N), -params.delta2 - 2.0 / 3.0) /
                        std::cbrt(static_cast<double>(hat(ell, N)));
    const double c = S.lambda[ell - 1];
    int count = 0;
    for (int p = 0; p < N; ++p)
      if (S.lambda[p] >= c - half && S.lambda[p] <= c + half) ++count;
    r.count = {static_cast<double>(count) / params.k, count <= params.k, true};
  }
  return r;
}

EventReport event_check(const std::vector<Spectrum>& path, const Vector& q, const RegParams& params,
                        const EventOptions& opts) {
  if (path.empty()) throw std::invalid_argument("event_check: empty path");
  EventReport total = event_check(path.front(), q, params, opts);
  for (std::size_t s = 1; s < path.size(); ++s) {
    EventReport r = event_check(path[s], q, params, opts);
    merge(total.isotropic, r.isotropic);
    merge(total.semicircle, r.semicircle);
    merge(total.rigidity, r.rigidity);
    merge(total.delocalization, r.delocalization);
    merge(total.isotropic_fine, r.isotropic_fine);
    merge(total.semicircle_fine, r.semicircle_fine);
    merge(total.rigidity_fine, r.rigidity_fine);
    merge(total.delocalization_fine, r.delocalization_fine);
    merge(total.closeness, r.closeness);
    merge(total.count, r.count);
  }
  return total;
}

}  // namespace deloc
