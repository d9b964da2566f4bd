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

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deloc/linalg.hpp"
#include "deloc/mollifier.hpp"

namespace deloc {

struct RegParams {
  double delta1 = 0.1;
  double eps1 = 1e-5;
  double delta2 = 1e-4;
  double eps2 = 1e-3;
  double omega = 1e-6;
  double nu = 1e-6;
  int k = 1;
  double beta = 1.0;

  // eps2 = delta1/1e2, delta2 = delta1/1e3, eps1 = delta1/1e4, nu = omega = delta1/1e5.
  static RegParams hierarchy(double delta1, int k = 1, double beta = 1.0);
  void validate() const;
};

// #{k : lambda_k in [-10, E]}.
int counting_function(const Vector& lambda, double E);

// Quadrature resolution of the Helffer-Sjostrand evaluation.
struct HsQuadrature {
  // Outer E-panels have width eta1 / outer_panels_per_eta.
  double outer_panels_per_eta = 4.0;
};

struct RegularizationWindow {
  int i = 0, j = 0, k = 0;
  double gamma_j = 0.0, gamma_k = 0.0;
  double eta1 = 0.0;
};

// Regularized eigenvalues of one spectrum. Every quadrature node depends only
// on (N, i, delta1, eps1), so lambda_tilde is a smooth function of the
// eigenvalues and can be differentiated numerically.
class HsRegularizer {
 public:
  HsRegularizer(Vector lambda, double delta1, double eps1, HsQuadrature quad = {});

  int N() const { return static_cast<int>(lambda_.size()); }
  const Vector& lambda() const { return lambda_; }

  RegularizationWindow window(int i) const;

  // f_E: 1 on [-10, E], 0 below -11 and above E + eta1.
  Mollifier f_E(double E, double eta1) const { return {-11.0, -10.0, E, E + eta1}; }

  // The three retained Helffer-Sjostrand terms for the cutoff at E.
  double F(double E, double eta1) const;
  // Tr f_E evaluated on the spectrum.
  double trace_f(double E, double eta1) const;

  double lambda_tilde(int i) const;

 private:
  struct SigmaRule {
    std::vector<double> nodes, weights;         // [eta1, 1]
    std::vector<double> outer_nodes, outer_weights;  // [1, 2]
    std::vector<double> psi_left, phi_left_outer, psi_left_outer;
    double psi_left_eta = 0.0;
  };
  SigmaRule sigma_rule(double eta1) const;
  double F_with(double E, double eta1, const SigmaRule& rule) const;
  double psi_right(double E, double eta1, double sigma) const;
  double phi_right(double E, double eta1, double sigma) const;

  Vector lambda_;
  double delta1_, eps1_;
  HsQuadrature quad_;
};

double hs_regularized_eigenvalue(const Vector& lambda, int i, const RegParams& params);
double hs_regularized_eigenvalue(const Matrix& M, int i, const RegParams& params);

// N^{eps1 - delta1} N^{-2/3} ihat^{-1/3}.
double regularized_closeness_bound(int N, int i, double delta1, double eps1);

inline int hat(int i, int N) { return std::min(i, N + 1 - i); }

// (1/pi) * integral over I_hat(center) of Im <q, G(E + i eta_l) q> dE, evaluated
// exactly through the Poisson-kernel antiderivative.
double regularized_projection(const Spectrum& S, const Vector& q, int ell, const RegParams& params,
                              std::optional<double> lambda_tilde_ell = std::nullopt);
double regularized_projection_weights(const Vector& lambda, const Vector& weights, int ell,
                                      const RegParams& params, double center);

struct ObservableT {
  double T = 0.0;
  double chi = 0.0;
  double F = 0.0;
  double v = 0.0;
};

// T = N chi_k v_ell, chi_k = r_k(F), F = sum_{|p-ell| <= N^nu} q_{ell,delta2}(lambda_tilde_p).
ObservableT observable_T(const Spectrum& S, const Vector& q, int ell, const RegParams& params);

// Smoothed window around lambda_tilde_ell: plateau +-1.5 w, support +-2 w.
Mollifier level_window(int N, int ell, double center, double delta2);

double free_energy(std::span<const double> w, double beta);
double smoothed_threshold_S(std::span<const double> v, double eps, double beta, int N);

// Central finite difference of order 1..3 in the symmetric entry (a, b),
// Richardson-extrapolated over steps h and h/2. Indices are 0-based.
double finite_diff(const std::function<double(const Matrix&)>& fn, const Matrix& M, int a, int b,
                   int order, double h);

// ----- good-event checks -----

struct EventFlag {
  double margin = 0.0;
  bool pass = false;
  bool evaluated = false;
};

struct EventReport {
  double omega = 0.0;
  EventFlag isotropic, semicircle, rigidity, delocalization;
  // Same four statements at omega' = eps2 / 8.
  EventFlag isotropic_fine, semicircle_fine, rigidity_fine, delocalization_fine;
  EventFlag closeness;  // |lambda_tilde - lambda| bound on the checked indices
  EventFlag count;      // at most k eigenvalues in I_{delta2}(lambda_ell)

  bool law_flags() const {
    return isotropic.pass && semicircle.pass && rigidity.pass && delocalization.pass;
  }
  bool fine_flags() const {
    return isotropic_fine.pass && semicircle_fine.pass && rigidity_fine.pass &&
           delocalization_fine.pass;
  }
  // B1(q, omega) and, when evaluated, B2 and B3.
  bool pass() const {
    return law_flags() && (!closeness.evaluated || closeness.pass) &&
           (!count.evaluated || count.pass);
  }
};

struct EventOptions {
  int n_energy = 161;
  int n_eta = 24;
  // Energy range is capped at |E| <= energy_cap even when 1/omega is larger.
  double energy_cap = 10.0;
  bool check_fine = false;
  // 1-based indices on which regularized-eigenvalue closeness is checked.
  std::vector<int> closeness_indices;
  // 1-based index for the level count; 0 disables it.
  int ell = 0;
};

EventReport event_check(const Spectrum& S, const Vector& q, const RegParams& params,
                        const EventOptions& opts = {});
EventReport event_check(const std::vector<Spectrum>& path, const Vector& q, const RegParams& params,
                        const EventOptions& opts = {});

// JSON audit: per index (lambda, lambda_tilde, bound, pass).
std::string regularization_audit_json(const Vector& lambda, const std::vector<int>& indices,
                                      const RegParams& params);

}  // namespace deloc
