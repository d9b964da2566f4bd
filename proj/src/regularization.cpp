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

#include "deloc/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <json.hpp>

#include "deloc/semicircle.hpp"

namespace deloc {

RegParams RegParams::hierarchy(double delta1, int k, double beta) {
  RegParams p;
  p.delta1 = delta1;
  p.eps2 = delta1 / 1e2;
  p.delta2 = delta1 / 1e3;
  p.eps1 = delta1 / 1e4;
  p.nu = delta1 / 1e5;
  p.omega = delta1 / 1e5;
  p.k = k;
  p.beta = beta;
  return p;
}

void RegParams::validate() const {
  for (double v : {delta1, eps1, delta2, eps2, omega, nu})
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("RegParams: exponents must be positive");
  if (!(delta1 > eps1)) throw std::invalid_argument("RegParams: requires delta1 > eps1");
  if (!(eps2 > delta2)) throw std::invalid_argument("RegParams: requires eps2 > delta2");
  if (k < 1) throw std::invalid_argument("RegParams: k must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("RegParams: beta must be > 0");
}

int counting_function(const Vector& lambda, double E) {
  if (E < -10.0) throw std::invalid_argument("counting_function: requires E >= -10");
  int count = 0;
  for (Eigen::Index a = 0; a < lambda.size(); ++a)
    if (lambda[a] >= -10.0 && lambda[a] <= E) ++count;
  return count;
}

namespace {

template <unsigned P>
void append_gauss(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using rule = boost::math::quadrature::gauss<double, P>;
  const auto& abs = rule::abscissa();
  const auto& wts = rule::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t n = 0; n < abs.size(); ++n) {
    if (abs[n] == 0.0) {
      x.push_back(c);
      w.push_back(h * wts[n]);
    } else {
      x.push_back(c - h * abs[n]);
      w.push_back(h * wts[n]);
      x.push_back(c + h * abs[n]);
      w.push_back(h * wts[n]);
    }
  }
}

constexpr unsigned kTransitionNodes = 20;
constexpr unsigned kSigmaNodes = 8;
constexpr unsigned kOuterSigmaNodes = 10;
constexpr unsigned kLeftNodes = 16;
constexpr unsigned kEnergyNodes = 5;

// Falling cutoff in sigma: 1 for sigma <= 1, 0 for sigma >= 2.
const Mollifier& chi() {
  static const Mollifier m(-2.0, -1.0, 1.0, 2.0);
  return m;
}

}  // namespace

HsRegularizer::HsRegularizer(Vector lambda, double delta1, double eps1, HsQuadrature quad)
    : lambda_(std::move(lambda)), delta1_(delta1), eps1_(eps1), quad_(quad) {
  if (lambda_.size() < 1) throw std::invalid_argument("HsRegularizer: empty spectrum");
  if (!(delta1 > 0.0) || !(eps1 > 0.0)) throw std::invalid_argument("HsRegularizer: exponents must be positive");
}

RegularizationWindow HsRegularizer::window(int i) const {
  const int n = N();
  if (i < 1 || i > n) throw std::out_of_range("HsRegularizer: index outside [1, N]");
  static thread_local int cached_n = 0;
  static thread_local std::unique_ptr<ClassicalLocations> gamma;
  if (cached_n != n) {
    gamma = std::make_unique<ClassicalLocations>(n);
    cached_n = n;
  }
  RegularizationWindow w;
  w.i = i;
  const int offset = static_cast<int>(std::ceil(1.5 * std::pow(static_cast<double>(n), eps1_)));
  w.j = i - offset;
  w.k = i + offset;
  w.gamma_j = gamma->extended(w.j);
  w.gamma_k = gamma->extended(w.k);
  w.eta1 = std::pow(static_cast<double>(n), -2.0 / 3.0 - delta1_) * std::pow(hat(i, n), -1.0 / 3.0);
  return w;
}

// Re sum_a 1 / (lambda_a - e - i sigma) integrated against f_E' over [E, E + eta1].
double HsRegularizer::psi_right(double E, double eta1, double sigma) const {
  std::vector<double> x, w;
  x.reserve(kTransitionNodes);
  w.reserve(kTransitionNodes);
  append_gauss<kTransitionNodes>(E, E + eta1, x, w);
  const double s2 = sigma * sigma;
  double total = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double fp = -smoothstep((E + eta1 - x[n]) / eta1, 1) / eta1;
    double re = 0.0;
    for (Eigen::Index a = 0; a < lambda_.size(); ++a) {
      const double d = lambda_[a] - x[n];
      re += d / (d * d + s2);
    }
    total += w[n] * fp * re;
  }
  return total;
}

// Im sum_a 1 / (lambda_a - e - i sigma) integrated against f_E over [-10, E + eta1].
double HsRegularizer::phi_right(double E, double eta1, double sigma) const {
  double total = 0.0;
  for (Eigen::Index a = 0; a < lambda_.size(); ++a)
    total += std::atan((E - lambda_[a]) / sigma) - std::atan((-10.0 - lambda_[a]) / sigma);
  std::vector<double> x, w;
  append_gauss<kTransitionNodes>(E, E + eta1, x, w);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double f = smoothstep((E + eta1 - x[n]) / eta1, 0);
    double im = 0.0;
    for (Eigen::Index a = 0; a < lambda_.size(); ++a) {
      const double d = lambda_[a] - x[n];
      im += sigma / (d * d + sigma * sigma);
    }
    total += w[n] * f * im;
  }
  return total;
}

HsRegularizer::SigmaRule HsRegularizer::sigma_rule(double eta1) const {
  SigmaRule rule;
  if (eta1 < 1.0) {
    double lo = eta1;
    while (lo < 1.0) {
      double hi = std::min(2.0 * lo, 1.0);
      if (1.0 - hi < 0.25 * lo) hi = 1.0;
      append_gauss<kSigmaNodes>(lo, hi, rule.nodes, rule.weights);
      lo = hi;
    }
  }
  append_gauss<kOuterSigmaNodes>(std::max(1.0, eta1), 2.0, rule.outer_nodes, rule.outer_weights);

  // The left transition of f_E on [-11, -10] does not depend on E.
  std::vector<double> ex, ew;
  append_gauss<kLeftNodes>(-11.0, -10.0, ex, ew);
  auto left = [&](double sigma, bool imaginary_part, bool use_derivative) {
    double total = 0.0;
    for (std::size_t n = 0; n < ex.size(); ++n) {
      const double g = smoothstep(ex[n] + 11.0, use_derivative ? 1 : 0);
      double acc = 0.0;
      for (Eigen::Index a = 0; a < lambda_.size(); ++a) {
        const double d = lambda_[a] - ex[n];
        acc += (imaginary_part ? sigma : d) / (d * d + sigma * sigma);
      }
      total += ew[n] * g * acc;
    }
    return total;
  };
  for (double s : rule.nodes) rule.psi_left.push_back(left(s, false, true));
  for (double s : rule.outer_nodes) {
    rule.psi_left_outer.push_back(left(s, false, true));
    rule.phi_left_outer.push_back(left(s, true, false));
  }
  rule.psi_left_eta = left(eta1, false, true);
  return rule;
}

double HsRegularizer::F_with(double E, double eta1, const SigmaRule& rule) const {
  // On [1, 2] the sigma*chi' pieces of the first two terms cancel, leaving
  // -chi' * Phi + chi * Psi.
  double total = 0.0;
  for (std::size_t n = 0; n < rule.nodes.size(); ++n)
    total += rule.weights[n] * (rule.psi_left[n] + psi_right(E, eta1, rule.nodes[n]));
  for (std::size_t n = 0; n < rule.outer_nodes.size(); ++n) {
    const double s = rule.outer_nodes[n];
    const double psi = rule.psi_left_outer[n] + psi_right(E, eta1, s);
    const double phi = rule.phi_left_outer[n] + phi_right(E, eta1, s);
    total += rule.outer_weights[n] * (-chi().derivative(s, 1) * phi + chi()(s) * psi);
  }
  total += eta1 * (rule.psi_left_eta + psi_right(E, eta1, eta1));
  return total / std::numbers::pi;
}

double HsRegularizer::F(double E, double eta1) const { return F_with(E, eta1, sigma_rule(eta1)); }

double HsRegularizer::trace_f(double E, double eta1) const {
  const Mollifier f = f_E(E, eta1);
  double total = 0.0;
  for (Eigen::Index a = 0; a < lambda_.size(); ++a) total += f(lambda_[a]);
  return total;
}

double HsRegularizer::lambda_tilde(int i) const {
  const RegularizationWindow win = window(i);
  const SigmaRule rule = sigma_rule(win.eta1);
  const Mollifier r = Mollifier::step_down(i - 1.0, i - 0.5);
  const double width = win.gamma_k - win.gamma_j;
  const int panels = std::max(1, static_cast<int>(std::ceil(width * quad_.outer_panels_per_eta / win.eta1)));
  std::vector<double> x, w;
  const double h = width / panels;
  for (int p = 0; p < panels; ++p)
    append_gauss<kEnergyNodes>(win.gamma_j + p * h, win.gamma_j + (p + 1) * h, x, w);
  double integral = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) integral += w[n] * r(F_with(x[n], win.eta1, rule));
  return win.gamma_j + integral;
}

double hs_regularized_eigenvalue(const Vector& lambda, int i, const RegParams& params) {
  return HsRegularizer(lambda, params.delta1, params.eps1).lambda_tilde(i);
}

double hs_regularized_eigenvalue(const Matrix& M, int i, const RegParams& params) {
  return hs_regularized_eigenvalue(eigvalsh(M), i, params);
}

double regularized_closeness_bound(int N, int i, double delta1, double eps1) {
  return std::pow(static_cast<double>(N), eps1 - delta1 - 2.0 / 3.0) * std::pow(hat(i, N), -1.0 / 3.0);
}

double regularized_projection_weights(const Vector& lambda, const Vector& weights, int ell,
                                      const RegParams& params, double center) {
  const int N = static_cast<int>(lambda.size());
  if (ell < 1 || ell > N) throw std::out_of_range("regularized_projection: ell outside [1, N]");
  const double scale = std::pow(static_cast<double>(N), -2.0 / 3.0) * std::pow(hat(ell, N), -1.0 / 3.0);
  const double eta = std::pow(static_cast<double>(N), -params.eps2) * scale;
  const double half = 0.5 * std::pow(static_cast<double>(N), -params.delta2) * scale;
  double total = 0.0;
  for (Eigen::Index p = 0; p < N; ++p) {
    const double mass = std::atan((center + half - lambda[p]) / eta) - std::atan((center - half - lambda[p]) / eta);
    total += weights[p] * mass;
  }
  return std::max(0.0, total / std::numbers::pi);
}

double regularized_projection(const Spectrum& S, const Vector& q, int ell, const RegParams& params,
                              std::optional<double> lambda_tilde_ell) {
  if (std::abs(q.norm() - 1.0) > 1e-12) throw std::invalid_argument("regularized_projection: q must be a unit vector");
  const double center = lambda_tilde_ell ? *lambda_tilde_ell : hs_regularized_eigenvalue(S.lambda, ell, params);
  Vector w = (S.U.transpose() * q).array().square();
  return regularized_projection_weights(S.lambda, w, ell, params, center);
}

Mollifier level_window(int N, int ell, double center, double delta2) {
  const double w = std::pow(static_cast<double>(N), -delta2 - 2.0 / 3.0) * std::pow(hat(ell, N), -1.0 / 3.0);
  return {center - 2.0 * w, center - 1.5 * w, center + 1.5 * w, center + 2.0 * w};
}

ObservableT observable_T(const Spectrum& S, const Vector& q, int ell, const RegParams& params) {
  params.validate();
  const int N = S.N();
  HsRegularizer reg(S.lambda, params.delta1, params.eps1);
  const double center = reg.lambda_tilde(ell);
  const Mollifier window = level_window(N, ell, center, params.delta2);
  const int reach = static_cast<int>(std::floor(std::pow(static_cast<double>(N), params.nu)));
  ObservableT out;
  for (int p = std::max(1, ell - reach); p <= std::min(N, ell + reach); ++p)
    out.F += window(p == ell ? center : reg.lambda_tilde(p));
  out.chi = Mollifier::step_down(params.k - 1.0, params.k)(out.F);
  out.v = regularized_projection(S, q, ell, params, center);
  out.T = N * out.chi * out.v;
  return out;
}

double free_energy(std::span<const double> w, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("free_energy: beta must be > 0");
  if (w.empty()) throw std::invalid_argument("free_energy: empty input");
  const double top = *std::max_element(w.begin(), w.end());
  double s = 0.0;
  for (double x : w) s += std::exp(beta * (x - top));
  return top + std::log(s) / beta;
}

double smoothed_threshold_S(std::span<const double> v, double eps, double beta, int N) {
  if (!(eps > 0.0)) throw std::invalid_argument("smoothed_threshold_S: eps must be > 0");
  const double logn = std::log(static_cast<double>(N));
  return Mollifier::step_up((2.0 + eps) * logn, (2.0 + 2.0 * eps) * logn)(free_energy(v, beta));
}

double finite_diff(const std::function<double(const Matrix&)>& fn, const Matrix& M, int a, int b,
                   int order, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff: h must be > 0");
  if (order < 1 || order > 3) throw std::invalid_argument("finite_diff: order must be 1, 2 or 3");
  if (a < 0 || b < 0 || a >= M.rows() || b >= M.cols()) throw std::out_of_range("finite_diff: index out of range");
  auto at = [&](double t) {
    Matrix X = M;
    X(a, b) += t;
    if (a != b) X(b, a) += t;
    return fn(X);
  };
  auto central = [&](double s) {
    switch (order) {
      case 1: return (at(s) - at(-s)) / (2.0 * s);
      case 2: return (at(s) - 2.0 * at(0.0) + at(-s)) / (s * s);
      default: return (at(2.0 * s) - 2.0 * at(s) + 2.0 * at(-s) - at(-2.0 * s)) / (2.0 * s * s * s);
    }
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

std::string regularization_audit_json(const Vector& lambda, const std::vector<int>& indices,
                                      const RegParams& params) {
  const int N = static_cast<int>(lambda.size());
  HsRegularizer reg(lambda, params.delta1, params.eps1);
  nlohmann::json rows = nlohmann::json::array();
  for (int i : indices) {
    const double lt = reg.lambda_tilde(i);
    const double bound = regularized_closeness_bound(N, i, params.delta1, params.eps1);
    rows.push_back({{"index", i},
                    {"lambda", lambda[i - 1]},
                    {"lambda_tilde", lt},
                    {"bound", bound},
                    {"pass", std::abs(lt - lambda[i - 1]) <= bound}});
  }
  nlohmann::json doc = {{"N", N},
                        {"delta1", params.delta1},
                        {"eps1", params.eps1},
                        {"indices", rows}};
  return doc.dump(2);
}

}  // namespace deloc
