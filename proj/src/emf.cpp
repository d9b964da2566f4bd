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

#include "deloc/emf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "deloc/ensembles.hpp"

namespace deloc {

Configuration::Configuration(std::map<int, int> sites) {
  for (auto [site, mult] : sites) {
    if (site < 1) throw std::invalid_argument("Configuration: sites are 1-based");
    if (mult < 0) throw std::invalid_argument("Configuration: negative multiplicity");
    if (mult > 0) {
      sites_[site] = mult;
      n_ += mult;
    }
  }
}

Configuration Configuration::from_sites(const std::vector<int>& sorted_sites) {
  std::map<int, int> m;
  for (int s : sorted_sites) ++m[s];
  return Configuration(std::move(m));
}

int Configuration::operator[](int site) const {
  auto it = sites_.find(site);
  return it == sites_.end() ? 0 : it->second;
}

std::vector<int> Configuration::site_list() const {
  std::vector<int> out;
  out.reserve(n_);
  for (auto [site, mult] : sites_)
    for (int c = 0; c < mult; ++c) out.push_back(site);
  return out;
}

Configuration move_particle(const Configuration& xi, int i, int j) {
  if (i == j || xi[i] == 0) return xi;
  std::map<int, int> m = xi.sites();
  if (--m[i] == 0) m.erase(i);
  ++m[j];
  return Configuration(std::move(m));
}

double normalization(const Configuration& xi) {
  double m = 1.0;
  for (auto [site, mult] : xi.sites())
    for (int k = 2 * mult - 1; k > 1; k -= 2) m *= k;
  return m;
}

ConfigurationCodec::ConfigurationCodec(int N, int n) : N_(N), n_(n) {
  if (N < 1 || n < 0) throw std::invalid_argument("ConfigurationCodec: need N >= 1 and n >= 0");
  const int top = N + n;
  binom_.assign(top + 1, std::vector<std::uint64_t>(n + 2, 0));
  for (int a = 0; a <= top; ++a) {
    binom_[a][0] = 1;
    for (int b = 1; b <= std::min(a, n + 1); ++b) {
      std::uint64_t v = binom_[a - 1][b - 1] + (b <= a - 1 ? binom_[a - 1][b] : 0);
      binom_[a][b] = std::min<std::uint64_t>(v, kMaxStates * 1000);
    }
  }
  size_ = binom_[N + n - 1][n];
  if (size_ > kMaxStates) {
    throw std::invalid_argument("ConfigurationCodec: C(N+n-1, n) = " + std::to_string(size_) +
                                " states for N = " + std::to_string(N) + ", n = " +
                                std::to_string(n) + " exceeds the cap of " +
                                std::to_string(kMaxStates));
  }
}

std::uint64_t ConfigurationCodec::rank_sites(const std::vector<int>& s) const {
  if (static_cast<int>(s.size()) != n_) throw std::invalid_argument("ConfigurationCodec: wrong particle count");
  std::uint64_t r = 0;
  for (int i = 0; i < n_; ++i) {
    if (s[i] < 1 || s[i] > N_) throw std::out_of_range("ConfigurationCodec: site out of range");
    r += binom_[(s[i] - 1) + i][i + 1];
  }
  return r;
}

std::uint64_t ConfigurationCodec::rank(const Configuration& xi) const { return rank_sites(xi.site_list()); }

std::vector<int> ConfigurationCodec::unrank_sites(std::uint64_t r) const {
  if (r >= size_) throw std::out_of_range("ConfigurationCodec: rank out of range");
  std::vector<int> s(n_);
  int b = N_ + n_ - 1;
  for (int i = n_ - 1; i >= 0; --i) {
    while (binom_[b][i + 1] > r) --b;
    r -= binom_[b][i + 1];
    s[i] = b - i + 1;
    --b;
  }
  return s;
}

Configuration ConfigurationCodec::unrank(std::uint64_t r) const {
  return Configuration::from_sites(unrank_sites(r));
}

double moment_observable(const Matrix& U, const Vector& q, const Configuration& xi) {
  const double N = static_cast<double>(U.rows());
  double value = 1.0;
  for (auto [site, mult] : xi.sites()) {
    double p = N * std::pow(q.dot(U.col(site - 1)), 2);
    value *= std::pow(p, mult);
  }
  return value / normalization(xi);
}

EmfState initial_emf_state(const Matrix& U, const Vector& q, int n) {
  auto codec = std::make_shared<const ConfigurationCodec>(static_cast<int>(U.rows()), n);
  const double N = static_cast<double>(U.rows());
  Vector p = N * (U.transpose() * q).array().square();
  EmfState st{codec, Vector(static_cast<Eigen::Index>(codec->size()))};
  for (std::uint64_t r = 0; r < codec->size(); ++r) {
    Configuration xi = codec->unrank(r);
    double v = 1.0;
    for (auto [site, mult] : xi.sites()) v *= std::pow(p[site - 1], mult);
    st.f[static_cast<Eigen::Index>(r)] = v / normalization(xi);
  }
  return st;
}

EmfGenerator::EmfGenerator(std::shared_ptr<const ConfigurationCodec> codec, EmfNormalization norm)
    : codec_(std::move(codec)), norm_(norm) {
  const int N = codec_->N();
  const std::uint64_t S = codec_->size();
  offsets_.reserve(S + 1);
  offsets_.push_back(0);
  for (std::uint64_t r = 0; r < S; ++r) {
    Configuration xi = codec_->unrank(r);
    for (auto [k, xk] : xi.sites()) {
      for (int l = 1; l <= N; ++l) {
        if (l == k) continue;
        target_.push_back(static_cast<std::uint32_t>(codec_->rank(move_particle(xi, k, l))));
        from_.push_back(static_cast<std::uint16_t>(k - 1));
        to_.push_back(static_cast<std::uint16_t>(l - 1));
        weight_.push_back(2.0 * xk * (1.0 + 2.0 * xi[l]));
      }
    }
    offsets_.push_back(target_.size());
  }
}

Matrix EmfGenerator::rate_coefficients(const Vector& lambda) const {
  const int N = codec_->N();
  if (lambda.size() != N) throw std::invalid_argument("emf_generator: eigenvalue count mismatch");
  const double scale = norm_ == EmfNormalization::dynamics ? 0.5 / N : 1.0 / N;
  Matrix c = Matrix::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      if (l == k) continue;
      double d = lambda[k] - lambda[l];
      if (d == 0.0) {
        throw std::invalid_argument("emf_generator: coincident eigenvalues at indices " +
                                    std::to_string(k + 1) + " and " + std::to_string(l + 1));
      }
      c(k, l) = scale / (d * d);
    }
  }
  return c;
}

Vector EmfGenerator::apply(const Vector& f, const Vector& lambda) const {
  const Matrix c = rate_coefficients(lambda);
  const std::uint64_t S = codec_->size();
  Vector out(static_cast<Eigen::Index>(S));
  for (std::uint64_t r = 0; r < S; ++r) {
    const double fr = f[static_cast<Eigen::Index>(r)];
    double acc = 0.0;
    for (std::uint64_t e = offsets_[r]; e < offsets_[r + 1]; ++e)
      acc += weight_[e] * c(from_[e], to_[e]) * (f[target_[e]] - fr);
    out[static_cast<Eigen::Index>(r)] = acc;
  }
  return out;
}

Matrix EmfGenerator::rate_matrix(const Vector& lambda) const {
  const Matrix c = rate_coefficients(lambda);
  const auto S = static_cast<Eigen::Index>(codec_->size());
  Matrix L = Matrix::Zero(S, S);
  for (Eigen::Index r = 0; r < S; ++r) {
    for (std::uint64_t e = offsets_[r]; e < offsets_[r + 1]; ++e) {
      double rate = weight_[e] * c(from_[e], to_[e]);
      L(r, target_[e]) += rate;
      L(r, r) -= rate;
    }
  }
  return L;
}

Vector emf_generator(const EmfState& state, const Vector& lambda, EmfNormalization norm) {
  return EmfGenerator(state.codec, norm).apply(state.f, lambda);
}

EmfState integrate_emf(const EmfState& f0, const EigenvaluePath& path, double t,
                       const EmfIntegration& opts) {
  if (t < 0.0) throw std::invalid_argument("integrate_emf: t must be >= 0");
  if (t == 0.0) return f0;
  if (path.times.empty() || path.times.front() > 0.0 || path.times.back() < t * (1 - 1e-12))
    throw std::invalid_argument("integrate_emf: eigenvalue path does not cover [0, t]");
  if (!f0.f.allFinite()) throw std::invalid_argument("integrate_emf: initial state is not finite");

  const EmfGenerator gen(f0.codec, opts.normalization);
  const int N = f0.N();
  Vector f = f0.f;
  double now = 0.0;
  for (std::size_t m = 0; m + 1 < path.times.size() && now < t; ++m) {
    const Vector& lam = path.lambda[m];
    const double end = std::min(path.times[m + 1], t);
    const double len = end - now;
    if (len <= 0.0) continue;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < lam.size(); ++i) gap = std::min(gap, lam[i] - lam[i - 1]);
    const double cap = opts.substep_factor * N * gap * gap;
    const long long n_sub = std::max<long long>(1, static_cast<long long>(std::ceil(len / cap)));
    const double h = len / static_cast<double>(n_sub);
    for (long long s = 0; s < n_sub; ++s) {
      Vector k1 = gen.apply(f, lam);
      Vector k2 = gen.apply(f + 0.5 * h * k1, lam);
      Vector k3 = gen.apply(f + 0.5 * h * k2, lam);
      Vector k4 = gen.apply(f + h * k3, lam);
      f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      now += h;
      if (opts.observer) opts.observer(now, f);
    }
    now = end;
  }
  if (!f.allFinite()) throw std::runtime_error("integrate_emf: state became non-finite");
  return {f0.codec, f};
}

namespace {

Estimate summarize(double sum, double sum_sq, long long n) {
  Estimate e;
  e.count = n;
  e.mean = sum / n;
  double var = n > 1 ? std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1)) : 0.0;
  e.std_error = std::sqrt(var / n);
  return e;
}

void check_unit(const Vector& q) {
  if (std::abs(q.norm() - 1.0) > 1e-12) throw std::invalid_argument("moment_mc: q must be a unit vector");
}

}  // namespace

Estimate moment_mc_unconditional(const std::function<Matrix(int)>& initial, const Vector& q,
                                 const Configuration& xi, double t, int replicas,
                                 const CounterRng& rng) {
  check_unit(q);
  if (replicas < 2) throw std::invalid_argument("moment_mc: replicas must be >= 2");
  if (xi.particles() == 0) return {1.0, 0.0, replicas};
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < replicas; ++r) {
    Matrix H = initial(r);
    if (t > 0.0) H = evolve_final(H, {t, 1, DbmVariant::additive}, rng.child(static_cast<std::uint64_t>(r)));
    double v = moment_observable(eigh(H).U, q, xi);
    sum += v;
    sum_sq += v * v;
  }
  return summarize(sum, sum_sq, replicas);
}

Estimate moment_mc_unconditional(const Matrix& H0, const Vector& q, const Configuration& xi,
                                 double t, int replicas, const CounterRng& rng) {
  return moment_mc_unconditional([&](int) { return H0; }, q, xi, t, replicas, rng);
}

std::vector<Estimate> moment_mc_conditional(const Matrix& U0, const EigenvaluePath& path,
                                            const Vector& q, const std::vector<Configuration>& xis,
                                            double t, int replicas, const CounterRng& rng,
                                            const SdeOptions& opts) {
  check_unit(q);
  if (replicas < 2) throw std::invalid_argument("moment_mc: replicas must be >= 2");
  EigenvaluePath trimmed;
  for (std::size_t m = 0; m < path.times.size() && path.times[m] < t; ++m) {
    trimmed.times.push_back(path.times[m]);
    trimmed.lambda.push_back(path.lambda[m]);
  }
  if (trimmed.times.empty() || path.times.back() < t * (1 - 1e-12))
    throw std::invalid_argument("moment_mc: eigenvalue path does not cover [0, t]");
  trimmed.times.push_back(t);
  trimmed.lambda.push_back(trimmed.lambda.back());

  std::vector<double> sum(xis.size(), 0.0), sum_sq(xis.size(), 0.0);
  SdeOptions o = opts;
  o.record_path = false;
  for (int r = 0; r < replicas; ++r) {
    EigenvectorPath p = eigenvector_sde(U0, trimmed, rng.child(static_cast<std::uint64_t>(r)), o);
    const Matrix& U = p.bases.back();
    for (std::size_t c = 0; c < xis.size(); ++c) {
      double v = moment_observable(U, q, xis[c]);
      sum[c] += v;
      sum_sq[c] += v * v;
    }
  }
  std::vector<Estimate> out;
  for (std::size_t c = 0; c < xis.size(); ++c) out.push_back(summarize(sum[c], sum_sq[c], replicas));
  return out;
}

}  // namespace deloc
