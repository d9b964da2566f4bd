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

#include "deloc/levelrep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "deloc/quadrature.hpp"

namespace deloc {

double kappa(double E, int N) {
  return std::max(std::pow(static_cast<double>(N), -2.0 / 3.0), std::min(std::abs(E + 2.0), std::abs(E - 2.0)));
}

RepulsionInterval RepulsionInterval::make(double E, int N, double delta, double a) {
  if (N < 1 || !(a > 0.0)) throw std::invalid_argument("RepulsionInterval: need N >= 1 and a > 0");
  RepulsionInterval I;
  I.center = E;
  I.delta = delta;
  I.a = a;
  I.N = N;
  I.half_width = a * std::pow(static_cast<double>(N), -delta) / (N * std::sqrt(kappa(E, N)));
  return I;
}

int count_in_interval(const Vector& sorted, double lo, double hi) {
  if (hi < lo) return 0;
  const double* begin = sorted.data();
  const double* end = begin + sorted.size();
  return static_cast<int>(std::upper_bound(begin, end, hi) - std::lower_bound(begin, end, lo));
}

namespace {

constexpr int kMaxKernelOrder = 500;

void check_order(int N) {
  if (N < 1 || N > kMaxKernelOrder)
    throw std::invalid_argument("GUE kernel: N = " + std::to_string(N) +
                                " outside the recurrence budget [1, 500]");
}

// psi_0..psi_{N-1} at x by the normalized three-term recurrence.
void hermite_functions(int N, double x, double* psi) {
  psi[0] = std::exp(-0.25 * x * x) / std::pow(2.0 * std::numbers::pi, 0.25);
  if (N > 1) psi[1] = x * psi[0];
  for (int k = 1; k + 1 < N; ++k)
    psi[k + 1] = x * psi[k] / std::sqrt(k + 1.0) - std::sqrt(k / (k + 1.0)) * psi[k - 1];
}

}  // namespace

double gue_density(int N, double lambda) {
  check_order(N);
  std::vector<double> psi(N);
  const double s = std::sqrt(static_cast<double>(N));
  hermite_functions(N, s * lambda, psi.data());
  double total = 0.0;
  for (double p : psi) total += p * p;
  if (!std::isfinite(total)) throw std::runtime_error("GUE kernel: recurrence overflow");
  return s * total;
}

double gue_expected_count(int N, double lo, double hi) {
  check_order(N);
  if (!(hi > lo)) return 0.0;
  // Split into panels of about one mean spacing so the adaptive rule resolves
  // every oscillation of the finite-N density.
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * N)));
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    total += quad::adaptive([N](double x) { return gue_density(N, x); }, lo + p * h,
                            p + 1 == panels ? hi : lo + (p + 1) * h, 1e-10, 20, 1e-14)
                 .value;
  }
  return total;
}

double gue_second_factorial_moment(int N, double lo, double hi) {
  check_order(N);
  if (!(hi > lo)) return 0.0;
  // Gram matrix G_kl = int_I sqrt(N) psi_k psi_l; then E[n(n-1)] = (tr G)^2 - |G|_F^2.
  const double s = std::sqrt(static_cast<double>(N));
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * N * 2)));
  Matrix G = Matrix::Zero(N, N);
  std::vector<double> psi(N);
  using rule = boost::math::quadrature::gauss<double, 20>;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = lo + (p + 0.5) * h;
    for (std::size_t n = 0; n < rule::abscissa().size(); ++n) {
      for (int sign : {-1, 1}) {
        const double x = c + sign * 0.5 * h * rule::abscissa()[n];
        hermite_functions(N, s * x, psi.data());
        Eigen::Map<const Vector> v(psi.data(), N);
        G.noalias() += (0.5 * h * rule::weights()[n] * s) * v * v.transpose();
      }
    }
  }
  const double trace = G.trace();
  return trace * trace - G.squaredNorm();
}

ChernoffBound chernoff_tail_bound(int k, double expected, std::optional<double> lambda) {
  if (k < 1) throw std::invalid_argument("chernoff_tail_bound: k must be >= 1");
  if (!(expected >= 0.0)) throw std::invalid_argument("chernoff_tail_bound: expected count must be >= 0");
  ChernoffBound b;
  if (lambda) {
    if (!(*lambda > 0.0)) throw std::invalid_argument("chernoff_tail_bound: lambda must be > 0");
    b.lambda = *lambda;
    b.value = std::min(1.0, std::exp(-*lambda * k + std::expm1(*lambda) * expected));
    b.vacuous = b.value >= 1.0;
    return b;
  }
  if (expected == 0.0) {
    b.value = 0.0;
    b.lambda = std::numeric_limits<double>::infinity();
    return b;
  }
  if (k <= expected) {
    b.value = 1.0;
    b.vacuous = true;
    return b;
  }
  b.lambda = std::log(k / expected);
  b.value = std::exp(k * (1.0 + std::log(expected / k)) - expected);
  return b;
}

Vector decimate_goe_pair(int N, const CounterRng& rng) {
  if (N < 1) throw std::invalid_argument("decimate_goe_pair: N must be >= 1");
  const double n = static_cast<double>(N);
  Vector a = eigvalsh(sample_goe(N, rng.child(0), 1.0));
  Vector b = eigvalsh(sample_goe(N + 1, rng.child(1), (n + 1.0) / n));
  std::vector<double> merged(a.data(), a.data() + a.size());
  merged.insert(merged.end(), b.data(), b.data() + b.size());
  std::sort(merged.begin(), merged.end());
  Vector out(N);
  for (int m = 0; m < N; ++m) out[m] = merged[2 * m + 1];
  return out;
}

double Proportion::std_error() const {
  return n > 0 ? std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n)) : 0.0;
}

Proportion wilson(long long hits, long long n, double z) {
  Proportion p;
  p.hits = hits;
  p.n = n;
  if (n == 0) {
    p.ci_hi = 1.0;
    return p;
  }
  const double nn = static_cast<double>(n);
  p.p_hat = hits / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p.p_hat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p.p_hat * (1.0 - p.p_hat) / nn + z2 / (4.0 * nn * nn)) / denom;
  p.ci_lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  p.ci_hi = hits == n ? 1.0 : std::min(1.0, center + half);
  return p;
}

void write_tail_csv(std::ostream& out, const TailEstimate& t) {
  out << "k,p_hat,ci_lo,ci_hi,n\n";
  out.precision(17);
  for (std::size_t i = 0; i < t.k.size(); ++i)
    out << t.k[i] << "," << t.tail[i].p_hat << "," << t.tail[i].ci_lo << "," << t.tail[i].ci_hi << ","
        << t.tail[i].n << "\n";
}

namespace {

Vector sample_eigenvalues(const EnsembleSpec& spec, std::uint64_t stream) {
  if (spec.symmetry == Symmetry::complex) return eigvalsh(sample_hermitian(spec, stream));
  return eigvalsh(sample_symmetric(spec, stream));
}

}  // namespace

TailEstimate gap_tail_mc(const EnsembleSpec& spec, const TailQuery& query, int replicas, std::uint64_t first_stream) {
  if (replicas < 100) throw std::invalid_argument("gap_tail_mc: replicas must be >= 100");
  if (query.k_max < 1) throw std::invalid_argument("gap_tail_mc: k_max must be >= 1");
  const int N = spec.N();
  if (query.mode == TailMode::index && (query.index < 1 || query.index > N))
    throw std::out_of_range("gap_tail_mc: index outside [1, N]");
  std::vector<long long> hits(query.k_max, 0);
  const double index_half =
      query.mode == TailMode::index
          ? std::pow(static_cast<double>(N), -query.delta - 2.0 / 3.0) /
                std::cbrt(static_cast<double>(std::min(query.index, N + 1 - query.index)))
          : 0.0;
  const RepulsionInterval fixed = RepulsionInterval::make(query.E, N, query.delta, query.a);
  for (int r = 0; r < replicas; ++r) {
    const Vector lam = sample_eigenvalues(spec, first_stream + static_cast<std::uint64_t>(r));
    int count;
    if (query.mode == TailMode::energy) {
      count = count_in_interval(lam, fixed.lo(), fixed.hi());
    } else {
      const double c = lam[query.index - 1];
      count = count_in_interval(lam, c - index_half, c + index_half);
    }
    for (int k = 1; k <= query.k_max; ++k)
      if (count >= k) ++hits[k - 1];
  }
  TailEstimate t;
  t.replicas = replicas;
  for (int k = 1; k <= query.k_max; ++k) {
    t.k.push_back(k);
    t.tail.push_back(wilson(hits[k - 1], replicas));
  }
  return t;
}

Proportion small_gap_mc(const EnsembleSpec& spec, int index, double delta, int replicas, std::uint64_t first_stream) {
  const int N = spec.N();
  if (index < 1 || index >= N) throw std::out_of_range("small_gap_mc: index must be in [1, N-1]");
  const double threshold = std::pow(static_cast<double>(N), -delta - 2.0 / 3.0) /
                           std::cbrt(static_cast<double>(std::min(index, N + 1 - index)));
  long long hits = 0;
  for (int r = 0; r < replicas; ++r) {
    const Vector lam = sample_eigenvalues(spec, first_stream + static_cast<std::uint64_t>(r));
    if (lam[index] - lam[index - 1] < threshold) ++hits;
  }
  return wilson(hits, replicas);
}

}  // namespace deloc
