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
#include <optional>
#include <vector>

#include "deloc/ensembles.hpp"
#include "deloc/linalg.hpp"
#include "deloc/rng.hpp"

namespace deloc {

// kappa(E) = max(N^{-2/3}, min(|E + 2|, |E - 2|)).
double kappa(double E, int N);

struct RepulsionInterval {
  double center = 0.0;
  double half_width = 0.0;
  double delta = 0.0;
  double a = 0.0;
  int N = 0;

  // half_width = a N^{-delta} / (N sqrt(kappa(E))).
  static RepulsionInterval make(double E, int N, double delta, double a);

  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
};

// Number of entries of the sorted vector inside [lo, hi].
int count_in_interval(const Vector& sorted, double lo, double hi);

// Eigenvalue density of GUE_N at lambda: sqrt(N) sum_{k<N} psi_k(sqrt(N) lambda)^2.
double gue_density(int N, double lambda);
// E[#eigenvalues in [lo, hi]] by adaptive quadrature of the density.
double gue_expected_count(int N, double lo, double hi);
// E[n (n - 1)] for n = #eigenvalues in [lo, hi].
double gue_second_factorial_moment(int N, double lo, double hi);

struct ChernoffBound {
  double value = 1.0;
  double lambda = 0.0;
  bool vacuous = false;
};

// exp(-lambda k + (e^lambda - 1) expected), minimized over lambda > 0 unless given.
ChernoffBound chernoff_tail_bound(int k, double expected, std::optional<double> lambda = std::nullopt);

// Positions 2, 4, ..., 2N of the merged spectra of independent GOE_N and
// GOE_{N+1}, both normalized with off-diagonal variance 1/N.
Vector decimate_goe_pair(int N, const CounterRng& rng);

struct Proportion {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long long n = 0;
  long long hits = 0;

  double std_error() const;
};

Proportion wilson(long long hits, long long n, double z = 1.959963984540054);

struct TailEstimate {
  std::vector<int> k;
  std::vector<Proportion> tail;  // P(count >= k)
  long long replicas = 0;
};

void write_tail_csv(std::ostream& out, const TailEstimate& t);

enum class TailMode { energy, index };

struct TailQuery {
  TailMode mode = TailMode::energy;
  double E = 0.0;  // energy mode
  int index = 0;   // index mode, 1-based
  double delta = 0.1;
  double a = 1.0;
  int k_max = 3;
};

// Overcrowding tail P(#eigenvalues in the interval >= k), k = 1..k_max.
// In index mode the interval is centered at the realized eigenvalue with
// half-width N^{-delta} / (N^{2/3} ihat^{1/3}).
TailEstimate gap_tail_mc(const EnsembleSpec& spec, const TailQuery& query, int replicas,
                         std::uint64_t first_stream = 0);

// P(lambda_{i+1} - lambda_i < N^{-delta} / (N^{2/3} ihat^{1/3})).
Proportion small_gap_mc(const EnsembleSpec& spec, int index, double delta, int replicas,
                        std::uint64_t first_stream = 0);

}  // namespace deloc
