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
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "deloc/dbm.hpp"
#include "deloc/linalg.hpp"
#include "deloc/rng.hpp"

namespace deloc {

// Particle configuration: sites are 1-based, multiplicities strictly positive.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::map<int, int> sites);

  static Configuration from_sites(const std::vector<int>& sorted_sites);

  int particles() const { return n_; }
  int operator[](int site) const;
  const std::map<int, int>& sites() const { return sites_; }
  // Sites in nondecreasing order, one entry per particle.
  std::vector<int> site_list() const;

  bool operator==(const Configuration& other) const { return sites_ == other.sites_; }

 private:
  std::map<int, int> sites_;
  int n_ = 0;
};

// Moves one particle from site i to site j; identity when i == j or xi_i == 0.
Configuration move_particle(const Configuration& xi, int i, int j);

// M(xi) = prod_k (2 xi_k - 1)!!
double normalization(const Configuration& xi);

// Colexicographic ranking of n-particle configurations on N sites.
class ConfigurationCodec {
 public:
  static constexpr std::uint64_t kMaxStates = 200000;

  ConfigurationCodec(int N, int n);

  int N() const { return N_; }
  int n() const { return n_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(const Configuration& xi) const;
  std::uint64_t rank_sites(const std::vector<int>& sorted_sites) const;
  Configuration unrank(std::uint64_t r) const;
  std::vector<int> unrank_sites(std::uint64_t r) const;

 private:
  int N_;
  int n_;
  std::uint64_t size_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

// The jump weight is 2 xi_k (1 + 2 xi_l) times c_kl. `dynamics` uses
// c_kl = 1 / (2 N (lambda_k - lambda_l)^2), which is the rate generated by the
// eigenvector flow in dbm.hpp; `displayed` uses c_kl = 1 / (N (lambda_k - lambda_l)^2).
enum class EmfNormalization { dynamics, displayed };

struct EmfState {
  std::shared_ptr<const ConfigurationCodec> codec;
  Vector f;

  int N() const { return codec->N(); }
  int n() const { return codec->n(); }
  double operator()(const Configuration& xi) const { return f[static_cast<Eigen::Index>(codec->rank(xi))]; }
};

// f0(xi) = prod_k <q, sqrt(N) u_k>^{2 xi_k} / M(xi) for the basis U.
EmfState initial_emf_state(const Matrix& U, const Vector& q, int n);

// Precomputed jump structure of the flow for fixed (N, n).
class EmfGenerator {
 public:
  explicit EmfGenerator(std::shared_ptr<const ConfigurationCodec> codec,
                        EmfNormalization norm = EmfNormalization::dynamics);

  const ConfigurationCodec& codec() const { return *codec_; }

  // Time derivative of f in the environment lambda.
  Vector apply(const Vector& f, const Vector& lambda) const;
  // Dense rate matrix (rows sum to zero); intended for small state spaces.
  Matrix rate_matrix(const Vector& lambda) const;

 private:
  Matrix rate_coefficients(const Vector& lambda) const;

  std::shared_ptr<const ConfigurationCodec> codec_;
  EmfNormalization norm_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> target_;
  std::vector<std::uint16_t> from_;
  std::vector<std::uint16_t> to_;
  std::vector<double> weight_;
};

Vector emf_generator(const EmfState& state, const Vector& lambda,
                     EmfNormalization norm = EmfNormalization::dynamics);

struct EmfIntegration {
  double substep_factor = 0.01;
  EmfNormalization normalization = EmfNormalization::dynamics;
  // Optional observer called after every RK4 substep with (t, f).
  std::function<void(double, const Vector&)> observer;
};

// RK4 integration over [0, t] with lambda frozen on each interval of the path.
EmfState integrate_emf(const EmfState& f0, const EigenvaluePath& path, double t,
                       const EmfIntegration& opts = {});

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long count = 0;
};

double moment_observable(const Matrix& U, const Vector& q, const Configuration& xi);

// Average over replicas of the additive matrix flow started at H0.
Estimate moment_mc_unconditional(const Matrix& H0, const Vector& q, const Configuration& xi,
                                 double t, int replicas, const CounterRng& rng);
// Same with a fresh initial matrix per replica.
Estimate moment_mc_unconditional(const std::function<Matrix(int)>& initial, const Vector& q,
                                 const Configuration& xi, double t, int replicas,
                                 const CounterRng& rng);

// Average over eigenvector-flow replicas driven by a frozen eigenvalue path.
// Returns one estimate per configuration, all from the same replicas.
std::vector<Estimate> moment_mc_conditional(const Matrix& U0, const EigenvaluePath& path,
                                            const Vector& q, const std::vector<Configuration>& xis,
                                            double t, int replicas, const CounterRng& rng,
                                            const SdeOptions& opts = {});

}  // namespace deloc
