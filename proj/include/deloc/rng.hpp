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

#include <array>
#include <cstdint>
#include <utility>

namespace deloc {

// Philox4x32-10 block function (Salmon, Moraes, Dror, Shaw 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key);

// SplitMix64 finalizer, used to derive child stream identifiers.
std::uint64_t splitmix64(std::uint64_t x);

// Combines a parent stream with a tag into a new, statistically independent
// stream identifier.
std::uint64_t derive_stream(std::uint64_t stream, std::uint64_t tag);

// Stateless counter-based generator. Every draw is a pure function of
// (seed, stream, index), so replicas can be generated in any order and on
// any worker without changing the numbers they see.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  CounterRng child(std::uint64_t tag) const { return {seed_, derive_stream(stream_, tag)}; }

  std::array<std::uint32_t, 4> block(std::uint64_t index) const;

  // Two uniforms in the open interval (0, 1), 53-bit resolution.
  std::pair<double, double> uniform_pair(std::uint64_t index) const;
  double uniform(std::uint64_t index) const { return uniform_pair(index).first; }

  // Two independent standard normals by Box-Muller.
  std::pair<double, double> normal_pair(std::uint64_t index) const;
  double normal(std::uint64_t index) const { return normal_pair(index).first; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// Sequential view over one counter stream. Satisfies
// UniformRandomBitGenerator so it can feed <random> distributions.
class StreamEngine {
 public:
  using result_type = std::uint64_t;

  explicit StreamEngine(CounterRng rng) : rng_(rng) {}
  StreamEngine(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();
  double uniform();
  double normal();

 private:
  CounterRng rng_;
  std::uint64_t next_block_ = 0;
  std::array<std::uint32_t, 4> words_{};
  int word_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace deloc
