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
#include <limits>

namespace deloc {

// Quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 on [0, 1] and its derivatives.
double smoothstep(double t, int derivative = 0);

// Smooth bump built from quintic smoothsteps:
//   0 outside (support_lo, support_hi), 1 on [plateau_lo, plateau_hi],
//   smoothstep transitions in between. Infinite endpoints give one-sided steps.
class Mollifier {
 public:
  static constexpr double inf = std::numeric_limits<double>::infinity();

  Mollifier(double support_lo, double plateau_lo, double plateau_hi, double support_hi);

  // 1 for x <= a, 0 for x >= b.
  static Mollifier step_down(double a, double b) { return {-inf, -inf, a, b}; }
  // 0 for x <= a, 1 for x >= b.
  static Mollifier step_up(double a, double b) { return {a, b, inf, inf}; }

  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;

  double support_lo() const { return support_lo_; }
  double plateau_lo() const { return plateau_lo_; }
  double plateau_hi() const { return plateau_hi_; }
  double support_hi() const { return support_hi_; }

 private:
  double support_lo_, plateau_lo_, plateau_hi_, support_hi_;
};

}  // namespace deloc
