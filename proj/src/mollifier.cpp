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

#include "deloc/mollifier.hpp"

#include <cmath>
#include <stdexcept>

namespace deloc {

double smoothstep(double t, int d) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return d == 0 ? 1.0 : 0.0;
  switch (d) {
    case 0: return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    case 1: return 30.0 * t * t * (1.0 - t) * (1.0 - t);
    case 2: return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    case 3: return 360.0 * t * t - 360.0 * t + 60.0;
    case 4: return 720.0 * t - 360.0;
    case 5: return 720.0;
    default: return 0.0;
  }
}

Mollifier::Mollifier(double support_lo, double plateau_lo, double plateau_hi, double support_hi)
    : support_lo_(support_lo), plateau_lo_(plateau_lo), plateau_hi_(plateau_hi), support_hi_(support_hi) {
  if (!(support_lo <= plateau_lo && plateau_lo <= plateau_hi && plateau_hi <= support_hi))
    throw std::invalid_argument("Mollifier: endpoints must be ordered");
  if (std::isfinite(support_lo) && !(plateau_lo > support_lo))
    throw std::invalid_argument("Mollifier: rising transition has zero width");
  if (std::isfinite(support_hi) && !(support_hi > plateau_hi))
    throw std::invalid_argument("Mollifier: falling transition has zero width");
}

double Mollifier::derivative(double x, int order) const {
  if (order < 0 || order > 5) throw std::invalid_argument("Mollifier: derivative order must be in [0, 5]");
  if (x <= support_lo_ || x >= support_hi_) return 0.0;
  if (x < plateau_lo_) {
    double w = plateau_lo_ - support_lo_;
    return smoothstep((x - support_lo_) / w, order) / std::pow(w, order);
  }
  if (x > plateau_hi_) {
    double w = support_hi_ - plateau_hi_;
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * smoothstep((support_hi_ - x) / w, order) / std::pow(w, order);
  }
  return order == 0 ? 1.0 : 0.0;
}

}  // namespace deloc
