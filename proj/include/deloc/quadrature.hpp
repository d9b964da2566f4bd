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

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace deloc::quad {

// Fixed Gauss-Legendre rule on [a, b].
template <unsigned Points, class F>
double gauss_legendre(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, Points>::integrate(f, a, b);
}

// Composite Gauss-Legendre rule over `panels` equal panels of [a, b]. The
// node set depends only on (a, b, panels), so the result is a smooth function
// of any parameters the integrand depends on.
template <unsigned Points, class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("composite_gauss: panels must be >= 1");
  double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * width;
    double hi = (p + 1 == panels) ? b : lo + width;
    total += gauss_legendre<Points>(f, lo, hi);
  }
  return total;
}

struct AdaptiveResult {
  double value;
  double error_estimate;
};

// Adaptive Gauss-Kronrod (15 points) with relative tolerance `tol`.
// Throws when the error estimate stays above the tolerance after refinement.
template <class F>
AdaptiveResult adaptive(F&& f, double a, double b, double tol = 1e-10, unsigned max_depth = 30,
                        double abs_floor = 1e-300) {
  double err = 0.0;
  double l1 = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth,
                                                                                tol, &err, &l1);
  if (!std::isfinite(value) || err > std::max(tol * l1 * 10.0, abs_floor)) {
    throw std::runtime_error("adaptive quadrature did not converge on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "], error estimate " +
                             std::to_string(err));
  }
  return {value, err};
}

}  // namespace deloc::quad
