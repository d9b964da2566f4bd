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

// Independent reference implementations used as test oracles.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                               int depth = 50) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
  double glo = g(lo);
  for (int it = 0; it < iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Number of eigenvalues below x from the signs of the leading principal minors
// of M - xI (Sylvester inertia via the LDL^T pivots without pivoting).
inline int count_below(const Eigen::MatrixXd& M, double x) {
  const int n = static_cast<int>(M.rows());
  Eigen::MatrixXd A = M - x * Eigen::MatrixXd::Identity(n, n);
  int negatives = 0;
  for (int k = 0; k < n; ++k) {
    const double p = A(k, k);
    if (p < 0) ++negatives;
    for (int i = k + 1; i < n; ++i) {
      const double f = A(i, k) / p;
      for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
  return negatives;
}

// Eigenvalues by bisection on the inertia count.
inline std::vector<double> eigenvalues_by_bisection(const Eigen::MatrixXd& M, double lo, double hi) {
  const int n = static_cast<int>(M.rows());
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(M, mid) > i) b = mid;
      else a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

// Sinkhorn balancing of a positive symmetric matrix into a doubly stochastic one.
inline Eigen::MatrixXd sinkhorn(Eigen::MatrixXd A, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd r = A.rowwise().sum();
    Eigen::VectorXd d = r.array().rsqrt();
    A = d.asDiagonal() * A * d.asDiagonal();
  }
  return A;
}

}  // namespace oracle
