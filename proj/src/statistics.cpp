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

#include "deloc/statistics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace deloc {

double max_sup_norm_sq(const Spectrum& S) {
  return S.U.cwiseAbs2().maxCoeff();
}

double gumbel_statistic(const Spectrum& S) {
  const int N = S.N();
  if (N < 3) throw std::invalid_argument("gumbel_statistic: requires N >= 3");
  const double n = N;
  const double logn = std::log(n);
  const double xhat = n * max_sup_norm_sq(S) - 4.0 * logn + std::log(logn) + std::log(2.0 * std::numbers::pi);
  return 0.5 * xhat;
}

NamedValues deloc_statistics(const Spectrum& S, const Vector* q) {
  const int N = S.N();
  const double scale = N >= 2 ? std::sqrt(std::log(static_cast<double>(N)) / N)
                              : std::numeric_limits<double>::quiet_NaN();
  NamedValues out;
  auto emit = [&](const std::string& name, double v) {
    out.emplace_back(name, v);
    out.emplace_back(name + "_normalized", v / scale);
  };
  const Eigen::VectorXd col_sup = S.U.cwiseAbs().colwise().maxCoeff().transpose();
  emit("max_sup_norm", col_sup.maxCoeff());
  emit("sup_norm_bulk", col_sup[(N - 1) / 2]);
  emit("sup_norm_edge", col_sup[0]);
  if (q) {
    if (std::abs(q->norm() - 1.0) > 1e-12) throw std::invalid_argument("deloc_statistics: q must be a unit vector");
    emit("iso_sup", (S.U.transpose() * *q).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace deloc
