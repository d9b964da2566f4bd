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

#include <string>
#include <utility>
#include <vector>

#include "deloc/linalg.hpp"

namespace deloc {

using NamedValues = std::vector<std::pair<std::string, double>>;

// max_l ||u_l||_inf^2.
double max_sup_norm_sq(const Spectrum& S);

// xhat / 2 with xhat = N max_l ||u_l||_inf^2 - 4 log N + log log N + log(2 pi).
double gumbel_statistic(const Spectrum& S);

// Sup-norm and isotropic delocalization statistics of one sample. The
// normalized variants divide by sqrt(log N / N) and are NaN for N = 1.
NamedValues deloc_statistics(const Spectrum& S, const Vector* q = nullptr);

}  // namespace deloc
