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

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

#include "deloc/semicircle.hpp"

namespace deloc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

// Eigen-decomposition of a real symmetric matrix: ascending eigenvalues and
// orthonormal eigenvector columns. In each column the entry of largest
// magnitude (lowest index on ties) is positive.
struct Spectrum {
  Vector lambda;
  Matrix U;

  int N() const { return static_cast<int>(lambda.size()); }
  bool has_vectors() const { return U.size() > 0; }
};

struct HermSpectrum {
  Vector lambda;
  CMatrix U;

  int N() const { return static_cast<int>(lambda.size()); }
};

class EigenFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_exactly_symmetric(const Matrix& M);
bool is_hermitian(const CMatrix& M, double tol = 0.0);

// FNV-1a hash of the raw entries, reported in diagnostics.
std::uint64_t matrix_hash(const Matrix& M);
std::uint64_t matrix_hash(const CMatrix& M);

Spectrum eigh(const Matrix& M);
HermSpectrum eigh(const CMatrix& M);
Vector eigvalsh(const Matrix& M);
Vector eigvalsh(const CMatrix& M);

void apply_sign_convention(Matrix& U);
void apply_sign_convention(CMatrix& U);

// <q, (M - z)^{-1} q> evaluated through the spectral decomposition.
std::complex<double> resolvent_qform(const Spectrum& S, const Vector& q, const HalfPlanePoint& z);

// Same quantity from precomputed overlaps w_i = <q, u_i>^2.
std::complex<double> resolvent_qform_weights(const Vector& lambda, const Vector& w,
                                             const HalfPlanePoint& z);

// m_N(z) = N^{-1} sum_i 1 / (lambda_i - z).
std::complex<double> stieltjes(const Vector& lambda, const HalfPlanePoint& z);
inline std::complex<double> stieltjes(const Spectrum& S, const HalfPlanePoint& z) {
  return stieltjes(S.lambda, z);
}

}  // namespace deloc
