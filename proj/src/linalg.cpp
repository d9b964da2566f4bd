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

#include "deloc/linalg.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace deloc {

namespace {

template <class Scalar>
std::uint64_t fnv1a(const Scalar* data, Eigen::Index count) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < static_cast<std::size_t>(count) * sizeof(Scalar); ++k) {
    h ^= bytes[k];
    h *= 0x100000001b3ull;
  }
  return h;
}

template <class Mat>
void check_finite(const Mat& M) {
  if (!M.allFinite()) {
    std::ostringstream msg;
    msg << "eigh: matrix has non-finite entries (hash " << std::hex << matrix_hash(M) << ")";
    throw EigenFailure(msg.str());
  }
}

template <class Mat>
[[noreturn]] void fail_convergence(const Mat& M) {
  std::ostringstream msg;
  msg << "eigh: QR iteration did not converge for " << M.rows() << "x" << M.cols()
      << " matrix (hash " << std::hex << matrix_hash(M) << ")";
  throw EigenFailure(msg.str());
}

template <class Mat>
Eigen::Index pivot_row(const Mat& U, Eigen::Index col) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index r = 0; r < U.rows(); ++r) {
    double a = std::abs(U(r, col));
    if (a > best_abs) {
      best_abs = a;
      best = r;
    }
  }
  return best;
}

}  // namespace

bool is_exactly_symmetric(const Matrix& M) {
  if (M.rows() != M.cols()) return false;
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = j + 1; i < M.rows(); ++i)
      if (M(i, j) != M(j, i)) return false;
  return true;
}

bool is_hermitian(const CMatrix& M, double tol) {
  if (M.rows() != M.cols()) return false;
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = j; i < M.rows(); ++i)
      if (std::abs(M(i, j) - std::conj(M(j, i))) > tol) return false;
  return true;
}

std::uint64_t matrix_hash(const Matrix& M) { return fnv1a(M.data(), M.size()); }
std::uint64_t matrix_hash(const CMatrix& M) { return fnv1a(M.data(), M.size()); }

void apply_sign_convention(Matrix& U) {
  for (Eigen::Index c = 0; c < U.cols(); ++c) {
    if (U(pivot_row(U, c), c) < 0.0) U.col(c) *= -1.0;
  }
}

// For complex vectors the phase is fixed by making the pivot entry real positive.
void apply_sign_convention(CMatrix& U) {
  for (Eigen::Index c = 0; c < U.cols(); ++c) {
    std::complex<double> p = U(pivot_row(U, c), c);
    if (std::abs(p) > 0.0) U.col(c) *= std::conj(p) / std::abs(p);
  }
}

Spectrum eigh(const Matrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("eigh: matrix must be square");
  check_finite(M);
  if (!is_exactly_symmetric(M)) throw std::invalid_argument("eigh: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(M, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail_convergence(M);
  Spectrum S{solver.eigenvalues(), solver.eigenvectors()};
  apply_sign_convention(S.U);
  return S;
}

HermSpectrum eigh(const CMatrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("eigh: matrix must be square");
  check_finite(M);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(M, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail_convergence(M);
  HermSpectrum S{solver.eigenvalues(), solver.eigenvectors()};
  apply_sign_convention(S.U);
  return S;
}

Vector eigvalsh(const Matrix& M) {
  check_finite(M);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(M, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail_convergence(M);
  return solver.eigenvalues();
}

Vector eigvalsh(const CMatrix& M) {
  check_finite(M);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(M, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail_convergence(M);
  return solver.eigenvalues();
}

std::complex<double> resolvent_qform_weights(const Vector& lambda, const Vector& w,
                                             const HalfPlanePoint& z) {
  const double E = z.E(), eta = z.eta();
  double re = 0.0, im = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    double d = lambda[i] - E;
    double den = d * d + eta * eta;
    re += w[i] * d / den;
    im += w[i] * eta / den;
  }
  return {re, im};
}

std::complex<double> resolvent_qform(const Spectrum& S, const Vector& q, const HalfPlanePoint& z) {
  if (!S.has_vectors()) throw std::invalid_argument("resolvent_qform: spectrum has no eigenvectors");
  if (q.size() != S.N()) throw std::invalid_argument("resolvent_qform: dimension mismatch");
  if (std::abs(q.norm() - 1.0) > 1e-12) throw std::invalid_argument("resolvent_qform: q must be a unit vector");
  Vector w = (S.U.transpose() * q).array().square();
  return resolvent_qform_weights(S.lambda, w, z);
}

std::complex<double> stieltjes(const Vector& lambda, const HalfPlanePoint& z) {
  Vector ones = Vector::Ones(lambda.size());
  return resolvent_qform_weights(lambda, ones, z) / static_cast<double>(lambda.size());
}

}  // namespace deloc
