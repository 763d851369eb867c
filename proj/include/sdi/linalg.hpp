// Copyright 2026 The sdi-selftest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex matrix kernel used by every other module.
//
// ComplexMatrix is a square matrix of std::complex<double> with a fixed
// dimension in [1, kMaxDim]. Arithmetic between mismatched dimensions throws
// DimensionError. HermitianOperator wraps a ComplexMatrix whose Hermiticity
// was checked (and round-off symmetrized) at construction.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "sdi/errors.hpp"

namespace sdi::linalg {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxDim = 32;
inline constexpr double kHermitianTol = 1e-12;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim);
  explicit ComplexMatrix(Eigen::MatrixXcd m);
  /// Row-major nested initializer, e.g. {{0, 1}, {1, 0}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim);
  /// |v><w|
  static ComplexMatrix outer(const CVector& v, const CVector& w);
  static ComplexMatrix projector(const CVector& v) { return outer(v, v); }

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  cplx operator()(int r, int c) const { return m_(r, c); }
  cplx& operator()(int r, int c) { return m_(r, c); }
  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

  ComplexMatrix adjoint() const { return ComplexMatrix(Eigen::MatrixXcd(m_.adjoint())); }
  cplx trace() const { return m_.trace(); }
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx a);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx(s); }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s); }

 private:
  Eigen::MatrixXcd m_;
};

/// max_ij |A_ij - B_ij|; dims must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Tr(A B) without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// Tr_B of an operator on C^da (x) C^db, returning an operator on C^da.
ComplexMatrix partial_trace_second(const ComplexMatrix& m, int da, int db);
/// Tr_A of an operator on C^da (x) C^db, returning an operator on C^db.
ComplexMatrix partial_trace_first(const ComplexMatrix& m, int da, int db);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Throws ValidityError when max |H_ij - conj(H_ji)| exceeds
  /// kHermitianTol * max(1, max|H|); otherwise stores (H + H^dagger)/2.
  explicit HermitianOperator(const ComplexMatrix& m);
  explicit HermitianOperator(const Eigen::MatrixXcd& m) : HermitianOperator(ComplexMatrix(m)) {}

  static HermitianOperator identity(int dim) {
    return HermitianOperator(ComplexMatrix::identity(dim));
  }
  static HermitianOperator zero(int dim) { return HermitianOperator(ComplexMatrix::zero(dim)); }

  int dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  ComplexMatrix m_;
};

/// Tr(A B) for Hermitian A, B (always real).
double trace_product(const HermitianOperator& a, const HermitianOperator& b);
/// Anticommutator {A, B}.
HermitianOperator anticommutator(const HermitianOperator& a, const HermitianOperator& b);
/// Conjugation U H U^dagger.
HermitianOperator conjugate(const ComplexMatrix& u, const HermitianOperator& h);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k belongs to values[k]
  CVector vector(int k) const { return vectors.eigen().col(k); }
};

/// Spectral decomposition. Closed form for dim 2, cyclic complex Jacobi
/// otherwise. Degenerate eigenvalues keep computational-basis order.
EigenDecomposition eig_hermitian(const HermitianOperator& h);
std::vector<double> eigenvalues(const HermitianOperator& h);
double lambda_max(const HermitianOperator& h);
double lambda_min(const HermitianOperator& h);

/// lambda_0 - lambda_1 = sqrt(2 Tr T^2 - (Tr T)^2) for a 2x2 Hermitian T.
double eigenvalue_gap_2x2(const HermitianOperator& t);

/// true iff lambda_min(H) >= -tol.
bool psd_check(const HermitianOperator& h, double tol);

/// Apply f to the spectrum: V f(D) V^dagger.
template <typename F>
ComplexMatrix spectral_map(const HermitianOperator& h, F&& f) {
  const auto ed = eig_hermitian(h);
  const int d = h.dim();
  Eigen::VectorXcd fd(d);
  for (int k = 0; k < d; ++k) fd(k) = f(ed.values[k]);
  const auto& v = ed.vectors.eigen();
  return ComplexMatrix(Eigen::MatrixXcd(v * fd.asDiagonal() * v.adjoint()));
}

}  // namespace sdi::linalg
