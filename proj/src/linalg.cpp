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

#include "sdi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sdi::linalg {

namespace {

constexpr double kJacobiOffTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw DimensionError("matrix dimension " + std::to_string(dim) + " outside [1, " +
                         std::to_string(kMaxDim) + "]");
  }
}

void check_same(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()));
  }
}

EigenDecomposition eig_2x2(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const cplx b = h(0, 1);
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double radius = std::hypot(half, std::abs(b));

  EigenDecomposition out;
  out.values = {mean + radius, mean - radius};
  Eigen::MatrixXcd v(2, 2);
  if (std::abs(b) <= 1e-300 * std::max(1.0, radius) || radius == 0.0) {
    if (a >= d) {
      v << 1, 0, 0, 1;
    } else {
      v << 0, 1, 1, 0;
    }
  } else {
    // Top eigenvector from whichever of the two null-space candidates of
    // (H - lambda_+) is better conditioned.
    const double lp = out.values[0];
    Eigen::Vector2cd c1(b, cplx(lp - a));
    Eigen::Vector2cd c2(cplx(lp - d), std::conj(b));
    Eigen::Vector2cd top = c1.norm() >= c2.norm() ? c1 : c2;
    top.normalize();
    v.col(0) = top;
    v.col(1) = Eigen::Vector2cd(-std::conj(top(1)), std::conj(top(0)));
  }
  out.vectors = ComplexMatrix(std::move(v));
  return out;
}

double off_frobenius(const Eigen::MatrixXcd& a) {
  double s = 0.0;
  for (int c = 0; c < a.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

EigenDecomposition eig_jacobi(const ComplexMatrix& h) {
  const int n = h.dim();
  Eigen::MatrixXcd a = h.eigen();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_frobenius(a) <= kJacobiOffTol * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // Phase D = diag(1, e^{-i phi}) makes the (p,q) entry real, then a
        // real rotation annihilates it. V = D R acts on columns p and q.
        const cplx phase = apq / mag;  // e^{i phi}
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx vpp = c;
        const cplx vpq = s;
        const cplx vqp = -s * std::conj(phase);
        const cplx vqq = c * std::conj(phase);

        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * vpp + vkq * vqp;
          v(k, q) = vkp * vpq + vkq * vqq;
        }
      }
    }
  }
  if (sweep == kJacobiMaxSweeps && off_frobenius(a) > kJacobiOffTol * scale) {
    throw ConvergenceError("Jacobi eigensolver did not converge", off_frobenius(a));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  EigenDecomposition out;
  out.values.resize(n);
  Eigen::MatrixXcd sorted(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    sorted.col(k) = v.col(order[k]);
  }
  out.vectors = ComplexMatrix(std::move(sorted));
  return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) {
  check_dim(dim);
  m_ = Eigen::MatrixXcd::Zero(dim, dim);
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("ComplexMatrix must be square");
  check_dim(static_cast<int>(m_.rows()));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  const int n = static_cast<int>(rows.size());
  check_dim(n);
  m_.resize(n, n);
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) throw DimensionError("ComplexMatrix must be square");
    int c = 0;
    for (const auto& x : row) m_(r, c++) = x;
    ++r;
  }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  check_dim(dim);
  return ComplexMatrix(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim)));
}

ComplexMatrix ComplexMatrix::zero(int dim) { return ComplexMatrix(dim); }

ComplexMatrix ComplexMatrix::outer(const CVector& v, const CVector& w) {
  if (v.size() != w.size()) throw DimensionError("outer: vector length mismatch");
  return ComplexMatrix(Eigen::MatrixXcd(v * w.adjoint()));
}

double ComplexMatrix::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  check_same(*this, o, "operator+");
  m_ += o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  check_same(*this, o, "operator-");
  m_ -= o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx a) {
  m_ *= a;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same(a, b, "operator*");
  return ComplexMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same(a, b, "max_abs_diff");
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int da = a.dim();
  const int db = b.dim();
  Eigen::MatrixXcd out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a(i, j) * b.eigen();
  return ComplexMatrix(std::move(out));
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same(a, b, "trace_product");
  return (a.eigen().transpose().cwiseProduct(b.eigen())).sum();
}

ComplexMatrix partial_trace_second(const ComplexMatrix& m, int da, int db) {
  if (m.dim() != da * db) throw DimensionError("partial_trace_second: dims do not factor");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return ComplexMatrix(std::move(out));
}

ComplexMatrix partial_trace_first(const ComplexMatrix& m, int da, int db) {
  if (m.dim() != da * db) throw DimensionError("partial_trace_first: dims do not factor");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return ComplexMatrix(std::move(out));
}

ComplexMatrix pauli_x() { return ComplexMatrix{{0, 1}, {1, 0}}; }
ComplexMatrix pauli_y() { return ComplexMatrix{{0, cplx(0, -1)}, {cplx(0, 1), 0}}; }
ComplexMatrix pauli_z() { return ComplexMatrix{{1, 0}, {0, -1}}; }

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  const double asym = max_abs_diff(m, m.adjoint());
  if (asym > kHermitianTol * std::max(1.0, m.max_abs())) {
    throw ValidityError("operator is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  m_ = ComplexMatrix(Eigen::MatrixXcd(0.5 * (m.eigen() + m.eigen().adjoint())));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.m_ + b.m_);
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.m_ - b.m_);
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(s * a.m_);
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  return trace_product(a.matrix(), b.matrix()).real();
}

HermitianOperator anticommutator(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

HermitianOperator conjugate(const ComplexMatrix& u, const HermitianOperator& h) {
  return HermitianOperator(u * h.matrix() * u.adjoint());
}

EigenDecomposition eig_hermitian(const HermitianOperator& h) {
  switch (h.dim()) {
    case 1: {
      EigenDecomposition out;
      out.values = {h(0, 0).real()};
      out.vectors = ComplexMatrix::identity(1);
      return out;
    }
    case 2:
      return eig_2x2(h.matrix());
    default:
      return eig_jacobi(h.matrix());
  }
}

std::vector<double> eigenvalues(const HermitianOperator& h) { return eig_hermitian(h).values; }

double lambda_max(const HermitianOperator& h) { return eig_hermitian(h).values.front(); }

double lambda_min(const HermitianOperator& h) { return eig_hermitian(h).values.back(); }

double eigenvalue_gap_2x2(const HermitianOperator& t) {
  if (t.dim() != 2) throw DimensionError("eigenvalue_gap_2x2 needs a 2x2 operator");
  const double chi = t.trace();
  const double zeta = trace_product(t, t);
  return std::sqrt(std::max(0.0, 2.0 * zeta - chi * chi));
}

bool psd_check(const HermitianOperator& h, double tol) {
  if (tol < 0) throw DomainError("psd_check: tolerance must be nonnegative");
  return lambda_min(h) >= -tol;
}

}  // namespace sdi::linalg
