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

#include "sdi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sdi::bounds {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using linalg::trace_product;

namespace {

double dot(const quantum::Bloch& a, const quantum::Bloch& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

quantum::Bloch sub(const quantum::Bloch& a, const quantum::Bloch& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

void require_qubit(int dim, const char* what) {
  if (dim != 2) throw DimensionError(std::string(what) + ": qubit operators required");
}

double trace_square(const HermitianOperator& a) { return trace_product(a, a); }

}  // namespace

double q2() { return 0.5 * (1.0 + 1.0 / std::numbers::sqrt2); }

double clamped_sqrt(double radicand) {
  if (radicand >= 0.0) return std::sqrt(radicand);
  if (radicand >= -kRadicandTol) return 0.0;
  throw DomainError("negative radicand " + std::to_string(radicand));
}

PrepBoundReport prep_compat_bound_2(std::span<const State> states) {
  if (states.size() != 4) throw DimensionError("prep_compat_bound_2: four states required");
  quantum::Bloch m[4];
  for (int x = 0; x < 4; ++x) {
    require_qubit(states[x].dim(), "prep_compat_bound_2");
    m[x] = quantum::state_to_bloch(states[x]);
  }
  PrepBoundReport r;
  r.beta = 0.5 * (dot(m[0], m[0]) + dot(m[1], m[1]) + dot(m[2], m[2]) + dot(m[3], m[3])) -
           dot(m[0], m[3]) - dot(m[1], m[2]);
  r.alpha = dot(sub(m[0], m[3]), sub(m[1], m[2]));
  r.bound = 0.5 + (clamped_sqrt(r.beta + r.alpha) + clamped_sqrt(r.beta - r.alpha)) /
                      (8.0 * std::numbers::sqrt2);
  return r;
}

MeasBoundReport meas_compat_bound_2(const Observable& m0, const Observable& m1) {
  require_qubit(m0.dim(), "meas_compat_bound_2");
  require_qubit(m1.dim(), "meas_compat_bound_2");
  MeasBoundReport r;
  r.mu = trace_square(m0.op()) + trace_square(m1.op());
  r.nu = 2.0 * trace_product(m0.op(), m1.op());
  r.eta_plus = m0.op().trace() + m1.op().trace();
  r.eta_minus = m0.op().trace() - m1.op().trace();
  r.bound = 0.5 + (clamped_sqrt(2 * r.mu + 2 * r.nu - r.eta_plus * r.eta_plus) +
                   clamped_sqrt(2 * r.mu - 2 * r.nu - r.eta_minus * r.eta_minus)) /
                      16.0;
  return r;
}

double prep_compat_bound_N(std::span<const State> states, int n) {
  if (n < 1 || n > 16) throw DomainError("prep_compat_bound_N: N out of range");
  const std::size_t nx = std::size_t{1} << n;
  if (states.size() != nx) throw DimensionError("prep_compat_bound_N: 2^N states required");
  for (const auto& s : states) require_qubit(s.dim(), "prep_compat_bound_N");

  double sum = 0.0;
  for (int y = 0; y < n; ++y) {
    // Tr(V_y^2) with V_y = sum_x (-1)^{x_y} rho_x, expanded pairwise.
    double radicand = 0.0;
    for (std::size_t k = 0; k < nx; ++k) {
      radicand += trace_square(states[k].rho());
      for (std::size_t l = k + 1; l < nx; ++l) {
        const int sign = (((k >> (n - 1 - y)) ^ (l >> (n - 1 - y))) & 1) ? -1 : 1;
        radicand += sign * 2.0 * trace_product(states[k].rho(), states[l].rho());
      }
    }
    sum += clamped_sqrt(radicand / 2.0);
  }
  return 0.5 + sum / (n * static_cast<double>(nx));
}

double meas_compat_bound_N(std::span<const Observable> observables) {
  const int n = static_cast<int>(observables.size());
  if (n < 1 || n > 16) throw DimensionError("meas_compat_bound_N: 1 to 16 observables required");
  for (const auto& m : observables) require_qubit(m.dim(), "meas_compat_bound_N");

  double diag = 0.0;
  for (const auto& m : observables) diag += trace_square(m.op());
  // Strings z with last bit 0; z and its complement give the same radicand.
  const std::size_t half = std::size_t{1} << (n - 1);
  double sum = 0.0;
  for (std::size_t z = 0; z < half; ++z) {
    const std::size_t bits = z << 1;
    double radicand = diag;
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        const int sign = (((bits >> (n - 1 - k)) ^ (bits >> (n - 1 - l))) & 1) ? -1 : 1;
        radicand += sign * 2.0 * trace_product(observables[k].op(), observables[l].op());
      }
    sum += clamped_sqrt(radicand);
  }
  return 0.5 + std::numbers::sqrt2 * sum / (n * std::pow(2.0, n + 1));
}

double biased_bound(double q, const Observable& m0, const Observable& m1) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("bias q must lie in [0, 1]");
  require_qubit(m0.dim(), "biased_bound");
  require_qubit(m1.dim(), "biased_bound");
  const double t0 = m0.op().trace();
  const double t1 = m1.op().trace();
  const double beta = 2.0 * (trace_square(m0.op()) + trace_square(m1.op())) - t0 * t0 - t1 * t1;
  const double alpha = 4.0 * trace_product(m0.op(), m1.op()) - 2.0 * t0 * t1;
  return 0.5 + (q * clamped_sqrt(beta + alpha) + (1 - q) * clamped_sqrt(beta - alpha)) / 8.0;
}

double biased_optimal_overlap(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("bias q must lie in [0, 1]");
  return (2 * q - 1) / (1 - 2 * q + 2 * q * q);
}

double biased_max(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("bias q must lie in [0, 1]");
  return 0.5 * (1.0 + std::sqrt(1 - 2 * q + 2 * q * q));
}

double qutrit_bound(double alpha, int r, int s) {
  if ((r != 1 && r != -1) || (s != 1 && s != -1)) throw DomainError("r and s must be +1 or -1");
  const double sa = std::abs(std::sin(alpha));
  const double ca = std::abs(std::cos(alpha));
  const double block = r == s ? 2 + 4 * sa + 2 * ca : 2 + 2 * sa + 4 * ca;
  return 0.5 + block / 16.0;
}

double qutrit_max() { return (5.0 + std::sqrt(5.0)) / 8.0; }

std::optional<JordanForm> qutrit_jordan_form(const Observable& m0, const Observable& m1,
                                             double tol) {
  if (m0.dim() != 3 || m1.dim() != 3) throw DimensionError("qutrit_jordan_form: qutrit observables required");
  const ComplexMatrix& a = m0.op().matrix();
  const ComplexMatrix& b = m1.op().matrix();
  for (const ComplexMatrix* m : {&a, &b}) {
    if (linalg::max_abs_diff(*m * *m, ComplexMatrix::identity(3)) > tol) {
      throw ValidityError("qutrit_jordan_form: observables must be projective");
    }
  }
  const ComplexMatrix comm = a * b - b * a;
  if (comm.max_abs() <= tol) return std::nullopt;

  // i[M0, M1] is Hermitian with spectrum {+c, 0, -c}; the null vector spans
  // the 1x1 Jordan block.
  const HermitianOperator ic(linalg::cplx(0, 1) * comm);
  const auto ed = linalg::eig_hermitian(ic);
  const linalg::CVector v = ed.vector(1);
  const double r = (v.adjoint() * a.eigen() * v)(0).real();
  const double s = (v.adjoint() * b.eigen() * v)(0).real();

  const ComplexMatrix p = ComplexMatrix::identity(3) - ComplexMatrix::projector(v);
  const double block_overlap = (p * a * p * b).trace().real();
  JordanForm jf;
  jf.r = r >= 0 ? 1 : -1;
  jf.s = s >= 0 ? 1 : -1;
  jf.alpha = 0.5 * std::acos(std::clamp(block_overlap / 2.0, -1.0, 1.0));
  return jf;
}

}  // namespace sdi::bounds
