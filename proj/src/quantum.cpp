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

#include "sdi/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sdi::quantum {

namespace {

void require_same_dims(const std::vector<HermitianOperator>& ops, const char* what) {
  for (const auto& op : ops) {
    if (op.dim() != ops.front().dim()) throw DimensionError(std::string(what) + ": mixed dimensions");
  }
}

}  // namespace

State::State(HermitianOperator rho) : rho_(std::move(rho)) {
  const double tr = rho_.trace();
  if (std::abs(tr - 1.0) > kStateTol) {
    throw ValidityError("state trace " + std::to_string(tr) + " differs from 1");
  }
  const double lmin = linalg::lambda_min(rho_);
  if (lmin < -kStateTol) {
    throw ValidityError("state has negative eigenvalue " + std::to_string(lmin));
  }
  const double p = purity();
  if (p < 1.0 / dim() - 1e-9 || p > 1.0 + 1e-9) {
    throw ValidityError("state purity " + std::to_string(p) + " out of range");
  }
}

State State::from_ket(const CVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw ValidityError("zero ket");
  const CVector unit = psi / n;
  return State(HermitianOperator(ComplexMatrix::projector(unit)));
}

State State::maximally_mixed(int dim) {
  return State(HermitianOperator((1.0 / dim) * ComplexMatrix::identity(dim)));
}

double State::purity() const { return linalg::trace_product(rho_, rho_); }

Observable::Observable(HermitianOperator m) : m_(std::move(m)) {
  const auto ev = linalg::eigenvalues(m_);
  if (ev.front() > 1.0 + kObservableTol || ev.back() < -1.0 - kObservableTol) {
    throw ValidityError("observable spectrum leaves [-1, 1]");
  }
}

Povm::Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw ValidityError("POVM needs at least one effect");
  require_same_dims(effects_, "Povm");
  const int d = effects_.front().dim();
  ComplexMatrix sum = ComplexMatrix::zero(d);
  for (const auto& e : effects_) {
    if (linalg::lambda_min(e) < -kStateTol) throw ValidityError("POVM effect is not positive");
    sum += e.matrix();
  }
  const double err = linalg::max_abs_diff(sum, ComplexMatrix::identity(d));
  if (err > kStateTol) {
    throw ValidityError("POVM effects sum to identity only within " + std::to_string(err));
  }
}

Povm Povm::from_observable(const Observable& m) {
  const int d = m.dim();
  const auto id = ComplexMatrix::identity(d);
  return Povm({HermitianOperator(0.5 * (id + m.op().matrix())),
               HermitianOperator(0.5 * (id - m.op().matrix()))});
}

Povm Povm::from_basis(const ComplexMatrix& basis, std::span<const int> outcome_of_column,
                      int num_outcomes) {
  const int d = basis.dim();
  if (static_cast<int>(outcome_of_column.size()) != d) {
    throw DimensionError("from_basis: one outcome per basis vector required");
  }
  std::vector<ComplexMatrix> acc(num_outcomes, ComplexMatrix::zero(d));
  for (int k = 0; k < d; ++k) {
    const int b = outcome_of_column[k];
    if (b < 0 || b >= num_outcomes) throw DomainError("from_basis: outcome out of range");
    acc[b] += ComplexMatrix::projector(basis.eigen().col(k));
  }
  std::vector<HermitianOperator> effects;
  effects.reserve(num_outcomes);
  for (auto& a : acc) effects.emplace_back(a);
  return Povm(std::move(effects));
}

Observable Povm::observable() const {
  if (num_outcomes() != 2) throw DimensionError("observable() needs a two-outcome POVM");
  return Observable(effects_[0] - effects_[1]);
}

Channel::Channel(std::vector<ComplexMatrix> kraus, Picture picture)
    : kraus_(std::move(kraus)), picture_(picture) {
  if (kraus_.empty()) throw ValidityError("channel needs at least one Kraus operator");
  const int d = kraus_.front().dim();
  ComplexMatrix sum = ComplexMatrix::zero(d);
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  const double err = linalg::max_abs_diff(sum, ComplexMatrix::identity(d));
  if (err > 1e-10) {
    throw ValidityError("Kraus operators are not trace preserving (error " + std::to_string(err) + ")");
  }
}

Channel Channel::dual() const {
  return Channel(kraus_, picture_ == Picture::schrodinger ? Picture::heisenberg : Picture::schrodinger);
}

bool Channel::is_unital(double tol) const {
  const int d = dim();
  ComplexMatrix sum = ComplexMatrix::zero(d);
  for (const auto& k : kraus_) sum += k * k.adjoint();
  return linalg::max_abs_diff(sum, ComplexMatrix::identity(d)) <= tol;
}

ComplexMatrix Channel::apply(const ComplexMatrix& x) const {
  ComplexMatrix out = ComplexMatrix::zero(x.dim());
  for (const auto& k : kraus_) {
    if (picture_ == Picture::schrodinger) {
      out += k * x * k.adjoint();
    } else {
      out += k.adjoint() * x * k;
    }
  }
  return out;
}

HermitianOperator Channel::apply(const HermitianOperator& x) const {
  return HermitianOperator(apply(x.matrix()));
}

State Channel::apply(const State& rho) const {
  if (picture_ != Picture::schrodinger) {
    throw DomainError("Heisenberg-picture channel applied to a state");
  }
  return State(apply(rho.rho()));
}

HermitianOperator bloch_operator(const Bloch& n, double identity_part) {
  ComplexMatrix m = identity_part * ComplexMatrix::identity(2);
  m += n[0] * linalg::pauli_x();
  m += n[1] * linalg::pauli_y();
  m += n[2] * linalg::pauli_z();
  return HermitianOperator(m);
}

State bloch_to_state(const Bloch& m) {
  const double norm = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
  if (norm > 1.0 + 1e-12) {
    throw DomainError("Bloch vector norm " + std::to_string(norm) + " exceeds 1");
  }
  return State(0.5 * bloch_operator(m, 1.0));
}

Bloch observable_to_bloch(const HermitianOperator& m) {
  if (m.dim() != 2) throw DimensionError("Bloch vectors need dimension 2");
  const HermitianOperator sx(linalg::pauli_x()), sy(linalg::pauli_y()), sz(linalg::pauli_z());
  return {0.5 * linalg::trace_product(m, sx), 0.5 * linalg::trace_product(m, sy),
          0.5 * linalg::trace_product(m, sz)};
}

Bloch state_to_bloch(const State& rho) {
  const Bloch half = observable_to_bloch(rho.rho());
  return {2 * half[0], 2 * half[1], 2 * half[2]};
}

double dephasing_coefficient(double theta, double s) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw DomainError("dephasing angle outside [0, pi/2]");
  }
  if (!(s > 0.0)) throw DomainError("dephasing scale s must be positive");
  const double arg = theta <= std::numbers::pi / 4 ? std::sin(theta) : std::cos(theta);
  return std::min(1.0, 0.25 * s * arg);
}

ComplexMatrix dephasing_axis(double theta) {
  return theta <= std::numbers::pi / 4 ? linalg::pauli_x() : linalg::pauli_z();
}

Channel dephasing_channel(double theta, double s) {
  const double c = dephasing_coefficient(theta, s);
  return Channel({std::sqrt(0.5 * (1 + c)) * ComplexMatrix::identity(2),
                  std::sqrt(0.5 * (1 - c)) * dephasing_axis(theta)});
}

double fidelity_to_pure(const State& ideal, const State& sigma) {
  if (ideal.dim() != sigma.dim()) throw DimensionError("fidelity_to_pure: dimension mismatch");
  if (ideal.purity() < 1.0 - 1e-9) throw ValidityError("fidelity_to_pure: reference is not pure");
  return std::clamp(linalg::trace_product(ideal.rho(), sigma.rho()), 0.0, 1.0);
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd z(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) z(r, c) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return ComplexMatrix(std::move(q));
}

State random_pure_state(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(g(rng), g(rng));
  return State::from_ket(v);
}

Observable random_projective_observable(int dim, int num_plus, Rng& rng) {
  if (num_plus < 0 || num_plus > dim) throw DomainError("rank split outside [0, dim]");
  const auto u = random_unitary(dim, rng);
  Eigen::VectorXcd diag(dim);
  for (int k = 0; k < dim; ++k) diag(k) = k < num_plus ? 1.0 : -1.0;
  const Eigen::MatrixXcd m = u.eigen() * diag.asDiagonal() * u.eigen().adjoint();
  return Observable(HermitianOperator(m));
}

Rng derive_stream(Rng& master) {
  std::seed_seq seq{master(), master(), master(), master()};
  return Rng(seq);
}

}  // namespace sdi::quantum
