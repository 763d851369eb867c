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

#include "sdi/fidelity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sdi/bounds.hpp"

namespace sdi::fidelity {

using linalg::cplx;
using linalg::pauli_x;
using linalg::pauli_z;

namespace {

constexpr double kPi = std::numbers::pi;

void require_angle(double theta, double hi) {
  if (!(theta >= 0.0 && theta <= hi)) throw DomainError("angle outside its domain");
}

void require_scale(double s) {
  if (!(s > 0.0)) throw DomainError("scale s must be positive");
}

HermitianOperator herm(const ComplexMatrix& m) { return HermitianOperator(m); }

ComplexMatrix id2() { return ComplexMatrix::identity(2); }

// Ideal 2->1 states +x, +z, -z, -x and effects (1 +- sigma_x)/2, (1 +- sigma_z)/2.
const ComplexMatrix& ideal_state_axis(int x) {
  static const ComplexMatrix axes[4] = {pauli_x(), pauli_z(), -pauli_z(), -pauli_x()};
  return axes[x];
}

Eigen::Matrix3d rotation_from_params(const double* v) {
  const Eigen::Vector3d w(v[0], v[1], v[2]);
  const double norm = w.norm();
  if (norm == 0.0) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d n = w / norm;
  Eigen::Matrix3d k;
  k << 0, -n.z(), n.y(), n.z(), 0, -n.x(), -n.y(), n.x(), 0;
  const double phi = 2.0 * norm;
  return Eigen::Matrix3d::Identity() + std::sin(phi) * k + (1 - std::cos(phi)) * k * k;
}

Eigen::Vector3d bloch_part(const HermitianOperator& h) {
  const auto b = quantum::observable_to_bloch(h);
  return {b[0], b[1], b[2]};
}

// Hermitian basis of traceless d x d matrices (generalized Gell-Mann).
std::vector<Eigen::MatrixXcd> gell_mann(int d) {
  std::vector<Eigen::MatrixXcd> basis;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      Eigen::MatrixXcd anti = Eigen::MatrixXcd::Zero(d, d);
      anti(j, k) = cplx(0, -1);
      anti(k, j) = cplx(0, 1);
      basis.push_back(sym);
      basis.push_back(anti);
    }
  for (int l = 1; l < d; ++l) {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(d, d);
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -l * norm;
    basis.push_back(diag);
  }
  return basis;
}

// Pairs (A_k, P_k); maximizes sum_k Tr(U A_k U^dagger P_k) / count.
struct AlignmentProblem {
  int dim = 0;
  std::vector<HermitianOperator> moved;
  std::vector<HermitianOperator> reference;
  double count = 1.0;
};

FidelityReport align(const AlignmentProblem& p, int restarts, Rng& rng) {
  if (restarts < 1) throw DomainError("restarts must be at least 1");
  const int d = p.dim;
  const int nparam = d * d - 1;
  std::function<double(const std::vector<double>&)> objective;

  if (d == 2) {
    // Tr(U A U^dagger P) = a0 p0 2 + (R a).p 2 for A = a0 1 + a.sigma, P = p0 1 + p.sigma.
    double c0 = 0.0;
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (std::size_t k = 0; k < p.moved.size(); ++k) {
      const double a0 = 0.5 * p.moved[k].trace();
      const double p0 = 0.5 * p.reference[k].trace();
      c0 += 2 * a0 * p0;
      h += 2 * bloch_part(p.reference[k]) * bloch_part(p.moved[k]).transpose();
    }
    objective = [c0, h, n = p.count](const std::vector<double>& v) {
      const Eigen::Matrix3d r = rotation_from_params(v.data());
      return -(c0 + (r.array() * h.array()).sum()) / n;
    };
  } else {
    objective = [&p, d](const std::vector<double>& v) {
      const auto u = unitary_from_params(v, d);
      double acc = 0.0;
      for (std::size_t k = 0; k < p.moved.size(); ++k) {
        acc += linalg::trace_product(linalg::conjugate(u, p.moved[k]), p.reference[k]);
      }
      return -acc / p.count;
    };
  }

  std::uniform_real_distribution<double> start_dist(-kPi, kPi);
  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng stream = quantum::derive_stream(rng);
    std::vector<double> start(nparam, 0.0);
    if (r > 0) {
      for (auto& s : start) s = start_dist(stream);
    }
    auto res = nelder_mead(objective, start, 0.5);
    if (res.value < best.value) best = std::move(res);
  }
  FidelityReport report;
  report.avg_fidelity = std::clamp(-best.value, 0.0, 1.0);
  report.aligning_unitary = unitary_from_params(best.x, d);
  return report;
}

}  // namespace

double optimal_scale() { return 4.0 * (1.0 + std::numbers::sqrt2); }

double linear_lower_bound(double a2) {
  if (!(a2 >= 0.0 && a2 <= bounds::q2() + 1e-12)) {
    throw DomainError("linear_lower_bound: A_2 outside [0, Q_2]");
  }
  return (1.0 + std::numbers::sqrt2) * a2 - 3.0 / (2.0 * std::numbers::sqrt2);
}

double conjectured_upper_bound(double a2) {
  const double q = bounds::q2();
  return (1.0 - q) / (q - 0.75) * a2 + (q * q - 0.75) / (q - 0.75);
}

OperatorIneqCoeffs prep_ineq_coeffs(double theta, double s) {
  require_angle(theta, kPi / 2);
  require_scale(s);
  const double c = quantum::dephasing_coefficient(theta, s);
  const double co = std::cos(theta), si = std::sin(theta);
  OperatorIneqCoeffs r{theta, s, 0, 0, 0};
  if (theta <= kPi / 4) {
    r.t_e = std::min(1 - s / 8 * co, s / 8 * co);
    r.t_o = std::min((4 + 4 * c - s * si) / 8, (4 - 4 * c + s * si) / 8);
  } else {
    r.t_e = std::min((4 + 4 * c - s * co) / 8, (4 - 4 * c + s * co) / 8);
    r.t_o = std::min(1 - s / 8 * si, s / 8 * si);
  }
  r.t = 0.5 * (r.t_e + r.t_o);
  return r;
}

OperatorIneqCoeffs meas_ineq_coeffs(double theta, double s) {
  require_angle(theta, kPi / 2);
  require_scale(s);
  const double c = quantum::dephasing_coefficient(theta, s);
  const double co = std::cos(theta), si = std::sin(theta);
  OperatorIneqCoeffs r{theta, s, 0, 0, 0};
  if (theta <= kPi / 4) {
    r.t_e = std::min((8 - s - s * co) / 8, s / 8 * (co - 1));
    r.t_o = std::min((4 * c - s * si - s + 4) / 8, (-4 * c + s * si - s + 4) / 8);
  } else {
    r.t_e = std::min((4 * c - s * co - s + 4) / 8, (-4 * c + s * co - s + 4) / 8);
    r.t_o = std::min(s / 8 * (si - 1), (8 - s - s * si) / 8);
  }
  r.t = 0.5 * (r.t_e + r.t_o);
  return r;
}

InequalityFamily prep_inequalities(double theta, double s) {
  const auto coeffs = prep_ineq_coeffs(theta, s);
  const auto dual = quantum::dephasing_channel(theta, s).dual();
  const ComplexMatrix m0 = std::cos(theta) * pauli_x() + std::sin(theta) * pauli_z();
  const ComplexMatrix m1 = std::cos(theta) * pauli_x() - std::sin(theta) * pauli_z();
  InequalityFamily f;
  for (int x = 0; x < 4; ++x) {
    const int x0 = scenario::input_bit(x, 0, 2), x1 = scenario::input_bit(x, 1, 2);
    f.k.push_back(dual.apply(herm(0.5 * (id2() + ideal_state_axis(x)))));
    f.w.push_back(herm((1.0 / 16) * ((x0 ? -1.0 : 1.0) * m0 + (x1 ? -1.0 : 1.0) * m1)));
    f.t.push_back(x0 == x1 ? coeffs.t_e : coeffs.t_o);
  }
  return f;
}

InequalityFamily meas_inequalities(double theta, double s) {
  const auto coeffs = meas_ineq_coeffs(theta, s);
  const auto dual = quantum::dephasing_channel(theta, s).dual();
  const ComplexMatrix axes[2] = {pauli_x(), pauli_z()};
  const double weights[2] = {std::cos(theta), std::sin(theta)};
  InequalityFamily f;
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      const double sign = b ? -1.0 : 1.0;
      f.k.push_back(dual.apply(herm(0.5 * (id2() + sign * axes[y]))));
      f.w.push_back(herm(0.125 * (id2() + sign * weights[y] * axes[y])));
      f.t.push_back(y == 0 ? coeffs.t_e : coeffs.t_o);
    }
  return f;
}

double inequality_residual(const HermitianOperator& k, const HermitianOperator& w, double s,
                           double t) {
  if (k.dim() != w.dim()) throw DimensionError("inequality operands differ in dimension");
  return linalg::lambda_min(k - s * w - t * HermitianOperator::identity(k.dim()));
}

bool verify_operator_inequality(const HermitianOperator& k, const HermitianOperator& w, double s,
                                double t, double tol) {
  if (k.dim() != w.dim()) throw DimensionError("inequality operands differ in dimension");
  return linalg::psd_check(k - s * w - t * HermitianOperator::identity(k.dim()), tol);
}

InequalitySweep sweep_inequalities(IneqKind kind, double s, int points, double tol) {
  if (points < 2) throw DomainError("sweep needs at least two grid points");
  InequalitySweep out;
  out.points = points;
  out.min_residual = std::numeric_limits<double>::infinity();
  out.min_t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double theta = (kPi / 2) * i / (points - 1);
    const auto fam = kind == IneqKind::preparations ? prep_inequalities(theta, s)
                                                    : meas_inequalities(theta, s);
    for (std::size_t k = 0; k < fam.k.size(); ++k) {
      out.min_residual = std::min(out.min_residual, inequality_residual(fam.k[k], fam.w[k], s, fam.t[k]));
    }
    const double t = kind == IneqKind::preparations ? prep_ineq_coeffs(theta, s).t
                                                    : meas_ineq_coeffs(theta, s).t;
    if (t < out.min_t) {
      out.min_t = t;
      out.argmin_t = theta;
    }
  }
  out.holds = out.min_residual >= -tol;
  return out;
}

FidelityReport avg_fidelity_states(const Strategy& strategy, std::span<const State> ideal_states,
                                   int restarts, Rng& rng, const Witness* witness) {
  if (static_cast<int>(ideal_states.size()) != strategy.num_preparations()) {
    throw DimensionError("one ideal state per preparation required");
  }
  AlignmentProblem p;
  p.dim = strategy.dim();
  for (int x = 0; x < strategy.num_preparations(); ++x) {
    if (ideal_states[x].dim() != p.dim) throw DimensionError("ideal state dimension differs");
    p.moved.push_back(strategy.preparation(x).rho());
    p.reference.push_back(ideal_states[x].rho());
  }
  p.count = strategy.num_preparations();
  auto report = align(p, restarts, rng);
  if (witness) report.witness_value = scenario::witness_value(*witness, strategy);
  return report;
}

FidelityReport avg_fidelity_measurements(const Strategy& strategy,
                                         std::span<const Povm> ideal_povms, int restarts, Rng& rng,
                                         const Witness* witness) {
  if (static_cast<int>(ideal_povms.size()) != strategy.num_measurements()) {
    throw DimensionError("one ideal POVM per measurement required");
  }
  AlignmentProblem p;
  p.dim = strategy.dim();
  for (int y = 0; y < strategy.num_measurements(); ++y) {
    const auto& m = strategy.measurement(y);
    const auto& ideal = ideal_povms[y];
    if (ideal.dim() != p.dim || ideal.num_outcomes() != m.num_outcomes()) {
      throw DimensionError("ideal POVM shape differs from the strategy");
    }
    for (int b = 0; b < m.num_outcomes(); ++b) {
      p.moved.push_back(m.effect(b));
      p.reference.push_back(ideal.effect(b));
    }
  }
  p.count = static_cast<double>(p.moved.size());
  auto report = align(p, restarts, rng);
  if (witness) report.witness_value = scenario::witness_value(*witness, strategy);
  return report;
}

Strategy conjectured_states_strategy(double phi) {
  require_angle(phi, kPi / 4);
  const double theta = 0.5 * std::asin(std::min(1.0, std::tan(phi)));
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<State> states{State::from_ket(Eigen::Vector2cd(1, 0)), State::from_ket(Eigen::Vector2cd(c, s)),
                            State::from_ket(Eigen::Vector2cd(c, -s)), State::from_ket(Eigen::Vector2cd(0, 1))};
  std::vector<Povm> meas;
  for (int y = 0; y < 2; ++y) {
    const double sign = y ? -1.0 : 1.0;
    meas.push_back(Povm::from_observable(quantum::Observable(
        quantum::bloch_operator({sign * std::sin(phi), 0.0, std::cos(phi)}))));
  }
  return Strategy(std::move(states), std::move(meas));
}

Strategy conjectured_meas_strategy(double theta) {
  require_angle(theta, kPi / 8);
  const double eta = std::min(1.0, std::tan(2 * theta));
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<State> states{State::from_ket(Eigen::Vector2cd(c, s)), State::from_ket(Eigen::Vector2cd(c, -s)),
                            State::from_ket(Eigen::Vector2cd(s, c)), State::from_ket(Eigen::Vector2cd(-s, c))};
  std::vector<Povm> meas{
      Povm::from_observable(quantum::Observable(quantum::bloch_operator({0, 0, 1}))),
      Povm::from_observable(quantum::Observable(quantum::bloch_operator({eta, 0, 0}, 1 - eta)))};
  return Strategy(std::move(states), std::move(meas));
}

std::pair<double, double> conjectured_curve_states(double phi) {
  require_angle(phi, kPi / 4);
  const double t = std::tan(phi);
  return {0.5 + 0.25 * std::sqrt(1 + t * t), 0.25 * (3 + t)};
}

std::pair<double, double> conjectured_curve_meas(double theta, int restarts, std::uint64_t seed) {
  const auto strategy = conjectured_meas_strategy(theta);
  const auto rac = scenario::make_rac_witness(2);
  const auto ideal = scenario::rac2_ideal_strategy();
  Rng rng(seed);
  const auto report = avg_fidelity_measurements(strategy, ideal.measurements(), restarts, rng, &rac);
  return {*report.witness_value, report.avg_fidelity};
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step, double diameter_tol,
                             int max_iters) {
  const std::size_t n = start.size();
  NelderMeadResult res;
  if (n == 0) {
    res.x = start;
    res.value = f(start);
    res.converged = true;
    return res;
  }
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto point = [&](const std::vector<double>& centroid, const std::vector<double>& from, double coef) {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (from[j] - centroid[j]);
    return p;
  };

  int it = 0;
  for (; it < max_iters; ++it) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) d2 += (simplex[i][j] - simplex[best][j]) * (simplex[i][j] - simplex[best][j]);
      diameter = std::max(diameter, std::sqrt(d2));
    }
    if (diameter < diameter_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
    }
    const auto refl = point(centroid, simplex[worst], -1.0);
    const double fr = f(refl);
    if (fr < values[best]) {
      const auto exp = point(centroid, simplex[worst], -2.0);
      const double fe = f(exp);
      if (fe < fr) {
        simplex[worst] = exp;
        values[worst] = fe;
      } else {
        simplex[worst] = refl;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = refl;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const auto con = point(centroid, outside ? refl : simplex[worst], 0.5);
    const double fc = f(con);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = con;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      values[i] = f(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  res.x = simplex[best];
  res.value = values[best];
  res.iterations = it;
  return res;
}

ComplexMatrix unitary_from_params(std::span<const double> v, int dim) {
  if (static_cast<int>(v.size()) != dim * dim - 1) {
    throw DimensionError("unitary_from_params: d^2 - 1 parameters required");
  }
  if (dim == 2) {
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    ComplexMatrix u = std::cos(norm) * ComplexMatrix::identity(2);
    if (norm > 0) {
      const ComplexMatrix gen = (v[0] / norm) * pauli_x() + (v[1] / norm) * linalg::pauli_y() + (v[2] / norm) * pauli_z();
      u += cplx(0, -std::sin(norm)) * gen;
    }
    return u;
  }
  const auto basis = gell_mann(dim);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < basis.size(); ++k) h += v[k] * basis[k];
  return linalg::spectral_map(HermitianOperator(h), [](double l) { return std::exp(cplx(0, -l)); });
}

}  // namespace sdi::fidelity
