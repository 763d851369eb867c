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

// Fidelity bounds: linear lower bound, operator inequalities, unitary
// alignment of strategies and the parametric tightness curves.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdi/scenario.hpp"

namespace sdi::fidelity {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using quantum::Povm;
using quantum::Rng;
using quantum::State;
using scenario::Strategy;
using scenario::Witness;

/// s = 4(1 + sqrt 2), the slope scale of the linear bound.
double optimal_scale();

/// L(A) = (1 + sqrt 2) A - 3/(2 sqrt 2). Requires A in [0, Q_2 + 1e-12].
double linear_lower_bound(double a2);
/// Linear overlay through (3/4, Q_2) and (Q_2, 1). Reported, never asserted.
double conjectured_upper_bound(double a2);

struct OperatorIneqCoeffs {
  double theta = 0.0;
  double s = 0.0;
  double t_e = 0.0;
  double t_o = 0.0;
  double t = 0.0;
};

OperatorIneqCoeffs prep_ineq_coeffs(double theta, double s);
OperatorIneqCoeffs meas_ineq_coeffs(double theta, double s);

/// Four inequalities K_k >= s W_k + t_k 1 at one angle.
struct InequalityFamily {
  std::vector<HermitianOperator> k;
  std::vector<HermitianOperator> w;
  std::vector<double> t;
};

/// K_x = Lambda^dagger[ideal state x], W_x = (1/16) sum_y (-1)^{x_y} M_y(theta)
/// with M_{0,1} = cos(theta) sigma_x +- sin(theta) sigma_z.
InequalityFamily prep_inequalities(double theta, double s);
/// Index k = 2y + b: K_yb = Lambda^dagger[ideal effect], W = Z_yb.
InequalityFamily meas_inequalities(double theta, double s);

/// lambda_min(K - s W - t 1).
double inequality_residual(const HermitianOperator& k, const HermitianOperator& w, double s,
                           double t);
bool verify_operator_inequality(const HermitianOperator& k, const HermitianOperator& w, double s,
                                double t, double tol);

struct InequalitySweep {
  int points = 0;
  double min_residual = 0.0;
  double min_t = 0.0;
  double argmin_t = 0.0;
  bool holds = false;
};

enum class IneqKind { preparations, measurements };

/// Checks the family on `points` uniform angles of [0, pi/2].
InequalitySweep sweep_inequalities(IneqKind kind, double s, int points, double tol);

struct FidelityReport {
  std::optional<double> witness_value;
  double avg_fidelity = 0.0;
  ComplexMatrix aligning_unitary;
};

inline constexpr int kDefaultRestarts = 32;

/// max_U sum_x Tr(U rho_x U^dagger ideal_x) / nx over unitaries U.
FidelityReport avg_fidelity_states(const Strategy& strategy, std::span<const State> ideal_states,
                                   int restarts, Rng& rng, const Witness* witness = nullptr);
/// max_U sum_{y,b} Tr(U M_y^b U^dagger ideal_y^b) / (number of effects).
FidelityReport avg_fidelity_measurements(const Strategy& strategy,
                                         std::span<const Povm> ideal_povms, int restarts, Rng& rng,
                                         const Witness* witness = nullptr);

/// States family of the tightness curve with tan(phi) = sin(2 theta).
Strategy conjectured_states_strategy(double phi);
/// Measurements family with M_1 = eta sigma_x + (1 - eta) 1, eta = tan(2 theta).
Strategy conjectured_meas_strategy(double theta);
/// Closed form (A_2, F) = (1/2 + sqrt(1 + tan^2 phi)/4, (3 + tan phi)/4).
std::pair<double, double> conjectured_curve_states(double phi);
/// (A_2, F') evaluated on conjectured_meas_strategy.
std::pair<double, double> conjectured_curve_meas(double theta, int restarts = kDefaultRestarts,
                                                 std::uint64_t seed = 1);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free minimization; stops when the simplex diameter falls
/// below `diameter_tol` or after `max_iters` iterations.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step, double diameter_tol = 1e-10,
                             int max_iters = 20000);

/// exp(-i H(v)) with H(v) = sum_k v_k G_k over a Hermitian basis of the
/// d x d matrices; for d = 2 the basis is the Pauli matrices.
ComplexMatrix unitary_from_params(std::span<const double> v, int dim);

}  // namespace sdi::fidelity
