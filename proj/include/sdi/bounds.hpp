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

// Analytic compatibility bounds for random access codes.

#pragma once

#include <optional>
#include <span>

#include "sdi/quantum.hpp"

namespace sdi::bounds {

using quantum::Observable;
using quantum::State;

inline constexpr double kRadicandTol = 1e-9;

/// Q_2 = (1 + 1/sqrt(2))/2.
double q2();

struct PrepBoundReport {
  double beta = 0.0;
  double alpha = 0.0;
  double bound = 0.0;
};

struct MeasBoundReport {
  double mu = 0.0;
  double nu = 0.0;
  double eta_plus = 0.0;
  double eta_minus = 0.0;
  double bound = 0.0;
};

/// sqrt of a radicand that may be slightly negative from round-off.
/// Values in [-kRadicandTol, 0) map to 0; smaller values throw DomainError.
double clamped_sqrt(double radicand);

/// Upper bound on the 2->1 RAC value for four qubit preparations indexed
/// x = 2 x0 + x1.
PrepBoundReport prep_compat_bound_2(std::span<const State> states);
/// Upper bound on the 2->1 RAC value for a pair of qubit observables.
MeasBoundReport meas_compat_bound_2(const Observable& m0, const Observable& m1);

/// N->1 RAC bound for 2^N qubit preparations.
double prep_compat_bound_N(std::span<const State> states, int n);
/// N->1 RAC bound for N qubit observables.
double meas_compat_bound_N(std::span<const Observable> observables);

/// Bound on the biased RAC for a pair of qubit observables.
double biased_bound(double q, const Observable& m0, const Observable& m1);
/// Bloch overlap n0.n1 of the observables that maximize the biased RAC.
double biased_optimal_overlap(double q);
/// (1 + sqrt(1 - 2q + 2q^2))/2.
double biased_max(double q);

/// RAC value bound for qutrit observables in Jordan form: angle alpha on the
/// 2x2 block and signs r, s on the 1x1 block.
double qutrit_bound(double alpha, int r, int s);
/// (5 + sqrt(5))/8.
double qutrit_max();

struct JordanForm {
  double alpha = 0.0;
  int r = 1;
  int s = 1;
};

/// Extracts (alpha, r, s) from two projective qutrit observables. Returns
/// nullopt when the observables commute (no 2x2 block).
std::optional<JordanForm> qutrit_jordan_form(const Observable& m0, const Observable& m1,
                                             double tol = 1e-8);

}  // namespace sdi::bounds
