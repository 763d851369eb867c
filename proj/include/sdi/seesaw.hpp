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

// Alternating best-response optimization of witness values.

#pragma once

#include <vector>

#include "sdi/fidelity.hpp"
#include "sdi/scenario.hpp"

namespace sdi::seesaw {

using quantum::Povm;
using quantum::Rng;
using quantum::State;
using scenario::Strategy;
using scenario::Witness;

inline constexpr double kTolerance = 1e-11;
inline constexpr int kMaxIters = 500;

/// rho_x = top eigenvector of G_x = sum_{y,b} alpha_{xyb} M_y^b.
std::vector<State> optimal_states_for_measurements(const Witness& w, const std::vector<Povm>& povms);
/// Projective best response: eigenvectors of Z_y0 - Z_y1 (binary) assigned
/// to the outcome b maximizing <v|Z_yb|v>, ties toward smaller b.
std::vector<Povm> optimal_measurements_for_states(const Witness& w, const std::vector<State>& states);

struct SeesawRun {
  std::vector<double> values;  // witness value after each half-step
  Strategy strategy;
  int iterations = 0;
  bool converged = false;
};

/// One restart from the given starting states.
SeesawRun seesaw_from_states(const Witness& w, std::vector<State> states, int max_iters = kMaxIters,
                             double tol = kTolerance);

struct SeesawResult {
  double best_value = 0.0;
  Strategy best_strategy;
  int iterations = 0;
  std::vector<double> restart_values;
};

/// Best value over `restarts` Haar-random starts in dimension d.
SeesawResult seesaw(const Witness& w, int d, int restarts, int max_iters, Rng& rng, int threads = 1);

struct SweepPoint {
  double a2 = 0.0;
  double f_states = 0.0;
  double f_meas = 0.0;
};

/// Random pure preparations with best-response measurements; fidelities are
/// unitary-restricted alignments against `ideal`.
std::vector<SweepPoint> region_sweep(const Witness& w, const Strategy& ideal, int samples, Rng& rng,
                                     int threads = 1, int restarts = fidelity::kDefaultRestarts);

}  // namespace sdi::seesaw
