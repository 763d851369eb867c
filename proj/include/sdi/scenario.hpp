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

// Prepare-and-measure scenarios: witnesses, strategies, exact classical bounds.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdi/quantum.hpp"

namespace sdi::scenario {

using quantum::Povm;
using quantum::State;

/// Linear functional A = sum_{x,y,b} alpha[x][y][b] P(b|x,y).
class Witness {
 public:
  Witness(std::vector<int> outcomes_per_measurement,
          std::vector<std::vector<std::vector<double>>> alpha, std::string name = "custom");

  int num_preparations() const noexcept { return static_cast<int>(alpha_.size()); }
  int num_measurements() const noexcept { return static_cast<int>(outcomes_.size()); }
  int num_outcomes(int y) const { return outcomes_.at(y); }
  const std::vector<int>& outcomes() const noexcept { return outcomes_; }
  double alpha(int x, int y, int b) const { return alpha_[x][y][b]; }
  const std::vector<std::vector<std::vector<double>>>& table() const noexcept { return alpha_; }
  const std::string& name() const noexcept { return name_; }
  /// True when every measurement has two outcomes.
  bool binary() const;

 private:
  std::vector<int> outcomes_;
  std::vector<std::vector<std::vector<double>>> alpha_;
  std::string name_;
};

class Strategy {
 public:
  Strategy(std::vector<State> preparations, std::vector<Povm> measurements);

  int dim() const { return preparations_.front().dim(); }
  int num_preparations() const noexcept { return static_cast<int>(preparations_.size()); }
  int num_measurements() const noexcept { return static_cast<int>(measurements_.size()); }
  const State& preparation(int x) const { return preparations_.at(x); }
  const Povm& measurement(int y) const { return measurements_.at(y); }
  const std::vector<State>& preparations() const noexcept { return preparations_; }
  const std::vector<Povm>& measurements() const noexcept { return measurements_; }

 private:
  std::vector<State> preparations_;
  std::vector<Povm> measurements_;
};

/// P(b|x,y) = Tr(rho_x M_y^b).
double probability(const Strategy& s, int x, int y, int b);
double witness_value(const Witness& w, const Strategy& s);
/// Throws DimensionError unless the strategy's alphabets match the witness.
void check_compatible(const Witness& w, const Strategy& s);

inline constexpr double kClassicalBudget = 1e8;

/// Exact C_d: maximum over deterministic encodings x -> {0..d-1}, each paired
/// with its optimal deterministic decoding. Throws BudgetError when the
/// number of encodings d^nx exceeds `budget`.
double classical_bound(const Witness& w, int d, double budget = kClassicalBudget);

/// Bit y of the N-bit input index x, with x_0 the most significant bit.
inline int input_bit(int x, int y, int n) { return (x >> (n - 1 - y)) & 1; }

/// N->1 random access code, alpha = 1/(N 2^N) on b = x_y.
Witness make_rac_witness(int n);
/// Biased 2->1 RAC with weight q/2 on x0 xor x1 = 0 and (1-q)/2 otherwise.
Witness make_biased_rac_witness(double q);
/// Three preparations, two binary measurements, correlator form
/// sum_{x,y} c_{x,y} E(x,y) expanded to alpha = c_{x,y} (-1)^b.
Witness make_example2_witness();

/// Preparations (1 +- sigma_x)/2, (1 +- sigma_z)/2 with observables
/// (sigma_x +- sigma_z)/sqrt(2).
Strategy rac2_ideal_strategy();
/// Equilateral-triangle preparations and the anticommuting observable pair
/// that reaches the example-2 maximum of 5.
Strategy example2_ideal_strategy();
/// Strategy built from qubit Bloch vectors and binary observable Bloch vectors.
Strategy qubit_strategy(const std::vector<quantum::Bloch>& states,
                        const std::vector<quantum::Bloch>& observables);

}  // namespace sdi::scenario
