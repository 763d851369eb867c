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

#include "sdi/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace sdi::scenario {

using linalg::HermitianOperator;

Witness::Witness(std::vector<int> outcomes_per_measurement,
                 std::vector<std::vector<std::vector<double>>> alpha, std::string name)
    : outcomes_(std::move(outcomes_per_measurement)), alpha_(std::move(alpha)), name_(std::move(name)) {
  if (alpha_.empty()) throw DimensionError("witness needs at least one preparation");
  if (outcomes_.empty()) throw DimensionError("witness needs at least one measurement");
  for (int nb : outcomes_) {
    if (nb < 1) throw DimensionError("every measurement needs at least one outcome");
  }
  for (const auto& row : alpha_) {
    if (row.size() != outcomes_.size()) throw DimensionError("alpha table is ragged in y");
    for (std::size_t y = 0; y < row.size(); ++y) {
      if (static_cast<int>(row[y].size()) != outcomes_[y]) {
        throw DimensionError("alpha table is ragged in b");
      }
      for (double a : row[y]) {
        if (!std::isfinite(a)) throw DomainError("alpha coefficients must be finite");
      }
    }
  }
}

bool Witness::binary() const {
  return std::all_of(outcomes_.begin(), outcomes_.end(), [](int nb) { return nb == 2; });
}

Strategy::Strategy(std::vector<State> preparations, std::vector<Povm> measurements)
    : preparations_(std::move(preparations)), measurements_(std::move(measurements)) {
  if (preparations_.empty() || measurements_.empty()) {
    throw DimensionError("strategy needs preparations and measurements");
  }
  const int d = preparations_.front().dim();
  for (const auto& p : preparations_) {
    if (p.dim() != d) throw DimensionError("preparations of mixed dimension");
  }
  for (const auto& m : measurements_) {
    if (m.dim() != d) throw DimensionError("measurement dimension differs from preparations");
  }
}

double probability(const Strategy& s, int x, int y, int b) {
  if (x < 0 || x >= s.num_preparations() || y < 0 || y >= s.num_measurements() || b < 0 ||
      b >= s.measurement(y).num_outcomes()) {
    throw DomainError("probability: index out of range");
  }
  return linalg::trace_product(s.preparation(x).rho(), s.measurement(y).effect(b));
}

void check_compatible(const Witness& w, const Strategy& s) {
  if (w.num_preparations() != s.num_preparations() || w.num_measurements() != s.num_measurements()) {
    throw DimensionError("witness and strategy alphabets differ");
  }
  for (int y = 0; y < w.num_measurements(); ++y) {
    if (w.num_outcomes(y) != s.measurement(y).num_outcomes()) {
      throw DimensionError("witness and strategy outcome counts differ");
    }
  }
}

double witness_value(const Witness& w, const Strategy& s) {
  check_compatible(w, s);
  double a = 0.0;
  for (int x = 0; x < w.num_preparations(); ++x)
    for (int y = 0; y < w.num_measurements(); ++y)
      for (int b = 0; b < w.num_outcomes(y); ++b) {
        const double coeff = w.alpha(x, y, b);
        if (coeff != 0.0) a += coeff * probability(s, x, y, b);
      }
  return a;
}

double classical_bound(const Witness& w, int d, double budget) {
  if (d < 1) throw DomainError("classical_bound: dimension must be positive");
  const int nx = w.num_preparations();
  const int ny = w.num_measurements();
  if (std::pow(static_cast<double>(d), nx) > budget) {
    throw BudgetError("classical_bound: d^nx encodings exceed the enumeration budget");
  }

  // acc[m][y][b] = sum of alpha over inputs currently assigned message m.
  std::vector<std::vector<std::vector<double>>> acc(
      d, std::vector<std::vector<double>>(ny));
  for (int m = 0; m < d; ++m)
    for (int y = 0; y < ny; ++y) acc[m][y].assign(w.num_outcomes(y), 0.0);

  auto leaf_value = [&](int used) {
    double v = 0.0;
    for (int m = 0; m < used; ++m)
      for (int y = 0; y < ny; ++y) v += *std::max_element(acc[m][y].begin(), acc[m][y].end());
    return v;
  };

  double best = -std::numeric_limits<double>::infinity();
  // Messages are relabelled in order of first use, which visits each
  // encoding up to a permutation of the message alphabet exactly once.
  std::function<void(int, int)> assign = [&](int x, int used) {
    if (x == nx) {
      best = std::max(best, leaf_value(used));
      return;
    }
    const int limit = std::min(d, used + 1);
    for (int m = 0; m < limit; ++m) {
      for (int y = 0; y < ny; ++y)
        for (int b = 0; b < w.num_outcomes(y); ++b) acc[m][y][b] += w.alpha(x, y, b);
      assign(x + 1, std::max(used, m + 1));
      for (int y = 0; y < ny; ++y)
        for (int b = 0; b < w.num_outcomes(y); ++b) acc[m][y][b] -= w.alpha(x, y, b);
    }
  };
  assign(0, 0);
  return best;
}

Witness make_rac_witness(int n) {
  if (n < 2 || n > 8) throw DomainError("RAC length N must lie in [2, 8]");
  const int nx = 1 << n;
  const double weight = 1.0 / (n * static_cast<double>(nx));
  std::vector<std::vector<std::vector<double>>> alpha(
      nx, std::vector<std::vector<double>>(n, std::vector<double>(2, 0.0)));
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < n; ++y) alpha[x][y][input_bit(x, y, n)] = weight;
  return Witness(std::vector<int>(n, 2), std::move(alpha), "rac" + std::to_string(n));
}

Witness make_biased_rac_witness(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("bias q must lie in [0, 1]");
  std::vector<std::vector<std::vector<double>>> alpha(
      4, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  for (int x = 0; x < 4; ++x) {
    const int x0 = input_bit(x, 0, 2);
    const int x1 = input_bit(x, 1, 2);
    const double r = (x0 ^ x1) == 0 ? q / 2 : (1 - q) / 2;
    for (int y = 0; y < 2; ++y) alpha[x][y][input_bit(x, y, 2)] = 0.5 * r;
  }
  return Witness({2, 2}, std::move(alpha), "biased(" + std::to_string(q) + ")");
}

Witness make_example2_witness() {
  const double r3 = std::sqrt(3.0);
  const double c[3][2] = {{1.0, r3}, {1.0, -r3}, {-1.0, 0.0}};
  std::vector<std::vector<std::vector<double>>> alpha(
      3, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 2; ++y) {
      alpha[x][y][0] = c[x][y];
      alpha[x][y][1] = -c[x][y];
    }
  return Witness({2, 2}, std::move(alpha), "example2");
}

Strategy qubit_strategy(const std::vector<quantum::Bloch>& states,
                        const std::vector<quantum::Bloch>& observables) {
  std::vector<State> preps;
  for (const auto& m : states) preps.push_back(quantum::bloch_to_state(m));
  std::vector<Povm> meas;
  for (const auto& n : observables) {
    meas.push_back(Povm::from_observable(quantum::Observable(quantum::bloch_operator(n))));
  }
  return Strategy(std::move(preps), std::move(meas));
}

Strategy rac2_ideal_strategy() {
  const double h = 1.0 / std::numbers::sqrt2;
  return qubit_strategy({{1, 0, 0}, {0, 0, 1}, {0, 0, -1}, {-1, 0, 0}}, {{h, 0, h}, {h, 0, -h}});
}

Strategy example2_ideal_strategy() {
  const double r3 = std::sqrt(3.0) / 2;
  return qubit_strategy({{1, 0, 0}, {-0.5, 0, r3}, {-0.5, 0, -r3}}, {{0.5, 0, r3}, {r3, 0, -0.5}});
}

}  // namespace sdi::scenario
