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

#include "sdi/seesaw.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "sdi/bounds.hpp"

using namespace sdi;
using namespace sdi::seesaw;

namespace {

const double kQ2 = 0.5 * (1 + 1 / std::sqrt(2.0));

quantum::Bloch obs_bloch(const Povm& p) { return quantum::observable_to_bloch(p.observable().op()); }

}  // namespace

TEST(seesaw, state_response_examples) {
  const auto rac = scenario::make_rac_witness(2);
  const std::vector<Povm> xz{Povm::from_observable(quantum::Observable(quantum::bloch_operator({1, 0, 0}))),
                             Povm::from_observable(quantum::Observable(quantum::bloch_operator({0, 0, 1})))};
  const auto states = optimal_states_for_measurements(rac, xz);
  const auto m00 = quantum::state_to_bloch(states[0]);
  EXPECT_NEAR(m00[0], 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m00[2], 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(scenario::witness_value(rac, Strategy(states, xz)), kQ2, 1e-12);

  // A zero witness leaves every G_x at zero: first basis state.
  const scenario::Witness zero({2}, {{{0, 0}}});
  const auto tie = optimal_states_for_measurements(zero, {xz[0]});
  EXPECT_NEAR(tie[0].rho()(0, 0).real(), 1.0, 1e-15);
}

TEST(seesaw, measurement_response_examples) {
  const auto rac = scenario::make_rac_witness(2);
  const auto ideal = scenario::rac2_ideal_strategy();
  const auto povms = optimal_measurements_for_states(rac, ideal.preparations());
  EXPECT_NEAR(scenario::witness_value(rac, Strategy(ideal.preparations(), povms)), kQ2, 1e-12);
  const auto n0 = obs_bloch(povms[0]);
  EXPECT_NEAR(std::abs(n0[0]), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(n0[2]), 1 / std::sqrt(2.0), 1e-12);

  const std::vector<State> mixed(4, State::maximally_mixed(2));
  const auto trivial = optimal_measurements_for_states(rac, mixed);
  EXPECT_NEAR(scenario::witness_value(rac, Strategy(mixed, trivial)), 0.5, 1e-12);
  EXPECT_NEAR(trivial[0].effect(0)(0, 0).real(), 1.0, 1e-12);

  const auto s2 = scenario::qubit_strategy({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, -1}}, {{0, 0, 1}, {0, 0, 1}});
  const auto r2 = optimal_measurements_for_states(rac, s2.preparations());
  EXPECT_NEAR(scenario::witness_value(rac, Strategy(s2.preparations(), r2)), 0.75, 1e-12);
  EXPECT_NEAR(std::abs(obs_bloch(r2[0])[2]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(obs_bloch(r2[1])[2]), 1.0, 1e-12);
}

TEST(seesaw, monotone_and_fixed_point) {
  quantum::Rng rng(10);
  for (const auto& w : {scenario::make_rac_witness(2), scenario::make_rac_witness(3), scenario::make_example2_witness()}) {
    for (int d : {2, 3}) {
      std::vector<State> start;
      for (int x = 0; x < w.num_preparations(); ++x) start.push_back(quantum::random_pure_state(d, rng));
      const auto run = seesaw_from_states(w, start);
      for (std::size_t k = 1; k < run.values.size(); ++k) EXPECT_GE(run.values[k], run.values[k - 1] - 1e-12);
      EXPECT_TRUE(run.converged);
      const auto states = optimal_states_for_measurements(w, run.strategy.measurements());
      EXPECT_NEAR(scenario::witness_value(w, Strategy(states, run.strategy.measurements())), run.values.back(), 1e-10);
      const auto povms = optimal_measurements_for_states(w, run.strategy.preparations());
      EXPECT_NEAR(scenario::witness_value(w, Strategy(run.strategy.preparations(), povms)), run.values.back(), 1e-10);
    }
  }
}

TEST(seesaw, known_optima) {
  quantum::Rng rng(7);
  EXPECT_NEAR(seesaw::seesaw(scenario::make_rac_witness(2), 2, 64, kMaxIters, rng).best_value, kQ2, 1e-6);
  EXPECT_NEAR(seesaw::seesaw(scenario::make_rac_witness(3), 2, 64, kMaxIters, rng).best_value, 0.5 * (1 + 1 / std::sqrt(3.0)), 1e-5);
  EXPECT_NEAR(seesaw::seesaw(scenario::make_example2_witness(), 2, 32, kMaxIters, rng).best_value, 5.0, 1e-6);
  EXPECT_NEAR(seesaw::seesaw(scenario::make_rac_witness(2), 3, 128, kMaxIters, rng).best_value, bounds::qutrit_max(), 1e-4);
}

TEST(seesaw, beats_classical_and_respects_bounds) {
  quantum::Rng rng(3);
  for (int d : {2, 3}) {
    const auto rac = scenario::make_rac_witness(2);
    const auto res = seesaw::seesaw(rac, d, 32, kMaxIters, rng);
    EXPECT_GE(res.best_value, scenario::classical_bound(rac, d) - 1e-9);
    EXPECT_EQ(res.restart_values.size(), 32u);
  }
  const auto rac = scenario::make_rac_witness(2);
  const auto res = seesaw::seesaw(rac, 2, 16, kMaxIters, rng);
  const auto& s = res.best_strategy;
  EXPECT_LE(res.best_value, bounds::prep_compat_bound_2(s.preparations()).bound + 1e-8);
  EXPECT_LE(res.best_value, bounds::meas_compat_bound_2(s.measurement(0).observable(), s.measurement(1).observable()).bound + 1e-8);
}

TEST(seesaw, biased_values_and_overlaps) {
  quantum::Rng rng(21);
  for (int i = 0; i <= 10; ++i) {
    const double q = i / 10.0;
    const auto res = seesaw::seesaw(scenario::make_biased_rac_witness(q), 2, 32, kMaxIters, rng);
    EXPECT_NEAR(res.best_value, bounds::biased_max(q), 1e-6) << "q=" << q;
    const auto n0 = obs_bloch(res.best_strategy.measurement(0));
    const auto n1 = obs_bloch(res.best_strategy.measurement(1));
    const double norm = std::sqrt((n0[0] * n0[0] + n0[1] * n0[1] + n0[2] * n0[2]) * (n1[0] * n1[0] + n1[1] * n1[1] + n1[2] * n1[2]));
    EXPECT_NEAR((n0[0] * n1[0] + n0[1] * n1[1] + n0[2] * n1[2]) / norm, bounds::biased_optimal_overlap(q), 1e-4) << "q=" << q;
  }
}

TEST(seesaw, qutrit_dominance_per_jordan_form) {
  quantum::Rng rng(99);
  const auto rac = scenario::make_rac_witness(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int plus0 = 1 + trial % 2, plus1 = 1 + (trial / 2) % 2;
    const quantum::Observable m0 = quantum::random_projective_observable(3, plus0, rng);
    const quantum::Observable m1 = quantum::random_projective_observable(3, plus1, rng);
    const std::vector<Povm> povms{Povm::from_observable(m0), Povm::from_observable(m1)};
    const auto states = optimal_states_for_measurements(rac, povms);
    const double value = scenario::witness_value(rac, Strategy(states, povms));
    const auto jf = bounds::qutrit_jordan_form(m0, m1);
    ASSERT_TRUE(jf.has_value());
    EXPECT_LE(value, bounds::qutrit_bound(jf->alpha, jf->r, jf->s) + 1e-8);
  }
}

TEST(seesaw, deterministic_across_threads) {
  quantum::Rng a(5), b(5);
  const auto rac = scenario::make_rac_witness(2);
  const auto r1 = seesaw::seesaw(rac, 3, 8, kMaxIters, a, 1);
  const auto r2 = seesaw::seesaw(rac, 3, 8, kMaxIters, b, 3);
  EXPECT_EQ(r1.restart_values, r2.restart_values);
}

TEST(seesaw, region_sweep_soundness) {
  quantum::Rng rng(17);
  const auto rac = scenario::make_rac_witness(2);
  const auto points = region_sweep(rac, scenario::rac2_ideal_strategy(), 300, rng);
  ASSERT_EQ(points.size(), 300u);
  for (const auto& p : points) {
    EXPECT_GE(p.f_states, fidelity::linear_lower_bound(p.a2) - 1e-7);
    EXPECT_GE(p.f_meas, fidelity::linear_lower_bound(p.a2) - 1e-7);
  }
  EXPECT_THROW(region_sweep(rac, scenario::rac2_ideal_strategy(), 0, rng), DomainError);
}
