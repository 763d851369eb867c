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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sdi/scenario.hpp"

using namespace sdi;
using namespace sdi::bounds;
using linalg::HermitianOperator;
using quantum::Bloch;
using quantum::Rng;

namespace {

const double kQ2 = 0.5 * (1 + 1 / std::sqrt(2.0));

Observable pauli_obs(const Bloch& n, double id = 0.0) {
  return Observable(quantum::bloch_operator(n, id));
}

State mixed_state(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = u(rng);
  const auto psi = quantum::random_pure_state(2, rng);
  return State(p * psi.rho() + (1 - p) * State::maximally_mixed(2).rho());
}

Observable random_qubit_observable(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 3);
  switch (kind(rng)) {
    case 0:
      return quantum::random_projective_observable(2, 1, rng);
    case 1:
      return Observable(u(rng) >= 0 ? HermitianOperator::identity(2) : -1.0 * HermitianOperator::identity(2));
    default: {
      // Noisy, biased observable: spectrum inside [-1, 1].
      const auto m = quantum::random_projective_observable(2, 1, rng);
      const double a = u(rng);
      const double b = (1 - std::abs(a)) * u(rng);
      return Observable(b * m.op() + a * HermitianOperator::identity(2));
    }
  }
}

std::vector<State> states_from_bloch(const std::vector<Bloch>& m) {
  std::vector<State> out;
  for (const auto& v : m) out.push_back(quantum::bloch_to_state(v));
  return out;
}

}  // namespace

TEST(bounds, prep_2_examples) {
  const auto ideal = scenario::rac2_ideal_strategy();
  const auto r = prep_compat_bound_2(ideal.preparations());
  EXPECT_NEAR(r.bound, kQ2, 1e-14);
  EXPECT_NEAR(r.beta, 4.0, 1e-14);
  EXPECT_NEAR(r.alpha, 0.0, 1e-14);

  const std::vector<State> mixed(4, State::maximally_mixed(2));
  const auto m = prep_compat_bound_2(mixed);
  EXPECT_NEAR(m.bound, 0.5, 1e-15);
  EXPECT_NEAR(m.beta, 0.0, 1e-15);

  const double th = std::numbers::pi / 3;
  const auto angled = states_from_bloch({{1, 0, 0}, {std::cos(th), 0, std::sin(th)},
                                         {-std::cos(th), 0, -std::sin(th)}, {-1, 0, 0}});
  EXPECT_NEAR(prep_compat_bound_2(angled).bound,
              0.5 + (std::sqrt(1.5) + std::sqrt(0.5)) / (4 * std::sqrt(2.0)), 1e-12);

  EXPECT_THROW(prep_compat_bound_2(std::vector<State>(3, State::maximally_mixed(2))), DimensionError);
  EXPECT_THROW(prep_compat_bound_2(std::vector<State>(4, State::maximally_mixed(3))), DimensionError);
}

TEST(bounds, meas_2_examples) {
  EXPECT_NEAR(meas_compat_bound_2(pauli_obs({1, 0, 0}), pauli_obs({0, 0, 1})).bound, kQ2, 1e-14);
  const auto same = meas_compat_bound_2(pauli_obs({0, 0, 1}), pauli_obs({0, 0, 1}));
  EXPECT_NEAR(same.mu, 4, 1e-14);
  EXPECT_NEAR(same.nu, 4, 1e-14);
  EXPECT_NEAR(same.bound, 0.75, 1e-14);
  const auto with_id = meas_compat_bound_2(pauli_obs({1, 0, 0}), Observable(HermitianOperator::identity(2)));
  EXPECT_NEAR(with_id.eta_plus, 2, 1e-14);
  EXPECT_NEAR(with_id.eta_minus, -2, 1e-14);
  EXPECT_NEAR(with_id.bound, 0.75, 1e-14);
}

TEST(bounds, radicand_clamp) {
  EXPECT_EQ(clamped_sqrt(-5e-10), 0.0);
  EXPECT_THROW(clamped_sqrt(-1e-6), DomainError);
  EXPECT_DOUBLE_EQ(clamped_sqrt(4.0), 2.0);
}

TEST(bounds, soundness_on_random_strategies) {
  Rng rng(2024);
  const auto rac = scenario::make_rac_witness(2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<State> states;
    for (int x = 0; x < 4; ++x) states.push_back(mixed_state(rng));
    const auto m0 = random_qubit_observable(rng);
    const auto m1 = random_qubit_observable(rng);
    const scenario::Strategy s(states, {quantum::Povm::from_observable(m0), quantum::Povm::from_observable(m1)});
    const double a = scenario::witness_value(rac, s);
    EXPECT_LE(a, prep_compat_bound_2(states).bound + 1e-9);
    EXPECT_LE(a, meas_compat_bound_2(m0, m1).bound + 1e-9);
  }
}

TEST(bounds, n_bounds_agree_with_two_input_bounds) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<State> states;
    for (int x = 0; x < 4; ++x) states.push_back(mixed_state(rng));
    EXPECT_NEAR(prep_compat_bound_N(states, 2), prep_compat_bound_2(states).bound, 1e-12);
    // The two measurement bounds coincide for traceless observables.
    std::vector<Observable> obs{quantum::random_projective_observable(2, 1, rng),
                                quantum::random_projective_observable(2, 1, rng)};
    EXPECT_NEAR(meas_compat_bound_N(obs), meas_compat_bound_2(obs[0], obs[1]).bound, 1e-12);
  }
}

TEST(bounds, n_bounds_examples) {
  const double r3 = 1 / std::sqrt(3.0);
  std::vector<Bloch> cube;
  for (int x = 0; x < 8; ++x) {
    cube.push_back({scenario::input_bit(x, 0, 3) ? -r3 : r3, scenario::input_bit(x, 1, 3) ? -r3 : r3,
                    scenario::input_bit(x, 2, 3) ? -r3 : r3});
  }
  EXPECT_NEAR(prep_compat_bound_N(states_from_bloch(cube), 3), 0.5 * (1 + r3), 1e-12);

  const std::vector<Observable> paulis{pauli_obs({1, 0, 0}), pauli_obs({0, 1, 0}), pauli_obs({0, 0, 1})};
  EXPECT_NEAR(meas_compat_bound_N(paulis), 0.5 * (1 + r3), 1e-12);
  const std::vector<Observable> zz{pauli_obs({0, 0, 1}), pauli_obs({0, 0, 1})};
  EXPECT_NEAR(meas_compat_bound_N(zz), 0.75, 1e-14);

  // Classical bit encodings stay at or below C_2.
  const auto classical = states_from_bloch({{0, 0, 1}, {0, 0, 1}, {0, 0, -1}, {0, 0, -1}});
  EXPECT_LE(prep_compat_bound_N(classical, 2), 0.75 + 1e-14);
  EXPECT_THROW(prep_compat_bound_N(classical, 3), DimensionError);
}

TEST(bounds, biased_examples) {
  EXPECT_NEAR(biased_optimal_overlap(0.5), 0.0, 1e-15);
  EXPECT_NEAR(biased_max(0.5), kQ2, 1e-15);
  EXPECT_NEAR(biased_optimal_overlap(1.0), 1.0, 1e-15);
  EXPECT_NEAR(biased_max(1.0), 1.0, 1e-15);
  EXPECT_NEAR(biased_optimal_overlap(0.0), -1.0, 1e-15);
  EXPECT_NEAR(biased_max(0.0), 1.0, 1e-15);
  EXPECT_THROW(biased_max(-0.1), DomainError);
  EXPECT_NEAR(biased_bound(0.5, pauli_obs({1, 0, 0}), pauli_obs({0, 0, 1})), kQ2, 1e-14);
}

TEST(bounds, biased_bound_never_exceeds_max) {
  Rng rng(8);
  for (int qi = 0; qi <= 20; ++qi) {
    const double q = qi / 20.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto m0 = random_qubit_observable(rng);
      const auto m1 = random_qubit_observable(rng);
      EXPECT_LE(biased_bound(q, m0, m1), biased_max(q) + 1e-12);
    }
    const double c = biased_optimal_overlap(q);
    const Observable n0 = pauli_obs({0, 0, 1});
    const Observable n1 = pauli_obs({std::sqrt(std::max(0.0, 1 - c * c)), 0, c});
    EXPECT_NEAR(biased_bound(q, n0, n1), biased_max(q), 1e-12);
  }
}

TEST(bounds, qutrit_examples) {
  EXPECT_NEAR(qutrit_bound(std::atan(2.0), 1, 1), qutrit_max(), 1e-12);
  EXPECT_NEAR(qutrit_bound(0.0, 1, 1), 0.75, 1e-15);
  EXPECT_NEAR(qutrit_bound(std::atan(0.5), 1, -1), qutrit_max(), 1e-12);
  EXPECT_NEAR(qutrit_max(), 0.904508, 1e-6);
  EXPECT_THROW(qutrit_bound(0.1, 0, 1), DomainError);
}

TEST(bounds, qutrit_jordan_form_recovers_parameters) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> ua(0.05, std::numbers::pi / 2 - 0.05);
    const double alpha = ua(rng);
    const int r = trial % 2 ? 1 : -1;
    const int s = trial % 3 ? 1 : -1;
    auto block = [&](double sign, int corner) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
      m.topLeftCorner(2, 2) = (std::cos(alpha) * linalg::pauli_x() + sign * std::sin(alpha) * linalg::pauli_z()).eigen();
      m(2, 2) = corner;
      return m;
    };
    const auto u = quantum::random_unitary(3, rng);
    const Observable m0(linalg::conjugate(u, HermitianOperator(block(1, r))));
    const Observable m1(linalg::conjugate(u, HermitianOperator(block(-1, s))));
    const auto jf = qutrit_jordan_form(m0, m1);
    ASSERT_TRUE(jf.has_value());
    EXPECT_NEAR(jf->alpha, alpha, 1e-7);
    EXPECT_EQ(jf->r, r);
    EXPECT_EQ(jf->s, s);
  }
  const Observable z3(HermitianOperator(Eigen::MatrixXcd(Eigen::Vector3cd(1, -1, 1).asDiagonal())));
  EXPECT_FALSE(qutrit_jordan_form(z3, z3).has_value());
}
