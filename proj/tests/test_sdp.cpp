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

#include "sdi/sdp.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "sdi/fidelity.hpp"

using namespace sdi;
using namespace sdi::sdp;

namespace {

const double kQ2 = 0.5 * (1 + 1 / std::sqrt(2.0));

Observable random_observable(int d, Rng& rng) {
  const int plus = std::uniform_int_distribution<int>(1, d - 1)(rng);
  return quantum::random_projective_observable(d, plus, rng);
}

// Ancilla block (1 (x) <i|) M (1 (x) |j>) for system (x) qubit ordering.
Eigen::MatrixXcd ancilla_block(const ComplexMatrix& m, int d, int i, int j) {
  Eigen::MatrixXcd out(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(r, c) = m(2 * r + i, 2 * c + j);
  return out;
}

// Ancilla state Tr_sys[S (rho (x) |0><0|) S^dagger].
Eigen::Matrix2cd extracted_state(const ComplexMatrix& s, const State& rho) {
  const int d = rho.dim();
  const ComplexMatrix in = linalg::kron(rho.rho().matrix(), ComplexMatrix{{1, 0}, {0, 0}});
  const Eigen::MatrixXcd out = (s * in * s.adjoint()).eigen();
  Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int r = 0; r < d; ++r) a(i, k) += out(2 * r + i, 2 * r + k);
  return a;
}

SdpProblem lambda_max_problem(const HermitianOperator& h) {
  SdpProblem p;
  p.f0 = {-embed_hermitian(h)};
  p.f = {{Eigen::MatrixXd::Identity(2 * h.dim(), 2 * h.dim())}};
  p.c = Eigen::VectorXd::Ones(1);
  return p;
}

struct RacFixture {
  Witness w = scenario::make_rac_witness(2);
  std::vector<State> ideal = swap_frame_ideal_states(w);
  SwapProblem problem;
  RacFixture() {
    Rng rng(11);
    problem = build_swap_problem(w, ideal, 2, rng);
  }
};

const RacFixture& rac() {
  static const RacFixture f;
  return f;
}

}  // namespace

TEST(sdp_words, reduce_and_adjoint) {
  EXPECT_EQ(reduce({0, 0, 1}), (Word{1}));
  EXPECT_EQ(reduce({1, 0, 0, 1}), (Word{}));
  EXPECT_EQ(reduce({-1, -1}), (Word{-1, -1}));
  EXPECT_EQ(adjoint({0, 1, -2}), (Word{-2, 1, 0}));
  EXPECT_EQ(to_string(Word{}), "1");
  EXPECT_EQ(to_string({0, 1, state_letter(2)}), "B0 B1 rho2");
}

TEST(sdp_swap, operator_swaps_qubits_for_sigma_z_sigma_x) {
  const Observable b0{HermitianOperator(linalg::pauli_z())};
  const Observable b1{HermitianOperator(linalg::pauli_x())};
  const ComplexMatrix s = swap_operator(b0, b1);
  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  EXPECT_LT((s.eigen() - swap).norm(), 1e-12);
}

TEST(sdp_swap, T_polynomials_match_explicit_operator) {
  Rng rng(3);
  for (int d : {2, 3, 4}) {
    const Observable b0 = random_observable(d, rng);
    const Observable b1 = random_observable(d, rng);
    const ComplexMatrix s = swap_operator(b0, b1);
    EXPECT_LT((s.eigen() * s.eigen().adjoint() - Eigen::MatrixXcd::Identity(2 * d, 2 * d)).norm(), 1e-10);
    const SwapTable t = swap_T_operators(b0, b1);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        const Eigen::MatrixXcd si = 2.0 * ancilla_block(s, d, i, 0);
        const Eigen::MatrixXcd sk = 2.0 * ancilla_block(s, d, k, 0);
        EXPECT_LT((t[i][k].eigen() - si.adjoint() * sk).norm(), 1e-10) << "d=" << d << " i=" << i << " k=" << k;
      }
      sum += t[i][i].eigen();
    }
    EXPECT_LT((sum - 4.0 * Eigen::MatrixXcd::Identity(d, d)).norm(), 1e-10);
  }
}

TEST(sdp_levels, sizes_and_locate) {
  const auto p = product_level(4);
  EXPECT_EQ(p.words.size(), 25u);
  const auto c = compact_level(3);
  EXPECT_EQ(c.words.size(), 20u);
  for (const auto& level : {p, c}) {
    for (int x = 0; x < level.num_states; ++x) {
      for (const Word& w : {Word{state_letter(x)}, Word{0, state_letter(x)}, Word{0, 1, 0, state_letter(x)},
                            Word{1, 0, state_letter(x)}}) {
        const auto [a, b] = locate(level, w);
        EXPECT_EQ(reduce(concat(adjoint(level.words[a]), level.words[b])), reduce(w));
      }
    }
  }
  EXPECT_THROW(locate(c, {0, 1, 0, 1, 0, state_letter(0)}), DomainError);
}

TEST(sdp_moments, psd_normalized_and_witness_consistent) {
  Rng rng(5);
  const auto w = scenario::make_rac_witness(2);
  const auto level = product_level(4);
  const auto f = witness_functional(level, w);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Realization r = sample_realization(4, 2, d, rng);
      const MomentMatrix m = moment_matrix(level, r);
      EXPECT_NEAR(m.chi(0, 0).real(), d, 1e-12);
      EXPECT_GT(linalg::lambda_min(m.chi), -1e-10);
      std::vector<quantum::Povm> meas;
      for (const auto& o : r.observables) meas.push_back(quantum::Povm::from_observable(o));
      const scenario::Strategy s(r.states, meas);
      EXPECT_NEAR(f.evaluate(m.chi), scenario::witness_value(w, s), 1e-12);
    }
  }
}

TEST(sdp_moments, fidelity_functional_matches_explicit_extraction) {
  Rng rng(9);
  for (const auto& w : {scenario::make_rac_witness(2), scenario::make_example2_witness()}) {
    const auto level = default_level(w);
    const auto ideal = swap_frame_ideal_states(w);
    const auto f = swap_fidelity_functional(level, ideal);
    for (int d : {2, 3}) {
      const Realization r = sample_realization(level.num_states, 2, d, rng);
      const ComplexMatrix s = swap_operator(r.observables[0], r.observables[1]);
      double direct = 0.0;
      for (int x = 0; x < level.num_states; ++x) {
        direct += (ideal[x].rho().matrix().eigen() * extracted_state(s, r.states[x])).trace().real();
      }
      direct /= level.num_states;
      EXPECT_NEAR(f.evaluate(moment_matrix(level, r).chi), direct, 1e-12);
    }
  }
}

TEST(sdp_moments, ideal_qubit_realization_has_unit_fidelity) {
  const auto w = scenario::make_rac_witness(2);
  const auto ideal = swap_frame_ideal_states(w);
  Realization r;
  r.states = ideal;
  r.observables = {Observable(HermitianOperator(linalg::pauli_z())), Observable(HermitianOperator(linalg::pauli_x()))};
  const auto level = product_level(4);
  EXPECT_NEAR(swap_fidelity_functional(level, ideal).evaluate(moment_matrix(level, r).chi), 1.0, 1e-12);
  EXPECT_NEAR(witness_functional(level, w).evaluate(moment_matrix(level, r).chi), kQ2, 1e-12);
}

TEST(sdp_span, vectorize_is_isometric_and_invertible) {
  Rng rng(2);
  const auto a = sample_moment_matrix(compact_level(3), 2, rng).chi;
  const auto b = sample_moment_matrix(compact_level(3), 2, rng).chi;
  EXPECT_NEAR(vectorize(a).dot(vectorize(b)), linalg::trace_product(a, b), 1e-10);
  EXPECT_LT((unvectorize(vectorize(a), a.dim()).matrix().eigen() - a.matrix().eigen()).norm(), 1e-12);
}

TEST(sdp_span, rank_independent_of_seed_and_contains_samples) {
  const auto level = product_level(4);
  int first_rank = -1;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    const auto s = sample_affine_span(level, 2, rng);
    if (first_rank < 0) first_rank = s.span.rank();
    EXPECT_EQ(s.span.rank(), first_rank);
    const Eigen::VectorXd fresh = vectorize(sample_moment_matrix(level, 2, rng).chi) - s.span.offset;
    const Eigen::VectorXd resid = fresh - s.span.basis * (s.span.basis.transpose() * fresh);
    EXPECT_LT(resid.norm(), 1e-8);
  }
  EXPECT_GT(first_rank, 0);
}

TEST(sdp_span, thread_count_does_not_change_span) {
  const auto level = compact_level(3);
  SpanOptions one, four;
  four.threads = 4;
  Rng r1(8), r4(8);
  const auto a = sample_affine_span(level, 2, r1, one);
  const auto b = sample_affine_span(level, 2, r4, four);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ((a.span.basis - b.span.basis).norm(), 0.0);
}

TEST(sdp_span, budget_exhaustion_throws) {
  Rng rng(1);
  SpanOptions o;
  o.budget = 10;
  EXPECT_THROW(sample_affine_span(product_level(4), 2, rng, o), BudgetError);
}

TEST(sdp_solver, lambda_max_matches_eigensolver) {
  Rng rng(4);
  for (int d : {2, 3, 5, 8}) {
    const auto u = quantum::random_unitary(d, rng);
    Eigen::VectorXd ev = Eigen::VectorXd::LinSpaced(d, -1.0, 2.0);
    const HermitianOperator h(Eigen::MatrixXcd(u.eigen() * ev.cast<linalg::cplx>().asDiagonal() * u.eigen().adjoint()));
    const auto r = sdp_solve(lambda_max_problem(h));
    ASSERT_EQ(r.status, SdpStatus::optimal);
    const double oracle = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h.matrix().eigen()).eigenvalues().maxCoeff();
    EXPECT_NEAR(r.value, oracle, 1e-6);
  }
}

TEST(sdp_solver, two_by_two_analytic) {
  // min y1 + y2 s.t. [[y1, 1], [1, y2]] >= 0 has value 2.
  SdpProblem p;
  Eigen::MatrixXd f0(2, 2), f1(2, 2), f2(2, 2);
  f0 << 0, 1, 1, 0;
  f1 << 1, 0, 0, 0;
  f2 << 0, 0, 0, 1;
  p.f0 = {f0};
  p.f = {{f1}, {f2}};
  p.c = Eigen::Vector2d(1, 1);
  const auto r = sdp_solve(p);
  ASSERT_EQ(r.status, SdpStatus::optimal);
  EXPECT_NEAR(r.value, 2.0, 1e-6);
  EXPECT_NEAR(r.y(0), 1.0, 1e-4);
  EXPECT_NEAR(r.y(1), 1.0, 1e-4);
}

TEST(sdp_solver, detects_infeasible_and_unbounded) {
  SdpProblem infeasible;  // -1 + 0 y >= 0 with a second block y >= 0
  infeasible.f0 = {Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Zero(1, 1)};
  infeasible.f = {{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Ones(1, 1)}};
  infeasible.c = Eigen::VectorXd::Ones(1);
  EXPECT_EQ(sdp_solve(infeasible).status, SdpStatus::infeasible);

  SdpProblem unbounded;  // min -y s.t. y >= 0
  unbounded.f0 = {Eigen::MatrixXd::Zero(1, 1)};
  unbounded.f = {{Eigen::MatrixXd::Ones(1, 1)}};
  unbounded.c = -Eigen::VectorXd::Ones(1);
  EXPECT_EQ(sdp_solve(unbounded).status, SdpStatus::unbounded);
}

TEST(sdp_solver, no_variables_checks_f0) {
  SdpProblem p;
  p.f0 = {Eigen::MatrixXd::Identity(2, 2)};
  p.c0 = 0.25;
  auto r = sdp_solve(p);
  EXPECT_EQ(r.status, SdpStatus::optimal);
  EXPECT_DOUBLE_EQ(r.value, 0.25);
  p.f0[0](1, 1) = -1;
  EXPECT_EQ(sdp_solve(p).status, SdpStatus::infeasible);
}

TEST(sdp_swap_bound, rac_reaches_one_at_maximum) {
  const auto r = solve_swap(rac().problem, kQ2);
  EXPECT_GE(r.bound, 0.999);
  EXPECT_LE(r.bound, 1.0 + 1e-4);
}

TEST(sdp_swap_bound, rac_crosses_classical_fidelity_near_0_802) {
  const auto lo = solve_swap(rac().problem, 0.797);
  const auto hi = solve_swap(rac().problem, 0.807);
  ASSERT_EQ(lo.status, SdpStatus::optimal);
  ASSERT_EQ(hi.status, SdpStatus::optimal);
  EXPECT_LT(lo.bound, 0.75);
  EXPECT_GT(hi.bound, 0.75);
}

TEST(sdp_swap_bound, monotone_in_witness_value) {
  double prev = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const double a = 0.75 + 0.01 * i;
    const auto r = solve_swap(rac().problem, a);
    ASSERT_EQ(r.status, SdpStatus::optimal) << a;
    EXPECT_GE(r.bound, prev - 1e-6) << a;
    prev = r.bound;
  }
}

TEST(sdp_swap_bound, infeasible_beyond_quantum_maximum) {
  const auto r = solve_swap(rac().problem, 1.1);
  EXPECT_EQ(r.status, SdpStatus::infeasible);
  EXPECT_TRUE(std::isnan(r.bound));
}

TEST(sdp_swap_bound, deterministic_for_fixed_seed) {
  const auto w = scenario::make_rac_witness(2);
  const auto ideal = swap_frame_ideal_states(w);
  Rng r1(21), r2(21);
  const auto a = swap_fidelity_bound(w, ideal, 0.81, 2, r1);
  const auto b = swap_fidelity_bound(w, ideal, 0.81, 2, r2);
  EXPECT_EQ(a.bound, b.bound);
  EXPECT_EQ(a.rank, b.rank);
}

TEST(sdp_swap_bound, example2_reaches_one_at_maximum) {
  const auto w = scenario::make_example2_witness();
  const auto ideal = swap_frame_ideal_states(w);
  Rng rng(13);
  const auto r = swap_fidelity_bound(w, ideal, 5.0, 2, rng);
  EXPECT_GE(r.bound, 0.999);
  EXPECT_LE(r.bound, 1.0 + 1e-4);
}

TEST(sdp_swap_bound, below_direct_fidelity_of_explicit_strategies) {
  const auto& f = rac();
  Rng rng(17);
  for (double phi : {0.1, 0.3, 0.6}) {
    const auto s = fidelity::conjectured_states_strategy(phi);
    const double a = scenario::witness_value(f.w, s);
    const auto direct = fidelity::avg_fidelity_states(s, f.ideal, 8, rng);
    const auto r = solve_swap(f.problem, a);
    EXPECT_LE(r.bound, direct.avg_fidelity + 1e-5) << phi;
  }
}

TEST(sdp_swap_frame, ideal_states_are_optimal_for_sigma_z_sigma_x) {
  const auto w = scenario::make_rac_witness(2);
  const auto ideal = swap_frame_ideal_states(w);
  const std::vector<quantum::Povm> meas{
      quantum::Povm::from_observable(Observable(HermitianOperator(linalg::pauli_z()))),
      quantum::Povm::from_observable(Observable(HermitianOperator(linalg::pauli_x())))};
  EXPECT_NEAR(scenario::witness_value(w, scenario::Strategy(ideal, meas)), kQ2, 1e-12);
}

TEST(sdp_swap_frame, alignment_recovers_swap_frame_from_rotated_states) {
  const auto w = scenario::make_example2_witness();
  const auto target = swap_frame_ideal_states(w);
  const auto triangle = scenario::example2_ideal_strategy().preparations();
  const auto aligned = align_to_swap_frame(w, triangle);
  for (std::size_t x = 0; x < target.size(); ++x) {
    EXPECT_NEAR(quantum::fidelity_to_pure(aligned[x], target[x]), 1.0, 1e-12);
  }
}

TEST(sdp_swap_bound, example2_triangle_references_reach_one) {
  const auto w = scenario::make_example2_witness();
  const auto triangle = scenario::example2_ideal_strategy().preparations();
  Rng rng(14);
  const auto r = swap_fidelity_bound(w, triangle, 5.0, 2, rng);
  EXPECT_GE(r.bound, 0.999);
}

TEST(sdp_swap_bound, example2_monotone_on_grid) {
  const auto w = scenario::make_example2_witness();
  const auto triangle = scenario::example2_ideal_strategy().preparations();
  Rng rng(15);
  const auto p = build_swap_problem(w, triangle, 2, rng);
  double prev = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const double a = 4.0 + 0.1 * i;
    const auto r = solve_swap(p, a);
    ASSERT_EQ(r.status, SdpStatus::optimal) << a;
    EXPECT_GE(r.bound, prev - 1e-6) << a;
    prev = r.bound;
  }
}
