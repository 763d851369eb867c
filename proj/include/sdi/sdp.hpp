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

// Swap-operator fidelity bounds over sampled dimension-bounded moment
// matrices, and a small dense primal-dual interior-point SDP solver.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "sdi/scenario.hpp"

namespace sdi::sdp {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using quantum::Observable;
using quantum::Rng;
using quantum::State;
using scenario::Witness;

// ---------------------------------------------------------------- words

/// Operator word read left to right. Letters y >= 0 are observables B_y,
/// letters -(x + 1) are preparations rho_x.
using Word = std::vector<int>;

inline int observable_letter(int y) { return y; }
inline int state_letter(int x) { return -(x + 1); }

/// Reverses the word (all letters are Hermitian) and cancels B_y B_y.
Word adjoint(const Word& w);
Word reduce(const Word& w);
Word concat(const Word& a, const Word& b);
std::string to_string(const Word& w);

struct WordTerm {
  double coef = 0.0;
  Word word;
};
using Polynomial = std::vector<WordTerm>;

// ---------------------------------------------------------------- swap

/// T_00 = 2(1 + B0), T_01 = B1(1 - B0) + B0 B1 (1 - B0),
/// T_10 = B1(1 + B0) - B0 B1 (1 + B0), T_11 = 2(1 - B0).
/// The extracted fidelity is sum_ik Tr(T_ik rho) <i|ideal|k> / 4.
std::array<std::array<Polynomial, 2>, 2> swap_T_polynomials();

using SwapTable = std::array<std::array<ComplexMatrix, 2>, 2>;
SwapTable swap_T_operators(const Observable& b0, const Observable& b1);

/// S = U V U on system (x) ancilla qubit with U = 1 (x) |0><0| + B1 (x) |1><1|
/// and V = (1 + B0)/2 (x) 1 + (1 - B0)/2 (x) sigma_x.
ComplexMatrix swap_operator(const Observable& b0, const Observable& b1);

// ---------------------------------------------------------------- moments

struct MomentLevel {
  std::string name;
  int num_states = 0;
  int num_observables = 2;
  std::vector<Word> q_words;  // empty for levels that are not a product
  std::vector<Word> r_words;
  std::vector<Word> words;
};

/// Words Q_i R_j with Q = (1, B0, B1, B0 B1, B1 B0) and R = (1, rho_x ...).
MomentLevel product_level(int num_states);
/// 1, rho_x, B_y, B_y rho_x, B0 B1, B1 B0, B0 B1 rho_x, B1 B0 rho_x.
MomentLevel compact_level(int num_states);

enum class SampleMode { complex, real };

struct Realization {
  std::vector<State> states;
  std::vector<Observable> observables;
};

/// Random pure states and random projective observables (a trivial +-1
/// observable with probability 0.2, otherwise a random nontrivial split).
Realization sample_realization(int num_states, int num_observables, int d, Rng& rng,
                               SampleMode mode = SampleMode::complex);

ComplexMatrix word_operator(const Word& w, const Realization& r);

struct MomentMatrix {
  std::vector<Word> words;
  HermitianOperator chi;
};

/// chi_ab = Tr(w_a^dagger w_b).
MomentMatrix moment_matrix(const MomentLevel& level, const Realization& r);
MomentMatrix sample_moment_matrix(const MomentLevel& level, int d, Rng& rng,
                                  SampleMode mode = SampleMode::complex);

/// Index pair (a, b) with reduce(w_a^dagger w_b) == reduce(target).
/// Throws DomainError when the level does not contain the word.
std::pair<int, int> locate(const MomentLevel& level, const Word& target);

/// Linear functional Re sum_t coef_t chi_{a_t b_t}.
struct MomentFunctional {
  std::vector<double> coef_re;
  std::vector<double> coef_im;
  std::vector<std::pair<int, int>> entries;
  void add(std::pair<int, int> entry, linalg::cplx coef);
  double evaluate(const HermitianOperator& chi) const;
};

/// Witness value in moments, P(b|x,y) = (Tr rho_x + (-1)^b Tr(B_y rho_x))/2.
MomentFunctional witness_functional(const MomentLevel& level, const Witness& w);
/// Swap-extracted average fidelity against pure reference states.
MomentFunctional swap_fidelity_functional(const MomentLevel& level,
                                          std::span<const State> ideal_states);

// ---------------------------------------------------------------- span

/// Frobenius-isometric real coordinates of a Hermitian n x n matrix.
Eigen::VectorXd vectorize(const HermitianOperator& h);
HermitianOperator unvectorize(const Eigen::VectorXd& v, int n);

struct AffineSpan {
  int n = 0;                // matrix size
  Eigen::VectorXd offset;   // vectorized first sample
  Eigen::MatrixXd basis;    // orthonormal columns
  int rank() const { return static_cast<int>(basis.cols()); }
  HermitianOperator point(const Eigen::VectorXd& coords) const;
};

inline constexpr double kSpanTol = 1e-9;

/// offset = first sample, basis = orthonormalized differences.
AffineSpan affine_span(const std::vector<MomentMatrix>& samples, double tol = kSpanTol);

struct SpanOptions {
  int stable_window = 20;
  int budget = 2000;
  double tol = kSpanTol;
  SampleMode mode = SampleMode::complex;
  int threads = 1;
};

struct SampledSpan {
  AffineSpan span;
  int samples = 0;
};

/// Samples until the rank has not grown for `stable_window` consecutive
/// samples. Throws BudgetError when `budget` samples do not suffice.
SampledSpan sample_affine_span(const MomentLevel& level, int d, Rng& rng, const SpanOptions& opts = {});

// ---------------------------------------------------------------- solver

/// min c0 + c^T y  subject to  F0 + sum_k y_k F_k >= 0 (block diagonal).
struct SdpProblem {
  std::vector<Eigen::MatrixXd> f0;                // one entry per block
  std::vector<std::vector<Eigen::MatrixXd>> f;    // f[k][block]
  Eigen::VectorXd c;
  double c0 = 0.0;
  int num_vars() const { return static_cast<int>(f.size()); }
};

/// [[Re H, -Im H], [Im H, Re H]].
Eigen::MatrixXd embed_hermitian(const HermitianOperator& h);

enum class SdpStatus { optimal, infeasible, unbounded, max_iterations };
std::string to_string(SdpStatus s);

struct SdpOptions {
  int max_iters = 200;
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  double infeas_tol = 1e-5;  // certificate ratio for infeasible or unbounded
  double step_fraction = 0.98;
};

struct SdpResult {
  SdpStatus status = SdpStatus::max_iterations;
  double value = 0.0;        // c0 + c^T y
  double dual_value = 0.0;   // bound from the primal iterate
  Eigen::VectorXd y;
  double gap = 0.0;          // relative duality gap
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

/// Infeasible-start primal-dual path following with Nesterov-Todd scaling
/// and Mehrotra predictor-corrector steps.
SdpResult sdp_solve(const SdpProblem& problem, const SdpOptions& opts = {});

// ---------------------------------------------------------------- bound

/// Preparations optimal for B0 = sigma_z, B1 = sigma_x: top eigenvectors of
/// sum_{y,b} alpha_{xyb} M_y^b. The swap operator aligns to this frame.
std::vector<State> swap_frame_ideal_states(const Witness& w);

/// Qubit references rotated by the proper rotation that best maps their
/// Bloch vectors onto swap_frame_ideal_states(w). Fidelity is defined up
/// to a unitary, so the rotated set certifies the same quantity.
std::vector<State> align_to_swap_frame(const Witness& w, std::span<const State> ideal_states);

/// Level used for a witness: the product level for four preparations,
/// the compact level otherwise.
MomentLevel default_level(const Witness& w);

struct SwapProblem {
  MomentLevel level;
  AffineSpan span;
  int samples = 0;
  MomentFunctional objective;
  MomentFunctional witness;
};

SwapProblem build_swap_problem(const Witness& w, std::span<const State> ideal_states, int d, Rng& rng,
                               const SpanOptions& opts = {});
/// SDP in span coordinates: min objective s.t. chi >= 0 and witness >= a_star.
SdpProblem swap_sdp(const SwapProblem& p, double a_star);

struct SwapBoundResult {
  double a_star = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  int rank = 0;
  int samples = 0;
  SdpStatus status = SdpStatus::max_iterations;
  int iterations = 0;
};

SwapBoundResult solve_swap(const SwapProblem& p, double a_star, const SdpOptions& opts = {});
/// Lower bound on the average preparation fidelity at witness value a_star.
SwapBoundResult swap_fidelity_bound(const Witness& w, std::span<const State> ideal_states, double a_star,
                                    int d, Rng& rng, const SpanOptions& span_opts = {},
                                    const SdpOptions& sdp_opts = {});

}  // namespace sdi::sdp
