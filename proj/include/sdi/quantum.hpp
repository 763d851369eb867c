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

// States, observables, POVMs, channels and random sampling.

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sdi/linalg.hpp"

namespace sdi::quantum {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::CVector;
using linalg::HermitianOperator;

using Rng = std::mt19937_64;
using Bloch = std::array<double, 3>;

inline constexpr double kStateTol = 1e-10;
inline constexpr double kObservableTol = 1e-9;

/// Density operator: unit trace, positive semidefinite.
class State {
 public:
  explicit State(HermitianOperator rho);
  static State from_ket(const CVector& psi);
  static State maximally_mixed(int dim);

  int dim() const noexcept { return rho_.dim(); }
  const HermitianOperator& rho() const noexcept { return rho_; }
  double purity() const;

 private:
  HermitianOperator rho_;
};

/// Binary observable M = M^0 - M^1 with spectrum in [-1, 1].
class Observable {
 public:
  explicit Observable(HermitianOperator m);
  int dim() const noexcept { return m_.dim(); }
  const HermitianOperator& op() const noexcept { return m_; }

 private:
  HermitianOperator m_;
};

class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> effects);
  /// Two-outcome POVM {(1 + M)/2, (1 - M)/2}.
  static Povm from_observable(const Observable& m);
  /// Rank-one projective measurement in the columns of an orthonormal basis.
  static Povm from_basis(const ComplexMatrix& basis, std::span<const int> outcome_of_column,
                         int num_outcomes);

  int dim() const { return effects_.front().dim(); }
  int num_outcomes() const noexcept { return static_cast<int>(effects_.size()); }
  const HermitianOperator& effect(int b) const { return effects_.at(b); }
  const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }
  /// M^0 - M^1; defined for two-outcome POVMs only.
  Observable observable() const;

 private:
  std::vector<HermitianOperator> effects_;
};

enum class Picture { schrodinger, heisenberg };

/// CPTP map in Kraus form. apply() acts in the stored picture; dual() flips
/// the picture so that Tr(L[rho] A) == Tr(rho L.dual()[A]).
class Channel {
 public:
  explicit Channel(std::vector<ComplexMatrix> kraus, Picture picture = Picture::schrodinger);

  int dim() const { return kraus_.front().dim(); }
  Picture picture() const noexcept { return picture_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  Channel dual() const;
  bool is_unital(double tol = 1e-10) const;

  ComplexMatrix apply(const ComplexMatrix& x) const;
  HermitianOperator apply(const HermitianOperator& x) const;
  State apply(const State& rho) const;

 private:
  std::vector<ComplexMatrix> kraus_;
  Picture picture_;
};

State bloch_to_state(const Bloch& m);
Bloch state_to_bloch(const State& rho);
/// n with M = n0 1 + n.sigma; returns only the traceless part n.
Bloch observable_to_bloch(const HermitianOperator& m);
HermitianOperator bloch_operator(const Bloch& n, double identity_part = 0.0);

/// c(theta) for the dephasing extraction channel.
double dephasing_coefficient(double theta, double s);
/// Pauli axis Gamma(theta): sigma_x on [0, pi/4], sigma_z on (pi/4, pi/2].
ComplexMatrix dephasing_axis(double theta);
/// rho -> (1+c)/2 rho + (1-c)/2 Gamma rho Gamma.
Channel dephasing_channel(double theta, double s);

/// Tr(sigma * ideal); ideal must be pure.
double fidelity_to_pure(const State& ideal, const State& sigma);

ComplexMatrix random_unitary(int dim, Rng& rng);
State random_pure_state(int dim, Rng& rng);
/// U diag(+1 x num_plus, -1 x rest) U^dagger with U Haar distributed.
Observable random_projective_observable(int dim, int num_plus, Rng& rng);
/// Derives an independent stream from a master generator.
Rng derive_stream(Rng& master);

}  // namespace sdi::quantum
