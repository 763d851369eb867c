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

#include <cmath>
#include <limits>
#include <optional>

#include "sdi/parallel.hpp"

namespace sdi::seesaw {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;

namespace {

std::vector<HermitianOperator> response_operators(const Witness& w, const std::vector<State>& states,
                                                  int y) {
  const int d = states.front().dim();
  std::vector<ComplexMatrix> z(w.num_outcomes(y), ComplexMatrix::zero(d));
  for (int x = 0; x < w.num_preparations(); ++x)
    for (int b = 0; b < w.num_outcomes(y); ++b) {
      const double a = w.alpha(x, y, b);
      if (a != 0.0) z[b] += a * states[x].rho().matrix();
    }
  std::vector<HermitianOperator> out;
  for (auto& m : z) out.emplace_back(m);
  return out;
}

Povm assign_basis(const ComplexMatrix& basis, const std::vector<HermitianOperator>& z) {
  const int d = basis.dim();
  std::vector<int> outcome(d, 0);
  for (int k = 0; k < d; ++k) {
    const linalg::CVector v = basis.eigen().col(k);
    double best = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < static_cast<int>(z.size()); ++b) {
      const double val = (v.adjoint() * z[b].matrix().eigen() * v)(0).real();
      if (val > best + 1e-15) {
        best = val;
        outcome[k] = b;
      }
    }
  }
  return Povm::from_basis(basis, outcome, static_cast<int>(z.size()));
}

double response_value(const Povm& p, const std::vector<HermitianOperator>& z) {
  double v = 0.0;
  for (int b = 0; b < p.num_outcomes(); ++b) v += linalg::trace_product(p.effect(b), z[b]);
  return v;
}

}  // namespace

std::vector<State> optimal_states_for_measurements(const Witness& w, const std::vector<Povm>& povms) {
  if (static_cast<int>(povms.size()) != w.num_measurements()) {
    throw DimensionError("one POVM per measurement input required");
  }
  const int d = povms.front().dim();
  std::vector<State> states;
  for (int x = 0; x < w.num_preparations(); ++x) {
    ComplexMatrix g = ComplexMatrix::zero(d);
    for (int y = 0; y < w.num_measurements(); ++y)
      for (int b = 0; b < w.num_outcomes(y); ++b) {
        const double a = w.alpha(x, y, b);
        if (a != 0.0) g += a * povms[y].effect(b).matrix();
      }
    const auto ed = linalg::eig_hermitian(HermitianOperator(g));
    states.push_back(State::from_ket(ed.vector(0)));
  }
  return states;
}

std::vector<Povm> optimal_measurements_for_states(const Witness& w, const std::vector<State>& states) {
  if (static_cast<int>(states.size()) != w.num_preparations()) {
    throw DimensionError("one state per preparation input required");
  }
  const int d = states.front().dim();
  std::vector<Povm> povms;
  for (int y = 0; y < w.num_measurements(); ++y) {
    const auto z = response_operators(w, states, y);
    const int nb = w.num_outcomes(y);
    if (nb == 1) {
      povms.emplace_back(std::vector<HermitianOperator>{HermitianOperator::identity(d)});
      continue;
    }
    if (nb == 2) {
      const auto ed = linalg::eig_hermitian(z[0] - z[1]);
      povms.push_back(assign_basis(ed.vectors, z));
      continue;
    }
    // Several outcomes: greedy assignment in each candidate eigenbasis.
    std::optional<Povm> best;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb; ++b) {
      auto p = assign_basis(linalg::eig_hermitian(z[b]).vectors, z);
      const double v = response_value(p, z);
      if (v > best_val + 1e-15) {
        best_val = v;
        best = std::move(p);
      }
    }
    povms.push_back(std::move(*best));
  }
  return povms;
}

SeesawRun seesaw_from_states(const Witness& w, std::vector<State> states, int max_iters, double tol) {
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  std::vector<double> values;
  auto povms = optimal_measurements_for_states(w, states);
  double current = scenario::witness_value(w, Strategy(states, povms));
  values.push_back(current);
  int it = 0;
  bool converged = false;
  while (it < max_iters) {
    ++it;
    auto next_states = optimal_states_for_measurements(w, povms);
    const double v_states = scenario::witness_value(w, Strategy(next_states, povms));
    values.push_back(v_states);
    auto next_povms = optimal_measurements_for_states(w, next_states);
    // Multi-outcome responses are greedy; never accept a decrease.
    double v_meas = scenario::witness_value(w, Strategy(next_states, next_povms));
    if (v_meas < v_states) {
      next_povms = povms;
      v_meas = v_states;
    }
    values.push_back(v_meas);
    states = std::move(next_states);
    povms = std::move(next_povms);
    const double gain = v_meas - current;
    current = v_meas;
    if (gain < tol) {
      converged = true;
      break;
    }
  }
  return SeesawRun{std::move(values), Strategy(std::move(states), std::move(povms)), it, converged};
}

SeesawResult seesaw(const Witness& w, int d, int restarts, int max_iters, Rng& rng, int threads) {
  if (d < 2) throw DomainError("seesaw needs dimension at least 2");
  if (restarts < 1) throw DomainError("restarts must be at least 1");
  std::vector<Rng> streams;
  for (int r = 0; r < restarts; ++r) streams.push_back(quantum::derive_stream(rng));

  std::vector<std::optional<SeesawRun>> runs(restarts);
  parallel_for(restarts, threads, [&](int r) {
    std::vector<State> start;
    for (int x = 0; x < w.num_preparations(); ++x) start.push_back(quantum::random_pure_state(d, streams[r]));
    runs[r] = seesaw_from_states(w, std::move(start), max_iters);
  });

  int best = 0;
  std::vector<double> values;
  int iterations = 0;
  for (int r = 0; r < restarts; ++r) {
    values.push_back(runs[r]->values.back());
    iterations += runs[r]->iterations;
    if (values[r] > values[best]) best = r;
  }
  return SeesawResult{values[best], runs[best]->strategy, iterations, std::move(values)};
}

std::vector<SweepPoint> region_sweep(const Witness& w, const Strategy& ideal, int samples, Rng& rng,
                                     int threads, int restarts) {
  if (samples < 1) throw DomainError("region_sweep needs at least one sample");
  scenario::check_compatible(w, ideal);
  std::vector<Rng> streams;
  for (int i = 0; i < samples; ++i) streams.push_back(quantum::derive_stream(rng));
  std::vector<SweepPoint> out(samples);
  parallel_for(samples, threads, [&](int i) {
    Rng& s = streams[i];
    std::vector<State> states;
    for (int x = 0; x < w.num_preparations(); ++x) states.push_back(quantum::random_pure_state(ideal.dim(), s));
    const Strategy strategy(states, optimal_measurements_for_states(w, states));
    out[i].a2 = scenario::witness_value(w, strategy);
    out[i].f_states = fidelity::avg_fidelity_states(strategy, ideal.preparations(), restarts, s).avg_fidelity;
    out[i].f_meas = fidelity::avg_fidelity_measurements(strategy, ideal.measurements(), restarts, s).avg_fidelity;
  });
  return out;
}

}  // namespace sdi::seesaw
