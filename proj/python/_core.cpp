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

// Python bindings: witnesses, strategies, bounds, fidelity curves, seesaw
// and the swap SDP.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdi/bounds.hpp"
#include "sdi/fidelity.hpp"
#include "sdi/io.hpp"
#include "sdi/parallel.hpp"
#include "sdi/sdp.hpp"
#include "sdi/seesaw.hpp"
#include "sdi/version.hpp"

namespace py = pybind11;
using namespace sdi;
using linalg::HermitianOperator;
using quantum::Observable;
using quantum::Povm;
using quantum::State;
using scenario::Strategy;
using scenario::Witness;

namespace {

Strategy make_strategy(const std::vector<Eigen::MatrixXcd>& states,
                       const std::vector<std::vector<Eigen::MatrixXcd>>& povms) {
  std::vector<State> preps;
  for (const auto& r : states) preps.emplace_back(HermitianOperator(r));
  std::vector<Povm> meas;
  for (const auto& effects : povms) {
    std::vector<HermitianOperator> e;
    for (const auto& m : effects) e.emplace_back(m);
    meas.emplace_back(std::move(e));
  }
  return Strategy(std::move(preps), std::move(meas));
}

std::vector<Eigen::MatrixXcd> state_matrices(const Strategy& s) {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& p : s.preparations()) out.push_back(p.rho().matrix().eigen());
  return out;
}

std::vector<std::vector<Eigen::MatrixXcd>> povm_matrices(const Strategy& s) {
  std::vector<std::vector<Eigen::MatrixXcd>> out;
  for (const auto& m : s.measurements()) {
    std::vector<Eigen::MatrixXcd> e;
    for (const auto& op : m.effects()) e.push_back(op.matrix().eigen());
    out.push_back(std::move(e));
  }
  return out;
}

Observable observable(const Eigen::MatrixXcd& m) { return Observable(HermitianOperator(m)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semi-device-independent self-testing for prepare-and-measure scenarios";
  m.attr("__version__") = kVersion;

  py::class_<Witness>(m, "Witness")
      .def_property_readonly("name", &Witness::name)
      .def_property_readonly("num_preparations", &Witness::num_preparations)
      .def_property_readonly("num_measurements", &Witness::num_measurements)
      .def("num_outcomes", &Witness::num_outcomes, py::arg("y"))
      .def("alpha", &Witness::alpha, py::arg("x"), py::arg("y"), py::arg("b"))
      .def("to_json", [](const Witness& w) { return io::to_json(w).dump(); })
      .def_static("from_json", [](const std::string& s) { return io::witness_from_json(io::json::parse(s)); })
      .def("__repr__", [](const Witness& w) { return "<Witness " + w.name() + ">"; });

  py::class_<Strategy>(m, "Strategy")
      .def(py::init(&make_strategy), py::arg("states"), py::arg("povms"),
           "Density matrices and POVMs given as lists of complex arrays.")
      .def_property_readonly("dim", &Strategy::dim)
      .def_property_readonly("states", &state_matrices)
      .def_property_readonly("povms", &povm_matrices)
      .def("to_json", [](const Strategy& s) { return io::to_json(s).dump(); })
      .def_static("from_json", [](const std::string& s) { return io::strategy_from_json(io::json::parse(s)); });

  m.def("builtin_witness", &io::builtin_witness, py::arg("name"),
        "rac2, rac3, racN, biased(q) or biased:q, example2.");
  m.def("rac_witness", &scenario::make_rac_witness, py::arg("n"));
  m.def("biased_rac_witness", &scenario::make_biased_rac_witness, py::arg("q"));
  m.def("example2_witness", &scenario::make_example2_witness);
  m.def("rac2_ideal_strategy", &scenario::rac2_ideal_strategy);
  m.def("example2_ideal_strategy", &scenario::example2_ideal_strategy);
  m.def("witness_value", &scenario::witness_value, py::arg("witness"), py::arg("strategy"));
  m.def("probability", &scenario::probability, py::arg("strategy"), py::arg("x"), py::arg("y"), py::arg("b"));
  m.def("classical_bound", &scenario::classical_bound, py::arg("witness"), py::arg("d"), py::arg("budget") = 1e7);

  m.def("q2", &bounds::q2);
  m.def(
      "prep_compat_bound_2",
      [](const Strategy& s) { return bounds::prep_compat_bound_2(s.preparations()).bound; }, py::arg("strategy"));
  m.def(
      "meas_compat_bound_2",
      [](const Eigen::MatrixXcd& m0, const Eigen::MatrixXcd& m1) {
        return bounds::meas_compat_bound_2(observable(m0), observable(m1)).bound;
      },
      py::arg("m0"), py::arg("m1"));
  m.def(
      "meas_compat_bound_N",
      [](const std::vector<Eigen::MatrixXcd>& ms) {
        std::vector<Observable> obs;
        for (const auto& x : ms) obs.push_back(observable(x));
        return bounds::meas_compat_bound_N(obs);
      },
      py::arg("observables"));
  m.def("biased_max", &bounds::biased_max, py::arg("q"));
  m.def("biased_optimal_overlap", &bounds::biased_optimal_overlap, py::arg("q"));
  m.def("qutrit_bound", &bounds::qutrit_bound, py::arg("alpha"), py::arg("r"), py::arg("s"));
  m.def("qutrit_max", &bounds::qutrit_max);

  m.def("optimal_scale", &fidelity::optimal_scale);
  m.def("linear_lower_bound", &fidelity::linear_lower_bound, py::arg("a2"));
  m.def("conjectured_upper_bound", &fidelity::conjectured_upper_bound, py::arg("a2"));
  m.def("conjectured_curve_states", &fidelity::conjectured_curve_states, py::arg("phi"));
  m.def(
      "sweep_inequalities",
      [](const std::string& kind, double s, int points, double tol) {
        if (kind != "prep" && kind != "meas") throw py::value_error("kind must be 'prep' or 'meas'");
        const auto r = fidelity::sweep_inequalities(
            kind == "prep" ? fidelity::IneqKind::preparations : fidelity::IneqKind::measurements, s, points, tol);
        py::dict d;
        d["points"] = r.points;
        d["min_residual"] = r.min_residual;
        d["min_t"] = r.min_t;
        d["argmin_theta"] = r.argmin_t;
        d["holds"] = r.holds;
        return d;
      },
      py::arg("kind"), py::arg("s"), py::arg("points") = 721, py::arg("tol") = 1e-9);
  m.def(
      "avg_fidelity_states",
      [](const Strategy& s, const Strategy& ideal, int restarts, std::uint64_t seed) {
        quantum::Rng rng(seed);
        return fidelity::avg_fidelity_states(s, ideal.preparations(), restarts, rng).avg_fidelity;
      },
      py::arg("strategy"), py::arg("ideal"), py::arg("restarts") = fidelity::kDefaultRestarts, py::arg("seed") = 1);

  m.def(
      "seesaw",
      [](const Witness& w, int dim, int restarts, std::uint64_t seed, int threads) {
        quantum::Rng rng(seed);
        py::gil_scoped_release release;
        const auto r = seesaw::seesaw(w, dim, restarts, seesaw::kMaxIters, rng, resolve_threads(threads));
        return std::make_pair(r.best_value, r.best_strategy);
      },
      py::arg("witness"), py::arg("dim"), py::arg("restarts") = 32, py::arg("seed") = 1, py::arg("threads") = 0,
      "Best witness value over random restarts and the strategy reaching it.");

  m.def(
      "swap_fidelity_bound",
      [](const Witness& w, const Strategy& ideal, double a_star, int dim, std::uint64_t seed) {
        quantum::Rng rng(seed);
        sdp::SwapBoundResult r;
        {
          py::gil_scoped_release release;
          r = sdp::swap_fidelity_bound(w, ideal.preparations(), a_star, dim, rng);
        }
        py::dict d;
        d["a_star"] = r.a_star;
        d["bound"] = r.bound;
        d["gap"] = r.gap;
        d["rank"] = r.rank;
        d["samples"] = r.samples;
        d["status"] = sdp::to_string(r.status);
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("witness"), py::arg("ideal"), py::arg("a_star"), py::arg("dim") = 2, py::arg("seed") = 1);
}
