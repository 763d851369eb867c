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

#include "sdi/io.hpp"

#include <cmath>
#include <fstream>
#include <regex>

namespace sdi::io {

using linalg::cplx;
using linalg::HermitianOperator;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string strip_builtin(std::string_view name) {
  constexpr std::string_view prefix = "builtin:";
  if (name.substr(0, prefix.size()) == prefix) name.remove_prefix(prefix.size());
  return std::string(name);
}

quantum::Bloch bloch_from_json(const json& j) {
  const json& b = field(j, "bloch");
  if (!b.is_array() || b.size() != 3) throw FormatError("\"bloch\" must hold three numbers");
  return {b[0].get<double>(), b[1].get<double>(), b[2].get<double>()};
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json rr = json::array(), ir = json::array();
    for (int c = 0; c < m.dim(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"dim", m.dim()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const json& j) {
  try {
    const int d = field(j, "dim").get<int>();
    if (d < 1) throw FormatError("\"dim\" must be positive");
    const json& re = field(j, "re");
    const json* im = j.contains("im") ? &j.at("im") : nullptr;
    ComplexMatrix m(d);
    if (!re.is_array() || static_cast<int>(re.size()) != d) throw FormatError("\"re\" must have dim rows");
    for (int r = 0; r < d; ++r) {
      if (!re[r].is_array() || static_cast<int>(re[r].size()) != d) throw FormatError("\"re\" row has wrong length");
      for (int c = 0; c < d; ++c) {
        double imag = 0.0;
        if (im != nullptr) {
          if (!(*im)[r].is_array() || static_cast<int>((*im)[r].size()) != d) {
            throw FormatError("\"im\" row has wrong length");
          }
          imag = (*im)[r][c].get<double>();
        }
        m(r, c) = cplx(re[r][c].get<double>(), imag);
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed operator: ") + e.what());
  }
}

json to_json(const State& s) { return to_json(s.rho().matrix()); }

State state_from_json(const json& j) {
  if (j.is_object() && j.contains("bloch")) return quantum::bloch_to_state(bloch_from_json(j));
  return State(HermitianOperator(matrix_from_json(j)));
}

json to_json(const Observable& o) { return to_json(o.op().matrix()); }

Observable observable_from_json(const json& j) {
  if (j.is_object() && j.contains("bloch")) return Observable(quantum::bloch_operator(bloch_from_json(j)));
  return Observable(HermitianOperator(matrix_from_json(j)));
}

json to_json(const Povm& p) {
  json effects = json::array();
  for (const auto& e : p.effects()) effects.push_back(to_json(e.matrix()));
  return {{"effects", effects}};
}

Povm povm_from_json(const json& j) {
  if (!(j.is_object() && j.contains("effects"))) return Povm::from_observable(observable_from_json(j));
  const json& e = j.at("effects");
  if (!e.is_array() || e.empty()) throw FormatError("\"effects\" must be a nonempty array");
  std::vector<HermitianOperator> effects;
  for (const auto& op : e) effects.emplace_back(matrix_from_json(op));
  return Povm(std::move(effects));
}

json to_json(const Strategy& s) {
  json preps = json::array(), meas = json::array();
  for (const auto& p : s.preparations()) preps.push_back(to_json(p));
  for (const auto& m : s.measurements()) meas.push_back(to_json(m));
  return {{"dim", s.dim()}, {"preparations", preps}, {"measurements", meas}};
}

Strategy strategy_from_json(const json& j) {
  const json& preps = field(j, "preparations");
  const json& meas = field(j, "measurements");
  if (!preps.is_array() || !meas.is_array()) throw FormatError("strategy fields must be arrays");
  std::vector<State> states;
  for (const auto& p : preps) states.push_back(state_from_json(p));
  std::vector<Povm> povms;
  for (const auto& m : meas) povms.push_back(povm_from_json(m));
  Strategy s(std::move(states), std::move(povms));
  if (j.contains("dim") && j.at("dim").get<int>() != s.dim()) throw FormatError("\"dim\" disagrees with operators");
  return s;
}

json to_json(const Witness& w) {
  json nb = json::array();
  json alpha = json::array();
  for (int y = 0; y < w.num_measurements(); ++y) nb.push_back(w.num_outcomes(y));
  for (int x = 0; x < w.num_preparations(); ++x) {
    json row = json::array();
    for (int y = 0; y < w.num_measurements(); ++y) {
      json cell = json::array();
      for (int b = 0; b < w.num_outcomes(y); ++b) cell.push_back(w.alpha(x, y, b));
      row.push_back(cell);
    }
    alpha.push_back(row);
  }
  return {{"name", w.name()},          {"nx", w.num_preparations()}, {"ny", w.num_measurements()},
          {"nb", nb},                  {"alpha", alpha}};
}

Witness witness_from_json(const json& j) {
  try {
    const int nx = field(j, "nx").get<int>();
    const int ny = field(j, "ny").get<int>();
    const json& nbj = field(j, "nb");
    std::vector<int> nb;
    if (nbj.is_number_integer()) {
      nb.assign(ny, nbj.get<int>());
    } else {
      nb = nbj.get<std::vector<int>>();
    }
    if (nx < 1 || ny < 1 || static_cast<int>(nb.size()) != ny) throw FormatError("witness alphabet sizes are inconsistent");
    auto alpha = field(j, "alpha").get<std::vector<std::vector<std::vector<double>>>>();
    if (static_cast<int>(alpha.size()) != nx) throw FormatError("\"alpha\" must have nx rows");
    const std::string name = j.contains("name") ? j.at("name").get<std::string>() : "custom";
    return Witness(std::move(nb), std::move(alpha), name);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed witness: ") + e.what());
  }
}

Witness builtin_witness(std::string_view spec) {
  const std::string name = strip_builtin(spec);
  if (name == "example2") return scenario::make_example2_witness();
  std::smatch m;
  static const std::regex rac(R"(rac([0-9]+))");
  static const std::regex biased(R"(biased(?:\(([^)]*)\)|:(.*)))");
  if (std::regex_match(name, m, rac)) return scenario::make_rac_witness(std::stoi(m[1].str()));
  if (std::regex_match(name, m, biased)) {
    const std::string q = m[1].matched ? m[1].str() : m[2].str();
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(q, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != q.size()) throw DomainError("biased witness needs a numeric q, got \"" + q + "\"");
    return scenario::make_biased_rac_witness(value);
  }
  throw DomainError("unknown builtin witness \"" + name + "\"");
}

std::vector<std::string> builtin_witness_names() {
  return {"rac2", "rac3", "racN", "biased(q)", "example2"};
}

std::optional<Strategy> builtin_ideal_strategy(std::string_view spec) {
  const std::string name = strip_builtin(spec);
  if (name == "rac2") return scenario::rac2_ideal_strategy();
  if (name == "example2") return scenario::example2_ideal_strategy();
  return std::nullopt;
}

Witness load_witness(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return builtin_witness(spec);
  if (std::filesystem::exists(spec)) return witness_from_json(read_json_file(spec));
  return builtin_witness(spec);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sdi::io
