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


// JSON documents for operators, strategies and witnesses, and the builtin
// witness registry.
//
// Operator:  {"dim": d, "re": [[...]], "im": [[...]]}, or {"bloch": [x, y, z]}
//            for qubits ((1 + m.sigma)/2 for states, m.sigma for observables).
// Povm:      {"effects": [operator, ...]} or a single observable document.
// Strategy:  {"dim": d, "preparations": [state, ...], "measurements": [povm, ...]}.
// Witness:   {"nx": n, "ny": m, "nb": k or [k_y ...], "alpha": [[[...]]]}.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sdi/scenario.hpp"

namespace sdi::io {

using json = nlohmann::json;
using linalg::ComplexMatrix;
using quantum::Observable;
using quantum::Povm;
using quantum::State;
using scenario::Strategy;
using scenario::Witness;

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json to_json(const State& s);
State state_from_json(const json& j);
json to_json(const Observable& o);
Observable observable_from_json(const json& j);
json to_json(const Povm& p);
Povm povm_from_json(const json& j);

json to_json(const Strategy& s);
Strategy strategy_from_json(const json& j);

json to_json(const Witness& w);
Witness witness_from_json(const json& j);

/// rac2, rac3, racN (N in [2, 8]), biased(q) or biased:q, example2; an
/// optional "builtin:" prefix is accepted. Throws DomainError otherwise.
Witness builtin_witness(std::string_view name);
std::vector<std::string> builtin_witness_names();

/// Ideal qubit strategy for builtins that have one (rac2, example2).
std::optional<Strategy> builtin_ideal_strategy(std::string_view name);

/// "builtin:NAME" or a path to a witness document.
Witness load_witness(const std::string& spec);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace sdi::io
