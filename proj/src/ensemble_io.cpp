// Copyright 2026 The kidecomp Authors
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

#include "kid/ensemble.hpp"
#include "kid/error.hpp"
#include "kid/jsonio.hpp"

namespace kid {

using jsonio::json;

RawEnsemble parse_ensemble(std::string_view text) {
  const json root = jsonio::parse_text(std::string(text));
  jsonio::check_keys(root, {"dim", "states"}, "$");
  RawEnsemble raw;
  raw.dim = jsonio::int_from_json(jsonio::require(root, "dim", "$"), "dim");
  const json& states = jsonio::require(root, "states", "$");
  if (!states.is_array()) throw Error(ErrorCode::ParseError, "field 'states': expected an array");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto where = "states[" + std::to_string(i) + "]";
    const json& s = states[i];
    jsonio::check_keys(s, {"p", "matrix"}, where);
    RawEntry entry;
    entry.p = jsonio::real_from_json(jsonio::require(s, "p", where), where + ".p");
    entry.mat = jsonio::matrix_from_json(jsonio::require(s, "matrix", where), where + ".matrix");
    raw.entries.push_back(std::move(entry));
  }
  return raw;
}

Ensemble read_ensemble(std::string_view text, double tol) {
  return make_ensemble(parse_ensemble(text), tol);
}

std::string write_ensemble(const Ensemble& e) {
  json states = json::array();
  for (const auto& entry : e.entries) {
    states.push_back({{"p", entry.p}, {"matrix", jsonio::to_json(entry.state.matrix())}});
  }
  json root{{"dim", e.dim}, {"states", std::move(states)}};
  // nlohmann prints the shortest representation that round-trips exactly.
  return root.dump(1) + "\n";
}

}  // namespace kid
