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

#include "kid/error.hpp"
#include "kid/jsonio.hpp"
#include "kid/kidecomp.hpp"

namespace kid {

using jsonio::json;

std::string write_decomposition(const KIDecomposition& d) {
  json blocks = json::array();
  for (std::size_t l = 0; l < d.blocks.size(); ++l) {
    const auto& b = d.blocks[l];
    json rho_j = json::array();
    for (const auto& s : b.rho_J) rho_j.push_back(s ? jsonio::to_json(s->matrix()) : json(nullptr));
    blocks.push_back({{"n", b.n},
                      {"k", b.k},
                      {"p", d.p_block[l]},
                      {"q", b.q},
                      {"rho_K", jsonio::to_json(b.rho_K.matrix())},
                      {"rho_J", std::move(rho_j)},
                      {"rho_J_avg", jsonio::to_json(d.rho_J_avg[l].matrix())},
                      {"isometry", jsonio::to_json(b.isometry)}});
  }
  json root{{"dim", d.frame.ambient_dim},
            {"rank", d.frame.rank},
            {"frame", jsonio::to_json(d.frame.isometry)},
            {"blocks", std::move(blocks)}};
  return root.dump(1) + "\n";
}

KIDecomposition read_decomposition(std::string_view text) {
  const json root = jsonio::parse_text(std::string(text));
  jsonio::check_keys(root, {"dim", "rank", "frame", "blocks"}, "$");
  KIDecomposition d;
  d.frame.ambient_dim = jsonio::int_from_json(jsonio::require(root, "dim", "$"), "dim");
  d.frame.rank = jsonio::int_from_json(jsonio::require(root, "rank", "$"), "rank");
  d.frame.isometry = jsonio::matrix_from_json(jsonio::require(root, "frame", "$"), "frame");
  const json& blocks = jsonio::require(root, "blocks", "$");
  if (!blocks.is_array()) throw Error(ErrorCode::ParseError, "field 'blocks': expected an array");
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const auto where = "blocks[" + std::to_string(l) + "]";
    const json& jb = blocks[l];
    jsonio::check_keys(jb, {"n", "k", "p", "q", "rho_K", "rho_J", "rho_J_avg", "isometry"}, where);
    KIBlock b;
    b.n = jsonio::int_from_json(jsonio::require(jb, "n", where), where + ".n");
    b.k = jsonio::int_from_json(jsonio::require(jb, "k", where), where + ".k");
    b.isometry = jsonio::matrix_from_json(jsonio::require(jb, "isometry", where), where + ".isometry");
    b.rho_K = DensityMatrix::trusted(
        jsonio::matrix_from_json(jsonio::require(jb, "rho_K", where), where + ".rho_K"));
    const json& q = jsonio::require(jb, "q", where);
    const json& rho_j = jsonio::require(jb, "rho_J", where);
    if (!q.is_array() || !rho_j.is_array() || q.size() != rho_j.size()) {
      throw Error(ErrorCode::ParseError, "field '" + where + "': q and rho_J must be arrays of equal length");
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto wi = "[" + std::to_string(i) + "]";
      b.q.push_back(jsonio::real_from_json(q[i], where + ".q" + wi));
      if (rho_j[i].is_null()) {
        b.rho_J.emplace_back(std::nullopt);
      } else {
        b.rho_J.emplace_back(
            DensityMatrix::trusted(jsonio::matrix_from_json(rho_j[i], where + ".rho_J" + wi)));
      }
    }
    d.p_block.push_back(jsonio::real_from_json(jsonio::require(jb, "p", where), where + ".p"));
    d.rho_J_avg.push_back(DensityMatrix::trusted(
        jsonio::matrix_from_json(jsonio::require(jb, "rho_J_avg", where), where + ".rho_J_avg")));
    d.blocks.push_back(std::move(b));
  }
  return d;
}

}  // namespace kid
