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

#pragma once

// Shared JSON conventions: a complex number is [re, im], a matrix is an
// array of rows. Used by the ensemble and decomposition file formats.

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "kid/matstack.hpp"

namespace kid::jsonio {

using json = nlohmann::json;

json to_json(const Matrix& m);

// `where` names the field for error messages, e.g. "states[2].matrix".
Matrix matrix_from_json(const json& j, const std::string& where);
double real_from_json(const json& j, const std::string& where);
int int_from_json(const json& j, const std::string& where);
const json& require(const json& obj, const char* key, const std::string& where);

// Throws ParseError if `obj` is not an object or has a key outside `allowed`.
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where);

json parse_text(const std::string& text);

}  // namespace kid::jsonio
