// Copyright 2026 The D3 Authors.
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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace d3::pipeline {

// Parses the TOML subset used by config files into a JSON object:
// comments, [table] and [table.sub] headers, bare or quoted keys, basic and
// literal strings, integers, floats, booleans and single-line arrays.
// Throws ParseError with the offending line.
nlohmann::ordered_json parse_toml(std::string_view text);

// Emits a JSON object of tables of scalars/arrays as TOML. Floats are
// written in shortest round-trip form and always carry a '.' or exponent.
std::string dump_toml(const nlohmann::ordered_json& root);

}  // namespace d3::pipeline
