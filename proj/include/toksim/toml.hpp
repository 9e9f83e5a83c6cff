// Copyright 2026 The toksim Authors
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

#ifndef TOKSIM_TOML_HPP_
#define TOKSIM_TOML_HPP_

#include <string>

#include <nlohmann/json.hpp>

namespace toksim {

// Minimal TOML subset parser bridging into a json value, enough for config
// files: [table] and [dotted.table] headers, key = value lines with basic
// strings, integers, floats, booleans and flat arrays, plus # comments.
// No multi-line strings, no inline tables, no arrays of tables, no dates.
// Syntax outside the subset raises UsageError with a line number.
nlohmann::json parse_toml(const std::string& text);

}  // namespace toksim

#endif  // TOKSIM_TOML_HPP_
