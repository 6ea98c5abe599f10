// Copyright 2026 The screenparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Helpers for reading model replies and writing prompt text.

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "screenparse/geometry.hpp"

namespace screenparse {

/// First JSON value opening with `open` ('[' or '{') that parses. Fenced
/// ``` blocks are tried first, then every balanced bracket span in order.
std::optional<nlohmann::json> find_json(std::string_view raw, char open);

/// Integers print without a fraction; other values with two decimals.
std::string format_number(double v);

/// "[x1, y1, x2, y2]"
std::string format_box(const BBox& b);

std::string trim(std::string_view s);

/// Reads an id given as a JSON integer or a string of digits.
std::optional<int> json_to_id(const nlohmann::json& v);

}  // namespace screenparse
