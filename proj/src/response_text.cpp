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

#include "screenparse/response_text.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace screenparse {

using nlohmann::json;

namespace {

// End (one past) of the balanced span starting at raw[start], skipping
// brackets inside JSON strings, or npos.
std::size_t balanced_end(std::string_view raw, std::size_t start) {
  const char open = raw[start];
  const char close = open == '[' ? ']' : '}';
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    const char ch = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == open) {
      ++depth;
    } else if (ch == close) {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<json> scan(std::string_view text, char open) {
  for (std::size_t pos = text.find(open); pos != std::string_view::npos; pos = text.find(open, pos + 1)) {
    const std::size_t end = balanced_end(text, pos);
    if (end == std::string_view::npos) continue;
    json value = json::parse(text.substr(pos, end - pos), nullptr, false);
    if (!value.is_discarded()) return value;
  }
  return std::nullopt;
}

}  // namespace

std::optional<json> find_json(std::string_view raw, char open) {
  for (std::size_t fence = raw.find("```"); fence != std::string_view::npos;) {
    const std::size_t body = raw.find('\n', fence);
    if (body == std::string_view::npos) break;
    const std::size_t close = raw.find("```", body);
    if (close == std::string_view::npos) break;
    if (auto value = scan(raw.substr(body, close - body), open)) return value;
    fence = raw.find("```", close + 3);
  }
  return scan(raw, open);
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_box(const BBox& b) {
  return "[" + format_number(b.x1) + ", " + format_number(b.y1) + ", " + format_number(b.x2) + ", " +
         format_number(b.y2) + "]";
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<int> json_to_id(const json& v) {
  if (v.is_number_integer()) {
    const auto id = v.get<long long>();
    if (id >= 0 && id <= std::numeric_limits<int>::max()) return static_cast<int>(id);
    return std::nullopt;
  }
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    if (s.empty() || s.size() > 9) return std::nullopt;
    for (char ch : s) {
      if (ch < '0' || ch > '9') return std::nullopt;
    }
    return std::stoi(s);
  }
  return std::nullopt;
}

}  // namespace screenparse
