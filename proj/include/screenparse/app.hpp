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

// Request-level core shared by the command line and the HTTP service, so
// both produce the same bytes for the same request.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

#include "screenparse/agent.hpp"
#include "screenparse/annotate.hpp"
#include "screenparse/hsp.hpp"
#include "screenparse/lvlm.hpp"
#include "screenparse/prompts.hpp"
#include "screenparse/referring.hpp"

namespace screenparse {

struct AppConfig {
  nlohmann::json hsp_overrides = nlohmann::json::object();  // applied on top of the task profile
  RenderStyle style;
  LvlmSettings lvlm;
  std::optional<std::filesystem::path> prompts_dir;
  std::optional<std::string> transport;  // replay:FILE | live | record:FILE
  std::optional<std::size_t> max_calls;
  std::string cors_origin = "*";

  /// Throws Error(kConfig) on unknown keys or bad values.
  static AppConfig from_json(const nlohmann::json& j);
  static AppConfig load(const std::filesystem::path& path);
  /// --config wins over SCREENPARSE_CONFIG; defaults when neither is set.
  static AppConfig resolve(const std::optional<std::filesystem::path>& path);

  HspConfig hsp_for(Task task) const;
  PromptSet prompts() const;
};

/// Indented JSON with a trailing newline.
std::string to_json_text(const nlohmann::json& j);

nlohmann::json run_parse(const CandidateSet& candidates, const HspConfig& cfg);

struct GroundRequest {
  ScreenHierarchy hierarchy;
  cv::Mat image;
  std::string instruction;
  int k = 1;
  std::optional<BBox> gt_box;
};

nlohmann::json run_ground(const GroundRequest& req, AgentContext& ctx);

struct ReferRequest {
  ScreenHierarchy hierarchy;
  cv::Mat image;
  Point point;
};

nlohmann::json run_refer(const ReferRequest& req, AgentContext& ctx, LensPair* lenses_out = nullptr);

/// Parses "x,y". Throws Error(kMalformedInput).
Point parse_point(std::string_view text);

/// One JSON object per line on stderr. SCREENPARSE_LOG_LEVEL picks the
/// threshold (debug, info, warn, error, off); default info.
void log_event(std::string_view level, std::string_view event, const nlohmann::json& fields = {});

}  // namespace screenparse
