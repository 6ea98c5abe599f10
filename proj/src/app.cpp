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

#include "screenparse/app.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>

#include "screenparse/candidates.hpp"
#include "screenparse/errors.hpp"
#include "screenparse/grounding.hpp"
#include "screenparse/response_text.hpp"

namespace screenparse {

using nlohmann::json;

AppConfig AppConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  AppConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "hsp") {
        cfg.hsp_overrides = value;
        apply_hsp_config_json(HspConfig{}, value);  // validate early
      } else if (key == "style") {
        cfg.style = style_from_json(value);
      } else if (key == "lvlm") {
        for (const auto& [sub, unused] : value.items()) {
          if (sub != "model" && sub != "temperature" && sub != "max_tokens") {
            throw Error(ErrorKind::kConfig, "unknown config key: lvlm." + sub);
          }
        }
        cfg.lvlm.model_id = value.value("model", cfg.lvlm.model_id);
        cfg.lvlm.temperature = value.value("temperature", cfg.lvlm.temperature);
        cfg.lvlm.max_tokens = value.value("max_tokens", cfg.lvlm.max_tokens);
        if (cfg.lvlm.temperature < 0.0) throw Error(ErrorKind::kConfig, "lvlm.temperature must be >= 0");
        if (cfg.lvlm.max_tokens < 1) throw Error(ErrorKind::kConfig, "lvlm.max_tokens must be >= 1");
      } else if (key == "prompts_dir") {
        cfg.prompts_dir = value.get<std::string>();
      } else if (key == "transport") {
        cfg.transport = value.get<std::string>();
      } else if (key == "max_calls") {
        cfg.max_calls = value.get<std::size_t>();
      } else if (key == "cors_origin") {
        cfg.cors_origin = value.get<std::string>();
      } else {
        throw Error(ErrorKind::kConfig, "unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("config: ") + e.what());
  }
  return cfg;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
  AppConfig cfg = from_json(j);
  if (cfg.prompts_dir && cfg.prompts_dir->is_relative()) cfg.prompts_dir = path.parent_path() / *cfg.prompts_dir;
  return cfg;
}

AppConfig AppConfig::resolve(const std::optional<std::filesystem::path>& path) {
  if (path) return load(*path);
  if (const char* env = std::getenv("SCREENPARSE_CONFIG"); env != nullptr && *env != '\0') return load(env);
  return {};
}

HspConfig AppConfig::hsp_for(Task task) const {
  json overrides = hsp_overrides;
  overrides.erase("task");
  return apply_hsp_config_json(HspConfig::for_task(task), overrides);
}

PromptSet AppConfig::prompts() const { return prompts_dir ? PromptSet::from_dir(*prompts_dir) : PromptSet::defaults(); }

std::string to_json_text(const json& j) { return j.dump(2) + "\n"; }

json run_parse(const CandidateSet& candidates, const HspConfig& cfg) {
  return hierarchy_to_json(parse_screen(candidates, cfg));
}

json run_ground(const GroundRequest& req, AgentContext& ctx) {
  const GroundingTask task{req.instruction, req.hierarchy, req.image};
  const GroundingResult result = ground(task, ctx, req.k);
  return grounding_result_to_json(result, req.instruction, req.gt_box, req.k);
}

json run_refer(const ReferRequest& req, AgentContext& ctx, LensPair* lenses_out) {
  return referring_result_to_json(refer(req.hierarchy, req.image, req.point, ctx, lenses_out));
}

Point parse_point(std::string_view text) {
  const auto comma = text.find(',');
  auto number = [&](std::string_view part) {
    const std::string s = trim(part);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw Error(ErrorKind::kMalformedInput, "point must be \"x,y\": " + std::string(text));
    }
    return v;
  };
  if (comma == std::string_view::npos) throw Error(ErrorKind::kMalformedInput, "point must be \"x,y\": " + std::string(text));
  return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
}

namespace {

int level_rank(std::string_view level) {
  if (level == "debug") return 0;
  if (level == "info") return 1;
  if (level == "warn") return 2;
  if (level == "error") return 3;
  return 4;
}

int threshold_rank() {
  static const int rank = [] {
    const char* env = std::getenv("SCREENPARSE_LOG_LEVEL");
    return env == nullptr ? 1 : level_rank(env);
  }();
  return rank;
}

}  // namespace

void log_event(std::string_view level, std::string_view event, const json& fields) {
  if (level_rank(level) < threshold_rank()) return;
  json line = {{"ts_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count()},
               {"level", level},
               {"event", event}};
  if (fields.is_object()) line.update(fields);
  static std::mutex mutex;
  const std::lock_guard lock(mutex);
  std::cerr << line.dump() << '\n';
}

}  // namespace screenparse
