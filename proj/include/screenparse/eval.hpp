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

// Dataset harness: parse every screen, ground its instruction, and aggregate
// grounding accuracy, pass@k, region-proposal accuracy and local element
// exhaustiveness (LEE).

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screenparse/agent.hpp"
#include "screenparse/hsp.hpp"

namespace screenparse {

struct EvalSample {
  std::filesystem::path candidates_path;
  std::filesystem::path image_path;
  std::string instruction;
  BBox gt_box;
  std::optional<std::string> platform;      // mobile / desktop / web
  std::optional<std::string> element_type;  // text / icon
};

/// JSON-lines manifest; relative paths resolve against the manifest's folder.
/// Throws Error(kDataset) for an unreadable or empty manifest.
std::vector<EvalSample> load_manifest(const std::filesystem::path& path);

/// 1 iff the midpoint of gt_box lies inside some local element.
int lee_score(const ScreenHierarchy& h, const BBox& gt_box);

struct SampleRecord {
  std::size_t index = 0;
  std::string instruction;
  std::optional<std::string> platform;
  std::optional<std::string> element_type;
  std::optional<int> groi_id;  // nullopt when the proposal failed; kFullImage for full screen
  bool groi_hit = false;
  std::vector<bool> pass;      // pass[j-1] = pass@j
  int lee = 0;
  std::vector<int> candidate_ids;
  std::optional<std::string> error;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct Aggregates {
  std::size_t count = 0;
  double accuracy = 0.0;         // pass@1
  std::vector<double> pass_at;   // pass_at[j-1] = pass@j
  double groi_proposal_accuracy = 0.0;
  double lee_mean = 0.0;

  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct EvalReport {
  int k = 1;
  std::vector<SampleRecord> samples;
  Aggregates overall;
  std::map<std::string, Aggregates> by_platform;
  std::map<std::string, Aggregates> by_element_type;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

Aggregates aggregate(const std::vector<const SampleRecord*>& records, int k);

struct EvalOptions {
  HspConfig hsp = HspConfig::for_task(Task::kGrounding);
  int k = 3;
  int workers = 1;
};

/// Transport failures and other per-sample errors count as misses and are
/// recorded on the sample. Throws Error(kDataset) for an empty dataset or
/// missing files.
EvalReport run_eval(const std::vector<EvalSample>& dataset, AgentContext& ctx, const EvalOptions& options);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
std::string report_to_csv(const EvalReport& report);
std::string report_summary_table(const EvalReport& report);

}  // namespace screenparse
