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

// Two-stage action grounding: the model first picks the region of interest
// for the instruction, then picks elements from that region's described,
// id-tagged crop.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

#include "screenparse/agent.hpp"
#include "screenparse/hsp.hpp"
#include "screenparse/seed.hpp"

namespace screenparse {

struct GroundingTask {
  std::string instruction;
  ScreenHierarchy hierarchy;
  cv::Mat image;
};

struct GroiProposal {
  int groi_id = kFullImage;
  std::map<int, std::string> groi_descriptions;
  std::string raw_response;
  int attempts = 0;       // model calls made
  bool fallback = false;  // FULL_IMAGE chosen because no valid id came back
};

struct GroundingCandidate {
  int element_id = 0;
  BBox box;
  bool out_of_scope = false;  // valid element outside the proposed region

  friend bool operator==(const GroundingCandidate&, const GroundingCandidate&) = default;
};

struct GroundingResult {
  std::vector<GroundingCandidate> ranked_candidates;
  GroiProposal proposal;
  std::vector<SeedDescriptor> descriptors;
  std::vector<std::string> warnings;

  const GroundingCandidate& chosen() const { return ranked_candidates.front(); }
};

struct ParsedProposal {
  std::optional<int> groi_id;
  std::map<int, std::string> descriptions;
};

/// JSON {"groi_id": .., "descriptions": {..}} or, failing that, the first
/// "Region <n>" / "GROI <n>" / "ID: <n>" mention.
ParsedProposal parse_groi_proposal(std::string_view raw);

/// JSON {"ranked_ids": [..]} or a bare array of ids, else "ID <n>" mentions.
std::vector<int> parse_ranked_ids(std::string_view raw);

/// A hierarchy without GROIs yields FULL_IMAGE without a call. An id that is
/// not a GROI is retried once with a correction, then falls back to FULL_IMAGE.
GroiProposal propose_groi(const GroundingTask& task, AgentContext& ctx);

/// Midpoint of gt_box inside the proposed GROI; always true for FULL_IMAGE.
bool groi_proposal_hit(const GroiProposal& p, const ScreenHierarchy& h, const BBox& gt_box);

/// Second stage for an existing proposal. Throws Error(kNoCandidate) when the
/// reply names no existing element.
GroundingResult ground_with_proposal(const GroundingTask& task, GroiProposal proposal,
                                     AgentContext& ctx, int k);

GroundingResult ground(const GroundingTask& task, AgentContext& ctx, int k);

/// Any of the first j candidates has its midpoint inside gt_box.
bool grounding_hit(const GroundingResult& result, const BBox& gt_box, int j);

nlohmann::json grounding_result_to_json(const GroundingResult& result, const std::string& instruction,
                                        const std::optional<BBox>& gt_box, int k);

}  // namespace screenparse
