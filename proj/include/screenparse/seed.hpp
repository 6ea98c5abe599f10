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

// Spatially enhanced element descriptions: a set-of-marks prompt listing the
// elements in scope, and a lenient parser for the model's JSON reply.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

#include "screenparse/agent.hpp"
#include "screenparse/hsp.hpp"

namespace screenparse {

enum class SeedLabel { kPaired, kStandalone, kPicture, kActionableText };

std::string_view seed_label_name(SeedLabel label);
/// Accepts case and '-'/' ' variants ("Actionable-Text"). nullopt otherwise.
std::optional<SeedLabel> seed_label_from_name(std::string_view name);

struct SeedDescriptor {
  int element_id = 0;
  BBox box;
  SeedLabel label = SeedLabel::kStandalone;
  std::vector<int> associated_ids;  // non-empty iff paired or actionable_text
  std::string description;
  bool inferred = false;  // filled in because the reply did not cover the element

  friend bool operator==(const SeedDescriptor&, const SeedDescriptor&) = default;
};

struct SeedPromptBundle {
  cv::Mat annotated_image;
  std::string prompt_text;
  std::vector<IclExample> icl_examples;
  std::vector<int> scope_ids;
};

/// Every element id, in id order.
std::vector<int> all_element_ids(const ScreenHierarchy& h);

/// Non-text elements first, then texts with their OCR strings:
/// "Icons:\n<id>, <kind>, [x1, y1, x2, y2]\n...\nTexts:\n<id>, text, [...], \"...\"".
std::string format_element_listing(const ScreenHierarchy& h, std::span<const int> scope);

/// focus, when given, crops the annotated image to that region.
SeedPromptBundle build_seed_prompt(const ScreenHierarchy& h, std::span<const int> scope,
                                   const cv::Mat& image, const PromptTemplate& tmpl,
                                   std::span<const IclExample> icl, const RenderStyle& style,
                                   const std::optional<BBox>& focus = std::nullopt);

/// One descriptor per scope id, in scope order. Entries with unknown ids, bad
/// labels or a label/association mismatch are ignored; uncovered elements
/// fall back to standalone with their OCR text (inferred). Throws
/// Error(kUnparseableResponse) when no JSON array can be recovered.
std::vector<SeedDescriptor> parse_seed_response(std::string_view raw, const ScreenHierarchy& h,
                                                std::span<const int> scope);

/// build -> send -> parse. An empty scope returns nothing without a call.
std::vector<SeedDescriptor> seed_descriptors(const ScreenHierarchy& h, std::span<const int> scope,
                                             const cv::Mat& image, AgentContext& ctx,
                                             const std::optional<BBox>& focus = std::nullopt);

/// Sets kind = picture on elements described as pictures.
void relabel_pictures(ScreenHierarchy& h, std::span<const SeedDescriptor> descriptors);

nlohmann::json descriptors_to_json(std::span<const SeedDescriptor> descriptors);

}  // namespace screenparse
