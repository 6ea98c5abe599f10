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

// Point-and-read referring: locate what lies under a user's point, frame it in
// two lenses (close-up of the region, whole screen) and ask the model for a
// content and a layout description.

#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

#include "screenparse/agent.hpp"
#include "screenparse/hsp.hpp"

namespace screenparse {

struct Location {
  std::optional<int> element_id;
  int groi_id = kFullImage;

  friend bool operator==(const Location&, const Location&) = default;
};

/// Smallest element containing p (ties: lower id). Its GROI is the one it was
/// assigned to; for orphans and empty space, the smallest GROI containing p;
/// else FULL_IMAGE. Throws Error(kPointOutOfBounds) outside [0,W] x [0,H].
Location locate(const ScreenHierarchy& h, Point p);

struct LensPair {
  cv::Mat lens1;                // region crop: element box, point marker
  cv::Mat lens2;                // whole screen: region box
  CropTransform lens1_transform;
  Point lens1_point;            // p in lens1 coordinates
};

LensPair build_lenses(const ScreenHierarchy& h, const cv::Mat& image, const Location& where, Point p,
                      const RenderStyle& style);

struct ReferringResult {
  Point point;
  std::optional<int> element_id;
  int groi_id = kFullImage;
  std::string content;
  std::string layout;

  friend bool operator==(const ReferringResult&, const ReferringResult&) = default;
};

/// "Content:" / "Layout:" sections, or the two halves around the first blank
/// line. Throws Error(kUnparseableResponse) if either part is empty.
std::pair<std::string, std::string> parse_referring_response(std::string_view raw);

/// locate -> build_lenses -> send -> parse. No call is made when locate fails.
ReferringResult refer(const ScreenHierarchy& h, const cv::Mat& image, Point p, AgentContext& ctx,
                      LensPair* lenses_out = nullptr);

nlohmann::json referring_result_to_json(const ReferringResult& r);

}  // namespace screenparse
