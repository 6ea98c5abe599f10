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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screenparse/geometry.hpp"

namespace screenparse {

/// Segmentation proposal for one screenshot.
struct SamBox {
  BBox box;
  std::optional<double> score;

  friend bool operator==(const SamBox&, const SamBox&) = default;
};

/// OCR detection. The text is kept verbatim.
struct OcrBox {
  BBox box;
  std::string text;
  std::optional<double> confidence;

  friend bool operator==(const OcrBox&, const OcrBox&) = default;
};

struct ImageInfo {
  int width = 0;
  int height = 0;
  std::optional<std::string> path;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

/// Raw detections for one screenshot, clamped to the image bounds.
struct CandidateSet {
  ImageInfo image;
  std::vector<SamBox> sam;
  std::vector<OcrBox> ocr;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

BBox clamp_to_image(const BBox& b, double width, double height);

/// Validates, clamps and drops boxes that end up with zero area. Throws
/// Error(kMalformedInput) on schema violations.
CandidateSet candidates_from_json(const nlohmann::json& j);
nlohmann::json candidates_to_json(const CandidateSet& c);

CandidateSet load_candidates(const std::filesystem::path& path);

// Shared helpers for the box and image fields of every schema in the project.
nlohmann::json box_to_json(const BBox& b);
BBox box_from_json(const nlohmann::json& j, std::string_view what);
ImageInfo image_info_from_json(const nlohmann::json& j);
nlohmann::json image_info_to_json(const ImageInfo& info);

}  // namespace screenparse
