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

// Hierarchical screen parsing: turns raw segmentation and OCR candidates into
// Global Regions of Interest (GROIs) plus filtered local elements.
//
// Pipeline: classify SAM boxes by area -> drop OCR false positives -> drop
// icons touching text -> keep square-ish icons -> drop redundant icons and
// buttons -> score GROI candidates -> greedy NMS -> assign elements to GROIs.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "screenparse/candidates.hpp"
#include "screenparse/geometry.hpp"

namespace screenparse {

enum class Task { kGrounding, kReferring };

/// Unit of the GROI area inside the information score.
enum class AreaUnit { kNormalized, kPixel };

enum class ElementKind { kIcon, kButton, kText, kPicture };

std::string_view task_name(Task task);
Task task_from_name(std::string_view name);
std::string_view element_kind_name(ElementKind kind);
ElementKind element_kind_from_name(std::string_view name);

/// The default OCR ignore list.
const std::vector<std::string>& default_ocr_ignore_tokens();

struct HspConfig {
  Task task = Task::kGrounding;
  // Area thresholds are fractions of the image area.
  double a_thresh_groi = 0.10;
  double a_thresh_icon = 0.02;
  double a_thresh_button = 0.005;
  double ios_redundant = 0.6;
  double s_thresh = 25.0;
  double ios_overlap_thresh = 0.5;
  double ios_inside_thresh = 0.5;
  double aspect_low = 0.7;
  double aspect_high = 1.3;
  std::vector<std::string> ocr_ignore_tokens = default_ocr_ignore_tokens();
  int ocr_ignore_max_len = 5;
  AreaUnit score_area_unit = AreaUnit::kNormalized;

  /// Threshold profile for a task: grounding (s 25, IoS 0.5) or referring (s 10, IoS 0).
  static HspConfig for_task(Task task);

  /// Throws Error(kConfig) when thresholds are out of order or out of range.
  void validate() const;

  friend bool operator==(const HspConfig&, const HspConfig&) = default;
};

nlohmann::json hsp_config_to_json(const HspConfig& cfg);

/// Applies the fields present in j on top of cfg. "task" (if present) resets the
/// profile first, so explicit thresholds in the same object still win.
HspConfig apply_hsp_config_json(HspConfig cfg, const nlohmann::json& j);

struct LocalElement {
  int id = 0;
  BBox box;
  ElementKind kind = ElementKind::kIcon;
  std::optional<std::string> text;  // present iff kind == kText

  friend bool operator==(const LocalElement&, const LocalElement&) = default;
};

struct Groi {
  int id = 0;
  BBox box;
  double info_score = 0.0;
  std::vector<int> member_ids;

  friend bool operator==(const Groi&, const Groi&) = default;
};

struct ScreenHierarchy {
  ImageInfo image;
  std::vector<Groi> grois;
  std::vector<LocalElement> elements;
  std::vector<int> orphan_ids;
  nlohmann::json meta = nlohmann::json::object();  // parse settings, informational

  const LocalElement* find_element(int id) const;
  const Groi* find_groi(int id) const;
  BBox image_box() const;

  friend bool operator==(const ScreenHierarchy&, const ScreenHierarchy&) = default;
};

struct ClassifiedCandidates {
  std::vector<BBox> grois;
  std::vector<BBox> icons;
  std::vector<BBox> buttons;
};

ClassifiedCandidates classify_candidates(const CandidateSet& c, const HspConfig& cfg);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

std::vector<OcrBox> filter_ocr_false_positives(std::span<const OcrBox> ocr, const HspConfig& cfg);

std::vector<BBox> remove_icons_overlapping_text(std::span<const BBox> icons,
                                                std::span<const OcrBox> texts);

std::vector<BBox> filter_square_icons(std::span<const BBox> icons, const HspConfig& cfg);

struct FilteredElements {
  std::vector<BBox> icons;
  std::vector<BBox> buttons;
  std::vector<OcrBox> texts;
};

/// Icons and buttons are visited by descending area (icons before buttons on
/// ties, then input order); a box is dropped when it lies inside, or has
/// IoS > ios_redundant against, any text or already kept icon/button.
/// Texts are never dropped. Survivors keep their input order.
FilteredElements remove_redundant_elements(std::span<const BBox> icons,
                                           std::span<const BBox> buttons,
                                           std::span<const OcrBox> texts, const HspConfig& cfg);

/// N_inside / sqrt(1 + N_inter * area), area = area(g) * area_scale.
double information_score(const BBox& g, std::span<const BBox> elements, double area_scale);

/// Greedy NMS by descending score (ties: larger area, then input order).
/// Returned GROIs carry ids in selection order and empty member lists.
std::vector<Groi> nms_grois(std::span<const BBox> cands, std::span<const double> scores,
                            const HspConfig& cfg);

ScreenHierarchy parse_screen(const CandidateSet& c, const HspConfig& cfg);

nlohmann::json hierarchy_to_json(const ScreenHierarchy& h);
ScreenHierarchy hierarchy_from_json(const nlohmann::json& j);
ScreenHierarchy load_hierarchy(const std::filesystem::path& path);

}  // namespace screenparse
