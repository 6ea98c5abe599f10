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
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screenparse/candidates.hpp"
#include "screenparse/geometry.hpp"
#include "screenparse/hsp.hpp"

namespace testing_support {

inline std::filesystem::path fixture_dir() { return SCREENPARSE_FIXTURE_DIR; }
inline std::filesystem::path binary_dir() { return SCREENPARSE_BINARY_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("screenparse_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Integer-corner box inside [0,w]x[0,h] with positive area.
inline screenparse::BBox random_box(std::mt19937& rng, int w, int h, int min_side = 1, int max_side = -1) {
  if (max_side < 0) max_side = std::max(w, h);
  std::uniform_int_distribution<int> side_w(min_side, std::max(min_side, std::min(max_side, w)));
  std::uniform_int_distribution<int> side_h(min_side, std::max(min_side, std::min(max_side, h)));
  const int bw = std::min(side_w(rng), w), bh = std::min(side_h(rng), h);
  const int x = std::uniform_int_distribution<int>(0, w - bw)(rng);
  const int y = std::uniform_int_distribution<int>(0, h - bh)(rng);
  return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(x + bw), static_cast<double>(y + bh)};
}

/// Small screen with a mix of large, icon-sized and tiny boxes plus texts;
/// some boxes are placed inside others so that nesting rules fire.
inline screenparse::CandidateSet random_candidates(std::mt19937& rng, std::size_t max_boxes = 20) {
  using namespace screenparse;
  CandidateSet c;
  const int w = std::uniform_int_distribution<int>(60, 200)(rng);
  const int h = std::uniform_int_distribution<int>(60, 200)(rng);
  c.image = {w, h, std::nullopt};
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_boxes)(rng);
  std::vector<BBox> placed;
  static const std::vector<std::string> words = {"Submit", "ok", "@", "x-ray scanner", "Menu", "#1", "Settings", "C",
                                                 "Search", "Q", "Profile", "n"};
  for (std::size_t i = 0; i < n; ++i) {
    BBox b;
    const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
    if (kind < 2) {
      b = random_box(rng, w, h, std::max(w, h) / 3);
    } else if (kind < 7 && !placed.empty() && std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
      const BBox& parent = placed[std::uniform_int_distribution<std::size_t>(0, placed.size() - 1)(rng)];
      const int pw = static_cast<int>(parent.width()), ph = static_cast<int>(parent.height());
      const BBox inner = random_box(rng, std::max(1, pw), std::max(1, ph), 1, std::max(2, std::max(pw, ph) / 2));
      b = {inner.x1 + parent.x1, inner.y1 + parent.y1, inner.x2 + parent.x1, inner.y2 + parent.y1};
    } else {
      const int side = std::max(2, static_cast<int>(std::sqrt(0.012 * w * h)));
      b = random_box(rng, w, h, 1, side + 4);
    }
    placed.push_back(b);
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      c.ocr.push_back({b, words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)], std::nullopt});
    } else {
      c.sam.push_back({b, std::nullopt});
    }
  }
  return c;
}

/// Thresholds drawn around the defaults, with score floors low enough that
/// GROIs survive on small random screens.
inline screenparse::HspConfig random_config(std::mt19937& rng) {
  screenparse::HspConfig cfg;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cfg.a_thresh_groi = 0.05 + 0.2 * u(rng);
  cfg.a_thresh_icon = 0.01 + 0.03 * u(rng);
  cfg.a_thresh_button = 0.001 + 0.008 * u(rng);
  cfg.ios_redundant = 0.3 + 0.6 * u(rng);
  cfg.s_thresh = 4.0 * u(rng);
  cfg.ios_overlap_thresh = u(rng) < 0.3 ? 0.0 : u(rng);
  cfg.ios_inside_thresh = u(rng) < 0.3 ? 0.0 : u(rng);
  cfg.score_area_unit = u(rng) < 0.8 ? screenparse::AreaUnit::kNormalized : screenparse::AreaUnit::kPixel;
  return cfg;
}

}  // namespace testing_support
