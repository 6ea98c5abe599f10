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

// Raster annotation for set-of-marks prompting and the referring lenses.
// Geometry stays real-valued; coordinates are rounded half-up only here.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

#include "screenparse/geometry.hpp"
#include "screenparse/hsp.hpp"

namespace screenparse {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  /// Parses "#RRGGBB". Throws Error(kConfig) otherwise.
  static Rgb from_hex(std::string_view hex);
  std::string hex() const;
  cv::Scalar bgr() const { return {static_cast<double>(b), static_cast<double>(g), static_cast<double>(r)}; }

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RenderStyle {
  Rgb som_box{0xFF, 0x00, 0xFF};
  Rgb tag_background{0xFF, 0x00, 0xFF};
  Rgb tag_text{0xFF, 0xFF, 0xFF};
  Rgb highlight{0x00, 0x00, 0xFF};  // the focused box
  Rgb frame{0xFF, 0x00, 0x00};      // the surrounding context
  Rgb point{0x00, 0x00, 0x00};
  int stroke_px = 2;
  int font_px = 14;
  int point_radius_px = 4;

  friend bool operator==(const RenderStyle&, const RenderStyle&) = default;
};

nlohmann::json style_to_json(const RenderStyle& style);
RenderStyle style_from_json(const nlohmann::json& j, RenderStyle base = {});

int round_half_up(double v);

/// Translation between full-image and crop coordinates.
struct CropTransform {
  int offset_x = 0;
  int offset_y = 0;

  Point to_crop(Point p) const { return {p.x - offset_x, p.y - offset_y}; }
  Point to_full(Point p) const { return {p.x + offset_x, p.y + offset_y}; }
  BBox to_crop(const BBox& b) const {
    return {b.x1 - offset_x, b.y1 - offset_y, b.x2 - offset_x, b.y2 - offset_y};
  }

  friend bool operator==(const CropTransform&, const CropTransform&) = default;
};

struct Crop {
  cv::Mat image;
  CropTransform transform;
};

/// Outlines each element and stamps its numeric id at the box's top-left
/// corner, nudged to stay inside the image.
cv::Mat draw_som(const cv::Mat& image, std::span<const LocalElement> elements,
                 const RenderStyle& style);

/// Outlines box in color and writes label beside it. A zero-area box becomes a
/// single-pixel marker.
cv::Mat draw_region(const cv::Mat& image, const BBox& box, std::string_view label,
                    const RenderStyle& style, Rgb color);
cv::Mat draw_region(const cv::Mat& image, const BBox& box, std::string_view label,
                    const RenderStyle& style);

/// Filled dot centered on p.
cv::Mat draw_point(const cv::Mat& image, Point p, const RenderStyle& style);

/// Ring around the image border in the frame color.
cv::Mat draw_frame(const cv::Mat& image, const RenderStyle& style);

/// Clamps box to the image, rounds to whole pixels and copies the region.
/// Throws Error(kDegenerateCrop) when nothing is left.
Crop crop(const cv::Mat& image, const BBox& box);

cv::Mat blank_canvas(int width, int height);
cv::Mat load_image(const std::filesystem::path& path);
cv::Mat decode_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const cv::Mat& image);
void save_png(const std::filesystem::path& path, const cv::Mat& image);

}  // namespace screenparse
