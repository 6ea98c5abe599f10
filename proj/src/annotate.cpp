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

#include "screenparse/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "screenparse/errors.hpp"

namespace screenparse {

using nlohmann::json;

namespace {

constexpr int kFont = cv::FONT_HERSHEY_SIMPLEX;
// Hershey simplex glyphs are about 22 px tall at scale 1.
double font_scale(const RenderStyle& style) { return style.font_px / 22.0; }
int font_thickness(const RenderStyle& style) { return std::max(1, style.font_px / 12); }

cv::Mat checked_clone(const cv::Mat& image) {
  if (image.empty() || image.type() != CV_8UC3) {
    throw Error(ErrorKind::kMalformedInput, "expected a non-empty 8-bit BGR image");
  }
  return image.clone();
}

struct PixelRect {
  int x1, y1, x2, y2;  // inclusive corners
};

// Real box [x1,x2) x [y1,y2) to inclusive pixel corners, clamped to the image.
PixelRect to_pixels(const BBox& b, const cv::Mat& image) {
  const int w = image.cols, h = image.rows;
  PixelRect r{round_half_up(b.x1), round_half_up(b.y1), round_half_up(b.x2) - 1,
              round_half_up(b.y2) - 1};
  r.x1 = std::clamp(r.x1, 0, w - 1);
  r.y1 = std::clamp(r.y1, 0, h - 1);
  r.x2 = std::clamp(r.x2, r.x1, w - 1);
  r.y2 = std::clamp(r.y2, r.y1, h - 1);
  return r;
}

// Filled label box with text, anchored above (x, y) or just inside when there
// is no room, always fully inside the image.
void stamp_label(cv::Mat& image, int x, int y, std::string_view text, Rgb background, Rgb fg,
                 const RenderStyle& style) {
  if (text.empty()) return;
  int baseline = 0;
  const std::string s(text);
  const cv::Size size = cv::getTextSize(s, kFont, font_scale(style), font_thickness(style), &baseline);
  const int pad = 2;
  const int tag_w = std::min(size.width + 2 * pad, image.cols);
  const int tag_h = std::min(size.height + baseline + 2 * pad, image.rows);
  int left = x;
  int top = y - tag_h >= 0 ? y - tag_h : y;
  left = std::clamp(left, 0, image.cols - tag_w);
  top = std::clamp(top, 0, image.rows - tag_h);
  cv::rectangle(image, cv::Rect(left, top, tag_w, tag_h), background.bgr(), cv::FILLED, cv::LINE_8);
  cv::putText(image, s, cv::Point(left + pad, top + pad + size.height), kFont, font_scale(style),
              fg.bgr(), font_thickness(style), cv::LINE_8);
}

void outline(cv::Mat& image, const BBox& box, Rgb color, int stroke) {
  const PixelRect r = to_pixels(box, image);
  cv::rectangle(image, cv::Point(r.x1, r.y1), cv::Point(r.x2, r.y2), color.bgr(), stroke, cv::LINE_8);
}

}  // namespace

Rgb Rgb::from_hex(std::string_view hex) {
  if (hex.size() != 7 || hex[0] != '#') throw Error(ErrorKind::kConfig, "color must be #RRGGBB");
  unsigned value = 0;
  for (char ch : hex.substr(1)) {
    value <<= 4;
    if (ch >= '0' && ch <= '9') {
      value |= static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      value |= static_cast<unsigned>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      value |= static_cast<unsigned>(ch - 'A' + 10);
    } else {
      throw Error(ErrorKind::kConfig, "color must be #RRGGBB");
    }
  }
  return {static_cast<std::uint8_t>(value >> 16), static_cast<std::uint8_t>(value >> 8),
          static_cast<std::uint8_t>(value)};
}

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
  return buf;
}

json style_to_json(const RenderStyle& s) {
  return {{"som_box", s.som_box.hex()},       {"tag_background", s.tag_background.hex()},
          {"tag_text", s.tag_text.hex()},     {"highlight", s.highlight.hex()},
          {"frame", s.frame.hex()},           {"point", s.point.hex()},
          {"stroke_px", s.stroke_px},         {"font_px", s.font_px},
          {"point_radius_px", s.point_radius_px}};
}

RenderStyle style_from_json(const json& j, RenderStyle base) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "style must be an object");
  try {
    auto color = [&](const char* key, Rgb& field) {
      if (j.contains(key)) field = Rgb::from_hex(j.at(key).get<std::string>());
    };
    color("som_box", base.som_box);
    color("tag_background", base.tag_background);
    color("tag_text", base.tag_text);
    color("highlight", base.highlight);
    color("frame", base.frame);
    color("point", base.point);
    auto px = [&](const char* key, int& field) {
      if (j.contains(key)) field = j.at(key).get<int>();
      if (field < 1) throw Error(ErrorKind::kConfig, std::string(key) + " must be >= 1");
    };
    px("stroke_px", base.stroke_px);
    px("font_px", base.font_px);
    px("point_radius_px", base.point_radius_px);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("style: ") + e.what());
  }
  return base;
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

cv::Mat draw_som(const cv::Mat& image, std::span<const LocalElement> elements,
                 const RenderStyle& style) {
  cv::Mat out = checked_clone(image);
  for (const LocalElement& e : elements) outline(out, e.box, style.som_box, style.stroke_px);
  // Tags go on after every outline so no box line crosses a number.
  for (const LocalElement& e : elements) {
    const PixelRect r = to_pixels(e.box, out);
    stamp_label(out, r.x1, r.y1, std::to_string(e.id), style.tag_background, style.tag_text, style);
  }
  return out;
}

cv::Mat draw_region(const cv::Mat& image, const BBox& box, std::string_view label,
                    const RenderStyle& style, Rgb color) {
  cv::Mat out = checked_clone(image);
  if (area(box) <= 0.0) {
    const PixelRect r = to_pixels(box, out);
    out.at<cv::Vec3b>(r.y1, r.x1) = cv::Vec3b(color.b, color.g, color.r);
    return out;
  }
  outline(out, box, color, style.stroke_px);
  const PixelRect r = to_pixels(box, out);
  stamp_label(out, r.x1, r.y1, label, color, style.tag_text, style);
  return out;
}

cv::Mat draw_region(const cv::Mat& image, const BBox& box, std::string_view label,
                    const RenderStyle& style) {
  return draw_region(image, box, label, style, style.highlight);
}

cv::Mat draw_point(const cv::Mat& image, Point p, const RenderStyle& style) {
  cv::Mat out = checked_clone(image);
  cv::circle(out, cv::Point(round_half_up(p.x), round_half_up(p.y)), style.point_radius_px,
             style.point.bgr(), cv::FILLED, cv::LINE_8);
  return out;
}

cv::Mat draw_frame(const cv::Mat& image, const RenderStyle& style) {
  cv::Mat out = checked_clone(image);
  cv::rectangle(out, cv::Point(0, 0), cv::Point(out.cols - 1, out.rows - 1), style.frame.bgr(),
                style.stroke_px, cv::LINE_8);
  return out;
}

Crop crop(const cv::Mat& image, const BBox& box) {
  const int x1 = std::clamp(round_half_up(box.x1), 0, image.cols);
  const int y1 = std::clamp(round_half_up(box.y1), 0, image.rows);
  const int x2 = std::clamp(round_half_up(box.x2), 0, image.cols);
  const int y2 = std::clamp(round_half_up(box.y2), 0, image.rows);
  if (x2 <= x1 || y2 <= y1) throw Error(ErrorKind::kDegenerateCrop, "crop region has zero area");
  return {image(cv::Rect(x1, y1, x2 - x1, y2 - y1)).clone(), {x1, y1}};
}

cv::Mat blank_canvas(int width, int height) {
  return cv::Mat(height, width, CV_8UC3, cv::Scalar(255, 255, 255));
}

cv::Mat load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMalformedInput, "cannot open image: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const Error&) {
    throw Error(ErrorKind::kMalformedInput, "cannot decode image: " + path.string());
  }
}

cv::Mat decode_image(std::span<const std::uint8_t> bytes) {
  cv::Mat image;
  if (!bytes.empty()) {
    const cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1,
                         const_cast<std::uint8_t*>(bytes.data()));
    image = cv::imdecode(buffer, cv::IMREAD_COLOR);
  }
  if (image.empty()) throw Error(ErrorKind::kMalformedInput, "cannot decode image bytes");
  return image;
}

std::vector<std::uint8_t> encode_png(const cv::Mat& image) {
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", image, bytes)) {
    throw Error(ErrorKind::kMalformedInput, "PNG encoding failed");
  }
  return bytes;
}

void save_png(const std::filesystem::path& path, const cv::Mat& image) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kMalformedInput, "cannot write image: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace screenparse
