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

#include "screenparse/candidates.hpp"

#include <algorithm>
#include <fstream>

#include "screenparse/errors.hpp"

namespace screenparse {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorKind::kMalformedInput, message);
}

std::optional<double> unit_interval(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const json& v = j.at(key);
  if (!v.is_number()) malformed(std::string(what) + "." + key + " must be a number");
  const double value = v.get<double>();
  if (!(value >= 0.0 && value <= 1.0)) malformed(std::string(what) + "." + key + " outside [0,1]");
  return value;
}

}  // namespace

BBox clamp_to_image(const BBox& b, double width, double height) {
  // "+ 0.0" folds a negative zero into +0.
  auto clip = [](double v, double hi) { return std::clamp(v, 0.0, hi) + 0.0; };
  return {clip(b.x1, width), clip(b.y1, height), clip(b.x2, width), clip(b.y2, height)};
}

json box_to_json(const BBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

BBox box_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 4) malformed(std::string(what) + ": box must be [x1,y1,x2,y2]");
  double v[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) malformed(std::string(what) + ": box coordinates must be numbers");
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i])) malformed(std::string(what) + ": box coordinates must be finite");
  }
  if (v[0] > v[2] || v[1] > v[3]) malformed(std::string(what) + ": box has x1 > x2 or y1 > y2");
  return {v[0], v[1], v[2], v[3]};
}

ImageInfo image_info_from_json(const json& j) {
  if (!j.is_object()) malformed("\"image\" must be an object");
  ImageInfo info;
  const auto dim = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
      malformed(std::string("image.") + key + " must be an integer");
    }
    const auto value = j.at(key).get<long long>();
    if (value <= 0 || value > 1'000'000) malformed(std::string("image.") + key + " must be positive");
    return static_cast<int>(value);
  };
  info.width = dim("width");
  info.height = dim("height");
  if (j.contains("path") && !j.at("path").is_null()) {
    if (!j.at("path").is_string()) malformed("image.path must be a string");
    info.path = j.at("path").get<std::string>();
  }
  return info;
}

json image_info_to_json(const ImageInfo& info) {
  json j = {{"width", info.width}, {"height", info.height}};
  if (info.path) j["path"] = *info.path;
  return j;
}

CandidateSet candidates_from_json(const json& j) {
  if (!j.is_object()) malformed("candidates document must be an object");
  if (!j.contains("image")) malformed("missing \"image\"");
  CandidateSet out;
  out.image = image_info_from_json(j.at("image"));
  const double w = out.image.width;
  const double h = out.image.height;

  auto list = [&](const char* key) -> const json* {
    if (!j.contains(key)) return nullptr;
    if (!j.at(key).is_array()) malformed(std::string("\"") + key + "\" must be an array");
    return &j.at(key);
  };

  if (const json* sam = list("sam")) {
    for (std::size_t i = 0; i < sam->size(); ++i) {
      const json& item = (*sam)[i];
      const std::string what = "sam[" + std::to_string(i) + "]";
      if (!item.is_object() || !item.contains("box")) malformed(what + " needs a \"box\"");
      SamBox s{clamp_to_image(box_from_json(item.at("box"), what), w, h),
               unit_interval(item, "score", what)};
      if (area(s.box) > 0.0) out.sam.push_back(std::move(s));
    }
  }
  if (const json* ocr = list("ocr")) {
    for (std::size_t i = 0; i < ocr->size(); ++i) {
      const json& item = (*ocr)[i];
      const std::string what = "ocr[" + std::to_string(i) + "]";
      if (!item.is_object() || !item.contains("box")) malformed(what + " needs a \"box\"");
      if (!item.contains("text") || !item.at("text").is_string()) {
        malformed(what + " needs a string \"text\"");
      }
      OcrBox o{clamp_to_image(box_from_json(item.at("box"), what), w, h),
               item.at("text").get<std::string>(), unit_interval(item, "confidence", what)};
      if (area(o.box) > 0.0) out.ocr.push_back(std::move(o));
    }
  }
  return out;
}

json candidates_to_json(const CandidateSet& c) {
  json sam = json::array();
  for (const SamBox& s : c.sam) {
    json item = {{"box", box_to_json(s.box)}};
    if (s.score) item["score"] = *s.score;
    sam.push_back(std::move(item));
  }
  json ocr = json::array();
  for (const OcrBox& o : c.ocr) {
    json item = {{"box", box_to_json(o.box)}, {"text", o.text}};
    if (o.confidence) item["confidence"] = *o.confidence;
    ocr.push_back(std::move(item));
  }
  return {{"image", image_info_to_json(c.image)}, {"sam", std::move(sam)}, {"ocr", std::move(ocr)}};
}

CandidateSet load_candidates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open candidates file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    malformed(path.string() + ": " + e.what());
  }
  return candidates_from_json(j);
}

}  // namespace screenparse
