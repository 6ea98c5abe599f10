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

#include "screenparse/referring.hpp"

#include <algorithm>
#include <cctype>

#include "screenparse/errors.hpp"
#include "screenparse/response_text.hpp"

namespace screenparse {

using nlohmann::json;

Location locate(const ScreenHierarchy& h, Point p) {
  if (!contains_point(h.image_box(), p)) {
    throw Error(ErrorKind::kPointOutOfBounds, "point (" + format_number(p.x) + ", " + format_number(p.y) +
                                                  ") lies outside the " + std::to_string(h.image.width) +
                                                  "x" + std::to_string(h.image.height) + " screen");
  }
  Location where;
  const LocalElement* best = nullptr;
  for (const LocalElement& e : h.elements) {
    if (!contains_point(e.box, p)) continue;
    if (best == nullptr || area(e.box) < area(best->box) ||
        (area(e.box) == area(best->box) && e.id < best->id)) {
      best = &e;
    }
  }
  if (best != nullptr) {
    where.element_id = best->id;
    for (const Groi& g : h.grois) {
      if (std::find(g.member_ids.begin(), g.member_ids.end(), best->id) != g.member_ids.end()) {
        where.groi_id = g.id;
        return where;
      }
    }
  }
  const Groi* region = nullptr;
  for (const Groi& g : h.grois) {
    if (!contains_point(g.box, p)) continue;
    if (region == nullptr || area(g.box) < area(region->box) ||
        (area(g.box) == area(region->box) && g.id < region->id)) {
      region = &g;
    }
  }
  if (region != nullptr) where.groi_id = region->id;
  return where;
}

LensPair build_lenses(const ScreenHierarchy& h, const cv::Mat& image, const Location& where, Point p,
                      const RenderStyle& style) {
  const Groi* groi = where.groi_id == kFullImage ? nullptr : h.find_groi(where.groi_id);
  if (where.groi_id != kFullImage && groi == nullptr) {
    throw Error(ErrorKind::kMalformedInput, "unknown GROI id " + std::to_string(where.groi_id));
  }
  LensPair lenses;
  const BBox region = groi != nullptr ? groi->box : h.image_box();
  Crop close_up = crop(image, region);
  lenses.lens1_transform = close_up.transform;
  lenses.lens1_point = close_up.transform.to_crop(p);
  cv::Mat lens1 = draw_frame(close_up.image, style);
  if (where.element_id) {
    const LocalElement* e = h.find_element(*where.element_id);
    if (e == nullptr) throw Error(ErrorKind::kMalformedInput, "unknown element id");
    lens1 = draw_region(lens1, close_up.transform.to_crop(e->box), "Element " + std::to_string(e->id), style);
  }
  lenses.lens1 = draw_point(lens1, lenses.lens1_point, style);

  const std::string label = groi != nullptr ? "GROI " + std::to_string(groi->id) : "Full screen";
  lenses.lens2 = draw_region(draw_frame(image, style), region, label, style);
  return lenses;
}

namespace {

// Position just after a "<name>:" marker that starts a line (markdown
// emphasis and heading marks allowed), or npos.
std::pair<std::size_t, std::size_t> find_marker(const std::string& lower, std::string_view name) {
  std::size_t from = 0;
  while (true) {
    const std::size_t pos = lower.find(name, from);
    if (pos == std::string::npos) return {std::string::npos, std::string::npos};
    std::size_t line_start = pos;
    while (line_start > 0 && lower[line_start - 1] != '\n') --line_start;
    const bool at_line_start = std::all_of(lower.begin() + static_cast<long>(line_start),
                                           lower.begin() + static_cast<long>(pos),
                                           [](char ch) { return ch == ' ' || ch == '*' || ch == '#' || ch == '-'; });
    std::size_t after = pos + name.size();
    while (after < lower.size() && lower[after] == '*') ++after;
    if (at_line_start && after < lower.size() && lower[after] == ':') {
      ++after;
      while (after < lower.size() && lower[after] == '*') ++after;
      return {line_start, after};
    }
    from = pos + 1;
  }
}

}  // namespace

std::pair<std::string, std::string> parse_referring_response(std::string_view raw) {
  std::string lower(raw);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  const auto [content_line, content_at] = find_marker(lower, "content");
  const auto [layout_line, layout_at] = find_marker(lower, "layout");
  std::string content, layout;
  if (content_at != std::string::npos && layout_at != std::string::npos) {
    if (content_at < layout_at) {
      content = trim(raw.substr(content_at, layout_line - content_at));
      layout = trim(raw.substr(layout_at));
    } else {
      layout = trim(raw.substr(layout_at, content_line - layout_at));
      content = trim(raw.substr(content_at));
    }
  } else {
    const std::string text = trim(raw);
    std::size_t gap = text.find("\n\n");
    if (const std::size_t crlf = text.find("\r\n\r\n"); crlf != std::string::npos && crlf < gap) gap = crlf;
    if (gap != std::string::npos) {
      content = trim(std::string_view(text).substr(0, gap));
      layout = trim(std::string_view(text).substr(gap));
    }
  }
  if (content.empty() || layout.empty()) {
    throw Error(ErrorKind::kUnparseableResponse, "reply lacks a content and a layout description");
  }
  return {content, layout};
}

ReferringResult refer(const ScreenHierarchy& h, const cv::Mat& image, Point p, AgentContext& ctx,
                      LensPair* lenses_out) {
  const Location where = locate(h, p);
  LensPair lenses = build_lenses(h, image, where, p, ctx.style);

  std::string target;
  if (where.element_id) {
    const LocalElement* e = h.find_element(*where.element_id);
    target = "The point falls on element " + std::to_string(e->id) + " (" +
             std::string(element_kind_name(e->kind));
    if (e->text) target += ", text " + json(*e->text).dump();
    target += ")";
  } else {
    target = "The point falls on no detected element";
  }
  target += where.groi_id == kFullImage ? ", outside every region.\n"
                                        : ", inside GROI " + std::to_string(where.groi_id) + ".\n";

  LvlmRequest req = ctx.new_request();
  req.add_text(ctx.prompts.referring.render(
      {{"POINT_X", format_number(p.x)}, {"POINT_Y", format_number(p.y)}, {"TARGET_INFO", target}}));
  req.add_image(lenses.lens1).add_image(lenses.lens2);
  auto [content, layout] = parse_referring_response(ctx.transport.send(req));
  if (lenses_out != nullptr) *lenses_out = std::move(lenses);
  return {p, where.element_id, where.groi_id, std::move(content), std::move(layout)};
}

json referring_result_to_json(const ReferringResult& r) {
  return {{"point", {r.point.x, r.point.y}},
          {"element_id", r.element_id ? json(*r.element_id) : json(nullptr)},
          {"groi_id", r.groi_id == kFullImage ? json("full") : json(r.groi_id)},
          {"content", r.content},
          {"layout", r.layout}};
}

}  // namespace screenparse
