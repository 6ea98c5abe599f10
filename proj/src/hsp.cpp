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

#include "screenparse/hsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "screenparse/errors.hpp"
#include "screenparse/kernels.hpp"

namespace screenparse {

using nlohmann::json;

std::string_view task_name(Task task) {
  return task == Task::kGrounding ? "grounding" : "referring";
}

Task task_from_name(std::string_view name) {
  if (name == "grounding") return Task::kGrounding;
  if (name == "referring") return Task::kReferring;
  throw Error(ErrorKind::kConfig, "unknown task: " + std::string(name));
}

std::string_view element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::kIcon: return "icon";
    case ElementKind::kButton: return "button";
    case ElementKind::kText: return "text";
    case ElementKind::kPicture: return "picture";
  }
  return "icon";
}

ElementKind element_kind_from_name(std::string_view name) {
  if (name == "icon") return ElementKind::kIcon;
  if (name == "button") return ElementKind::kButton;
  if (name == "text") return ElementKind::kText;
  if (name == "picture") return ElementKind::kPicture;
  throw Error(ErrorKind::kMalformedInput, "unknown element kind: " + std::string(name));
}

const std::vector<std::string>& default_ocr_ignore_tokens() {
  static const std::vector<std::string> kTokens = {
      "@", "#",  "x",  "?",  "{",   "}", "<",  ">", "&",  "`",  "~",  "\\", "=",
      "C", "Q",  "88", "83", "98",  "15J", "^", "0e", "n", "E", "ya", "ch", "893"};
  return kTokens;
}

HspConfig HspConfig::for_task(Task task) {
  HspConfig cfg;
  cfg.task = task;
  if (task == Task::kReferring) {
    cfg.s_thresh = 10.0;
    cfg.ios_overlap_thresh = 0.0;
    cfg.ios_inside_thresh = 0.0;
  }
  return cfg;
}

void HspConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::kConfig, m); };
  if (!(a_thresh_button > 0.0 && a_thresh_button < a_thresh_icon && a_thresh_icon < a_thresh_groi)) {
    fail("area thresholds must satisfy 0 < button < icon < groi");
  }
  for (double t : {ios_redundant, ios_overlap_thresh, ios_inside_thresh}) {
    if (!(t >= 0.0 && t <= 1.0)) fail("IoS thresholds must lie in [0,1]");
  }
  if (!(aspect_low < aspect_high)) fail("aspect ratio range must satisfy low < high");
  if (!(s_thresh >= 0.0)) fail("s_thresh must be non-negative");
  if (ocr_ignore_max_len < 0) fail("ocr_ignore_max_len must be non-negative");
}

json hsp_config_to_json(const HspConfig& cfg) {
  return {{"task", task_name(cfg.task)},
          {"a_thresh_groi", cfg.a_thresh_groi},
          {"a_thresh_icon", cfg.a_thresh_icon},
          {"a_thresh_button", cfg.a_thresh_button},
          {"ios_redundant", cfg.ios_redundant},
          {"s_thresh", cfg.s_thresh},
          {"ios_overlap_thresh", cfg.ios_overlap_thresh},
          {"ios_inside_thresh", cfg.ios_inside_thresh},
          {"aspect_ratio_range", {cfg.aspect_low, cfg.aspect_high}},
          {"ocr_ignore_tokens", cfg.ocr_ignore_tokens},
          {"ocr_ignore_max_len", cfg.ocr_ignore_max_len},
          {"score_area_unit", cfg.score_area_unit == AreaUnit::kNormalized ? "normalized" : "pixel"}};
}

HspConfig apply_hsp_config_json(HspConfig cfg, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "hsp config must be an object");
  try {
    if (j.contains("task")) cfg = HspConfig::for_task(task_from_name(j.at("task").get<std::string>()));
    auto num = [&](const char* key, double& field) {
      if (j.contains(key)) field = j.at(key).get<double>();
    };
    num("a_thresh_groi", cfg.a_thresh_groi);
    num("a_thresh_icon", cfg.a_thresh_icon);
    num("a_thresh_button", cfg.a_thresh_button);
    num("ios_redundant", cfg.ios_redundant);
    num("s_thresh", cfg.s_thresh);
    num("ios_overlap_thresh", cfg.ios_overlap_thresh);
    num("ios_inside_thresh", cfg.ios_inside_thresh);
    if (j.contains("aspect_ratio_range")) {
      const auto range = j.at("aspect_ratio_range").get<std::vector<double>>();
      if (range.size() != 2) throw Error(ErrorKind::kConfig, "aspect_ratio_range needs 2 values");
      cfg.aspect_low = range[0];
      cfg.aspect_high = range[1];
    }
    if (j.contains("ocr_ignore_tokens")) {
      cfg.ocr_ignore_tokens = j.at("ocr_ignore_tokens").get<std::vector<std::string>>();
    }
    if (j.contains("ocr_ignore_max_len")) cfg.ocr_ignore_max_len = j.at("ocr_ignore_max_len").get<int>();
    if (j.contains("score_area_unit")) {
      const auto unit = j.at("score_area_unit").get<std::string>();
      if (unit == "normalized") {
        cfg.score_area_unit = AreaUnit::kNormalized;
      } else if (unit == "pixel") {
        cfg.score_area_unit = AreaUnit::kPixel;
      } else {
        throw Error(ErrorKind::kConfig, "score_area_unit must be normalized or pixel");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("hsp config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

const LocalElement* ScreenHierarchy::find_element(int id) const {
  for (const LocalElement& e : elements) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const Groi* ScreenHierarchy::find_groi(int id) const {
  for (const Groi& g : grois) {
    if (g.id == id) return &g;
  }
  return nullptr;
}

BBox ScreenHierarchy::image_box() const {
  return {0.0, 0.0, static_cast<double>(image.width), static_cast<double>(image.height)};
}

ClassifiedCandidates classify_candidates(const CandidateSet& c, const HspConfig& cfg) {
  const double image_area = static_cast<double>(c.image.width) * c.image.height;
  const double groi_t = cfg.a_thresh_groi * image_area;
  const double icon_t = cfg.a_thresh_icon * image_area;
  const double button_t = cfg.a_thresh_button * image_area;
  ClassifiedCandidates out;
  for (const SamBox& s : c.sam) {
    const double a = area(s.box);
    if (a > groi_t) {
      out.grois.push_back(s.box);
    } else if (a > button_t && a < icon_t) {
      out.icons.push_back(s.box);
    } else if (a < button_t) {
      out.buttons.push_back(s.box);
    }
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
}

std::vector<OcrBox> filter_ocr_false_positives(std::span<const OcrBox> ocr, const HspConfig& cfg) {
  std::vector<OcrBox> kept;
  for (const OcrBox& o : ocr) {
    const bool short_text = utf8_length(o.text) < static_cast<std::size_t>(cfg.ocr_ignore_max_len);
    const bool has_token = std::any_of(
        cfg.ocr_ignore_tokens.begin(), cfg.ocr_ignore_tokens.end(),
        [&](const std::string& t) { return !t.empty() && o.text.find(t) != std::string::npos; });
    if (!(short_text && has_token)) kept.push_back(o);
  }
  return kept;
}

std::vector<BBox> remove_icons_overlapping_text(std::span<const BBox> icons,
                                                std::span<const OcrBox> texts) {
  std::vector<BBox> kept;
  for (const BBox& icon : icons) {
    const bool touches = std::any_of(texts.begin(), texts.end(), [&](const OcrBox& t) {
      return contains(t.box, icon) || intersects(icon, t.box);
    });
    if (!touches) kept.push_back(icon);
  }
  return kept;
}

std::vector<BBox> filter_square_icons(std::span<const BBox> icons, const HspConfig& cfg) {
  std::vector<BBox> kept;
  for (const BBox& icon : icons) {
    if (icon.height() <= 0.0) continue;
    const double ratio = icon.width() / icon.height();
    if (ratio >= cfg.aspect_low && ratio <= cfg.aspect_high) kept.push_back(icon);
  }
  return kept;
}

FilteredElements remove_redundant_elements(std::span<const BBox> icons,
                                           std::span<const BBox> buttons,
                                           std::span<const OcrBox> texts, const HspConfig& cfg) {
  struct Entry {
    BBox box;
    bool is_icon;
    std::size_t index;
  };
  std::vector<Entry> order;
  order.reserve(icons.size() + buttons.size());
  for (std::size_t i = 0; i < icons.size(); ++i) order.push_back({icons[i], true, i});
  for (std::size_t i = 0; i < buttons.size(); ++i) order.push_back({buttons[i], false, i});
  std::stable_sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    const double aa = area(a.box), ab = area(b.box);
    if (aa != ab) return aa > ab;
    return a.is_icon && !b.is_icon;
  });

  kernels::BoxColumns kept;
  for (const OcrBox& t : texts) kept.push_back(t.box);
  std::vector<bool> keep_icon(icons.size(), false), keep_button(buttons.size(), false);
  std::vector<double> row;
  for (const Entry& e : order) {
    row.resize(kept.size());
    kernels::ios_row(e.box, kept, row);
    bool redundant = false;
    for (std::size_t k = 0; k < kept.size() && !redundant; ++k) {
      redundant = row[k] > cfg.ios_redundant || contains(kept.at(k), e.box);
    }
    if (redundant) continue;
    kept.push_back(e.box);
    (e.is_icon ? keep_icon : keep_button)[e.index] = true;
  }

  FilteredElements out;
  for (std::size_t i = 0; i < icons.size(); ++i) {
    if (keep_icon[i]) out.icons.push_back(icons[i]);
  }
  for (std::size_t i = 0; i < buttons.size(); ++i) {
    if (keep_button[i]) out.buttons.push_back(buttons[i]);
  }
  out.texts.assign(texts.begin(), texts.end());
  return out;
}

namespace {

double score_from_counts(const kernels::RelationCounts& counts, double scaled_area) {
  return static_cast<double>(counts.inside) /
         std::sqrt(1.0 + static_cast<double>(counts.intersecting) * scaled_area);
}

}  // namespace

double information_score(const BBox& g, std::span<const BBox> elements, double area_scale) {
  const kernels::BoxColumns columns(elements);
  return score_from_counts(kernels::relation_counts(g, columns), area(g) * area_scale);
}

std::vector<Groi> nms_grois(std::span<const BBox> cands, std::span<const double> scores,
                            const HspConfig& cfg) {
  if (cands.size() != scores.size()) {
    throw Error(ErrorKind::kMalformedInput, "nms_grois: candidate/score count mismatch");
  }
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return area(cands[a]) > area(cands[b]);
  });

  std::vector<Groi> selected;
  for (std::size_t idx : order) {
    const BBox& current = cands[idx];
    if (scores[idx] < cfg.s_thresh) continue;
    const bool rejected = std::any_of(selected.begin(), selected.end(), [&](const Groi& s) {
      const double overlap = ios(current, s.box);
      const bool inside = contains(s.box, current);
      if (inside && overlap > cfg.ios_inside_thresh) return true;
      if (!inside && intersects(current, s.box) && overlap > cfg.ios_overlap_thresh) return true;
      return contains(current, s.box);
    });
    if (rejected) continue;
    selected.push_back({static_cast<int>(selected.size()), current, scores[idx], {}});
  }
  return selected;
}

ScreenHierarchy parse_screen(const CandidateSet& c, const HspConfig& cfg) {
  const ClassifiedCandidates classes = classify_candidates(c, cfg);
  const std::vector<OcrBox> texts = filter_ocr_false_positives(c.ocr, cfg);
  const std::vector<BBox> icons =
      filter_square_icons(remove_icons_overlapping_text(classes.icons, texts), cfg);
  FilteredElements filtered = remove_redundant_elements(icons, classes.buttons, texts, cfg);

  struct Pending {
    LocalElement element;
    int kind_rank;
    std::size_t seq;
  };
  std::vector<Pending> pending;
  std::size_t seq = 0;
  for (OcrBox& t : filtered.texts) {
    pending.push_back({{0, t.box, ElementKind::kText, std::move(t.text)}, 0, seq++});
  }
  for (const BBox& b : filtered.icons) pending.push_back({{0, b, ElementKind::kIcon, {}}, 1, seq++});
  for (const BBox& b : filtered.buttons) {
    pending.push_back({{0, b, ElementKind::kButton, {}}, 2, seq++});
  }
  // Reading order: top-to-bottom, then left-to-right.
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    const BBox& x = a.element.box;
    const BBox& y = b.element.box;
    if (x.y1 != y.y1) return x.y1 < y.y1;
    if (x.x1 != y.x1) return x.x1 < y.x1;
    if (a.kind_rank != b.kind_rank) return a.kind_rank < b.kind_rank;
    return a.seq < b.seq;
  });

  ScreenHierarchy h;
  h.image = c.image;
  h.meta = {{"hsp", hsp_config_to_json(cfg)}};
  h.elements.reserve(pending.size());
  for (Pending& p : pending) {
    p.element.id = static_cast<int>(h.elements.size());
    h.elements.push_back(std::move(p.element));
  }

  kernels::BoxColumns element_boxes;
  for (const LocalElement& e : h.elements) element_boxes.push_back(e.box);
  const double image_area = static_cast<double>(c.image.width) * c.image.height;
  const double area_scale = cfg.score_area_unit == AreaUnit::kNormalized ? 1.0 / image_area : 1.0;
  std::vector<double> scores;
  scores.reserve(classes.grois.size());
  for (const BBox& g : classes.grois) {
    scores.push_back(
        score_from_counts(kernels::relation_counts(g, element_boxes), area(g) * area_scale));
  }
  h.grois = nms_grois(classes.grois, scores, cfg);

  // Each element joins the GROI holding its midpoint; ties go to the higher
  // score, then the smaller area, then the lower id.
  for (const LocalElement& e : h.elements) {
    Groi* best = nullptr;
    for (Groi& g : h.grois) {
      if (!midpoint_in(e.box, g.box)) continue;
      if (best == nullptr || g.info_score > best->info_score ||
          (g.info_score == best->info_score && area(g.box) < area(best->box))) {
        best = &g;
      }
    }
    if (best != nullptr) {
      best->member_ids.push_back(e.id);
    } else {
      h.orphan_ids.push_back(e.id);
    }
  }
  return h;
}

json hierarchy_to_json(const ScreenHierarchy& h) {
  json grois = json::array();
  for (const Groi& g : h.grois) {
    grois.push_back({{"id", g.id},
                     {"box", box_to_json(g.box)},
                     {"info_score", g.info_score},
                     {"member_ids", g.member_ids}});
  }
  json elements = json::array();
  for (const LocalElement& e : h.elements) {
    json item = {{"id", e.id}, {"box", box_to_json(e.box)}, {"kind", element_kind_name(e.kind)}};
    if (e.text) item["text"] = *e.text;
    elements.push_back(std::move(item));
  }
  json out = {{"image", image_info_to_json(h.image)},
              {"grois", std::move(grois)},
              {"elements", std::move(elements)},
              {"orphan_ids", h.orphan_ids}};
  if (!h.meta.empty()) out["meta"] = h.meta;
  return out;
}

ScreenHierarchy hierarchy_from_json(const json& j) {
  auto malformed = [](const std::string& m) { throw Error(ErrorKind::kMalformedInput, m); };
  if (!j.is_object() || !j.contains("image")) malformed("hierarchy needs an \"image\" object");
  ScreenHierarchy h;
  try {
    h.image = image_info_from_json(j.at("image"));
    for (const json& e : j.value("elements", json::array())) {
      LocalElement el;
      el.id = e.at("id").get<int>();
      el.box = box_from_json(e.at("box"), "element");
      el.kind = element_kind_from_name(e.at("kind").get<std::string>());
      if (e.contains("text") && !e.at("text").is_null()) el.text = e.at("text").get<std::string>();
      if (h.find_element(el.id) != nullptr) malformed("duplicate element id " + std::to_string(el.id));
      h.elements.push_back(std::move(el));
    }
    for (const json& g : j.value("grois", json::array())) {
      Groi groi;
      groi.id = g.at("id").get<int>();
      groi.box = box_from_json(g.at("box"), "groi");
      groi.info_score = g.at("info_score").get<double>();
      groi.member_ids = g.value("member_ids", std::vector<int>{});
      for (int id : groi.member_ids) {
        if (h.find_element(id) == nullptr) malformed("groi member references unknown element");
      }
      if (h.find_groi(groi.id) != nullptr) malformed("duplicate groi id " + std::to_string(groi.id));
      h.grois.push_back(std::move(groi));
    }
    h.orphan_ids = j.value("orphan_ids", std::vector<int>{});
    if (j.contains("meta")) h.meta = j.at("meta");
  } catch (const json::exception& e) {
    malformed(std::string("hierarchy: ") + e.what());
  }
  return h;
}

ScreenHierarchy load_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMalformedInput, "cannot open hierarchy file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, path.string() + ": " + e.what());
  }
  return hierarchy_from_json(j);
}

}  // namespace screenparse
