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

#include "naive_hsp.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace oracle {

using screenparse::BBox;

double area(const BBox& b) { return (b.x2 - b.x1) * (b.y2 - b.y1); }

double inter(const BBox& a, const BBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

double ios(const BBox& a, const BBox& b) { return oracle::inter(a, b) / (oracle::area(a) + 1e-3); }

bool inside(const BBox& outer, const BBox& inner) {
  return outer.x1 <= inner.x1 && outer.y1 <= inner.y1 && inner.x2 <= outer.x2 && inner.y2 <= outer.y2;
}

bool midpoint_inside(const BBox& elem, const BBox& region) {
  const double mx = (elem.x1 + elem.x2) / 2, my = (elem.y1 + elem.y2) / 2;
  return region.x1 <= mx && mx <= region.x2 && region.y1 <= my && my <= region.y2;
}

double raster_ios(const BBox& a, const BBox& b) {
  long hits = 0;
  for (long y = static_cast<long>(a.y1); y < static_cast<long>(a.y2); ++y) {
    for (long x = static_cast<long>(a.x1); x < static_cast<long>(a.x2); ++x) {
      const double cx = x + 0.5, cy = y + 0.5;
      if (b.x1 <= cx && cx < b.x2 && b.y1 <= cy && cy < b.y2) ++hits;
    }
  }
  return static_cast<double>(hits) / (oracle::area(a) + 1e-3);
}

double info_score(const BBox& g, const std::vector<BBox>& elements, double area_scale) {
  int n_in = 0, n_inter = 0;
  for (const BBox& e : elements) {
    if (inside(g, e)) {
      ++n_in;
    } else if (oracle::inter(g, e) > 0) {
      ++n_inter;
    }
  }
  return n_in / std::sqrt(1.0 + n_inter * (oracle::area(g) * area_scale));
}

namespace {

struct Sized {
  BBox box;
  bool icon;
  std::size_t index;
};

bool has_ignored_token(const std::string& text, const std::vector<std::string>& tokens) {
  for (const std::string& t : tokens) {
    if (!t.empty() && text.find(t) != std::string::npos) return true;
  }
  return false;
}

std::size_t code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80 ? 1 : 0;
  return n;
}

}  // namespace

screenparse::ScreenHierarchy parse(const screenparse::CandidateSet& c, const screenparse::HspConfig& cfg) {
  using namespace screenparse;
  const double img = static_cast<double>(c.image.width) * c.image.height;

  std::vector<BBox> grois, icons, buttons;
  for (const SamBox& s : c.sam) {
    const double a = oracle::area(s.box);
    if (a > cfg.a_thresh_groi * img) grois.push_back(s.box);
    else if (a > cfg.a_thresh_button * img && a < cfg.a_thresh_icon * img) icons.push_back(s.box);
    else if (a < cfg.a_thresh_button * img) buttons.push_back(s.box);
  }

  std::vector<OcrBox> texts;
  for (const OcrBox& o : c.ocr) {
    if (code_points(o.text) < static_cast<std::size_t>(cfg.ocr_ignore_max_len) &&
        has_ignored_token(o.text, cfg.ocr_ignore_tokens)) {
      continue;
    }
    texts.push_back(o);
  }

  std::vector<BBox> squares;
  for (const BBox& icon : icons) {
    bool touches_text = false;
    for (const OcrBox& t : texts) touches_text = touches_text || inside(t.box, icon) || oracle::inter(icon, t.box) > 0;
    if (touches_text) continue;
    const double w = icon.x2 - icon.x1, h = icon.y2 - icon.y1;
    if (h <= 0) continue;
    if (w / h < cfg.aspect_low || w / h > cfg.aspect_high) continue;
    squares.push_back(icon);
  }

  // largest first; icons before buttons on equal area; then input order
  std::vector<Sized> pool;
  for (std::size_t i = 0; i < squares.size(); ++i) pool.push_back({squares[i], true, i});
  for (std::size_t i = 0; i < buttons.size(); ++i) pool.push_back({buttons[i], false, i});
  std::vector<bool> visited(pool.size(), false);
  std::vector<BBox> kept;
  for (const OcrBox& t : texts) kept.push_back(t.box);
  std::vector<bool> icon_kept(squares.size(), false), button_kept(buttons.size(), false);
  for (std::size_t round = 0; round < pool.size(); ++round) {
    std::size_t pick = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (visited[i]) continue;
      if (pick == pool.size()) {
        pick = i;
        continue;
      }
      const double ai = oracle::area(pool[i].box), ap = oracle::area(pool[pick].box);
      if (ai > ap || (ai == ap && pool[i].icon && !pool[pick].icon)) pick = i;
    }
    visited[pick] = true;
    bool redundant = false;
    for (const BBox& k : kept) redundant = redundant || inside(k, pool[pick].box) || oracle::ios(pool[pick].box, k) > cfg.ios_redundant;
    if (redundant) continue;
    kept.push_back(pool[pick].box);
    (pool[pick].icon ? icon_kept : button_kept)[pool[pick].index] = true;
  }

  struct Item {
    LocalElement e;
    int rank;
    std::size_t seq;
  };
  std::vector<Item> items;
  std::size_t seq = 0;
  for (const OcrBox& t : texts) items.push_back({{0, t.box, ElementKind::kText, t.text}, 0, seq++});
  for (std::size_t i = 0; i < squares.size(); ++i) {
    if (icon_kept[i]) items.push_back({{0, squares[i], ElementKind::kIcon, {}}, 1, seq++});
  }
  for (std::size_t i = 0; i < buttons.size(); ++i) {
    if (button_kept[i]) items.push_back({{0, buttons[i], ElementKind::kButton, {}}, 2, seq++});
  }

  ScreenHierarchy h;
  h.image = c.image;
  // selection sort into reading order
  std::vector<bool> placed(items.size(), false);
  for (std::size_t n = 0; n < items.size(); ++n) {
    std::size_t best = items.size();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (placed[i]) continue;
      if (best == items.size()) {
        best = i;
        continue;
      }
      const Item& a = items[i];
      const Item& b = items[best];
      const bool before = a.e.box.y1 != b.e.box.y1   ? a.e.box.y1 < b.e.box.y1
                          : a.e.box.x1 != b.e.box.x1 ? a.e.box.x1 < b.e.box.x1
                          : a.rank != b.rank         ? a.rank < b.rank
                                                     : a.seq < b.seq;
      if (before) best = i;
    }
    placed[best] = true;
    LocalElement e = items[best].e;
    e.id = static_cast<int>(n);
    h.elements.push_back(e);
  }

  std::vector<BBox> element_boxes;
  for (const LocalElement& e : h.elements) element_boxes.push_back(e.box);
  const double scale = cfg.score_area_unit == AreaUnit::kNormalized ? 1.0 / img : 1.0;
  std::vector<double> scores;
  for (const BBox& g : grois) scores.push_back(info_score(g, element_boxes, scale));

  std::vector<bool> done(grois.size(), false);
  for (std::size_t n = 0; n < grois.size(); ++n) {
    std::size_t best = grois.size();
    for (std::size_t i = 0; i < grois.size(); ++i) {
      if (done[i]) continue;
      if (best == grois.size() || scores[i] > scores[best] ||
          (scores[i] == scores[best] && oracle::area(grois[i]) > oracle::area(grois[best]))) {
        best = i;
      }
    }
    done[best] = true;
    if (scores[best] < cfg.s_thresh) continue;
    const BBox& cand = grois[best];
    bool reject = false;
    for (const Groi& s : h.grois) {
      const double o = oracle::ios(cand, s.box);
      if (inside(s.box, cand) && o > cfg.ios_inside_thresh) reject = true;
      if (!inside(s.box, cand) && oracle::inter(cand, s.box) > 0 && o > cfg.ios_overlap_thresh) reject = true;
      if (inside(cand, s.box)) reject = true;
    }
    if (!reject) h.grois.push_back({static_cast<int>(h.grois.size()), cand, scores[best], {}});
  }

  for (const LocalElement& e : h.elements) {
    int owner = -1;
    for (const Groi& g : h.grois) {
      if (!midpoint_inside(e.box, g.box)) continue;
      if (owner < 0) {
        owner = g.id;
        continue;
      }
      const Groi& o = h.grois[static_cast<std::size_t>(owner)];
      if (g.info_score > o.info_score || (g.info_score == o.info_score && oracle::area(g.box) < oracle::area(o.box))) owner = g.id;
    }
    if (owner < 0) {
      h.orphan_ids.push_back(e.id);
    } else {
      h.grois[static_cast<std::size_t>(owner)].member_ids.push_back(e.id);
    }
  }
  return h;
}

}  // namespace oracle
