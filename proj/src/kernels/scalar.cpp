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

#include <algorithm>
#include <cassert>

#include "screenparse/kernels.hpp"

namespace screenparse::kernels {

BoxColumns::BoxColumns(std::span<const BBox> boxes) {
  x1_.reserve(boxes.size());
  y1_.reserve(boxes.size());
  x2_.reserve(boxes.size());
  y2_.reserve(boxes.size());
  for (const BBox& b : boxes) push_back(b);
}

void BoxColumns::push_back(const BBox& b) {
  x1_.push_back(b.x1);
  y1_.push_back(b.y1);
  x2_.push_back(b.x2);
  y2_.push_back(b.y2);
}

void BoxColumns::clear() {
  x1_.clear();
  y1_.clear();
  x2_.clear();
  y2_.clear();
}

namespace scalar {

void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out) {
  assert(out.size() == boxes.size());
  const double area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
  const double denom = area_a + 1e-3;
  const auto x1 = boxes.x1(), y1 = boxes.y1(), x2 = boxes.x2(), y2 = boxes.y2();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const double w = std::max(0.0, std::min(a.x2, x2[i]) - std::max(a.x1, x1[i]));
    const double h = std::max(0.0, std::min(a.y2, y2[i]) - std::max(a.y1, y1[i]));
    out[i] = (w * h) / denom;
  }
}

RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes) {
  RelationCounts counts;
  const auto x1 = boxes.x1(), y1 = boxes.y1(), x2 = boxes.x2(), y2 = boxes.y2();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const bool inside = x1[i] >= region.x1 && y1[i] >= region.y1 && x2[i] <= region.x2 &&
                        y2[i] <= region.y2;
    const double w = std::max(0.0, std::min(region.x2, x2[i]) - std::max(region.x1, x1[i]));
    const double h = std::max(0.0, std::min(region.y2, y2[i]) - std::max(region.y1, y1[i]));
    if (inside) {
      ++counts.inside;
    } else if (w * h > 0.0) {
      ++counts.intersecting;
    }
  }
  return counts;
}

}  // namespace scalar
}  // namespace screenparse::kernels
