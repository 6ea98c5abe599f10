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

#include "screenparse/geometry.hpp"

#include <algorithm>

namespace screenparse {

bool is_valid(const BBox& b) {
  return std::isfinite(b.x1) && std::isfinite(b.y1) && std::isfinite(b.x2) &&
         std::isfinite(b.y2) && b.x1 >= 0.0 && b.y1 >= 0.0 && b.x1 <= b.x2 && b.y1 <= b.y2;
}

double area(const BBox& b) { return (b.x2 - b.x1) * (b.y2 - b.y1); }

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double h = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  return w * h;
}

double ios(const BBox& a, const BBox& b) {
  // Operation order mirrors the reference formula so results are bit-identical.
  const double xa = std::max(a.x1, b.x1);
  const double ya = std::max(a.y1, b.y1);
  const double xb = std::min(a.x2, b.x2);
  const double yb = std::min(a.y2, b.y2);
  const double inter = std::max(0.0, xb - xa) * std::max(0.0, yb - ya);
  const double area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
  return inter / (area_a + 1e-3);
}

bool contains(const BBox& outer, const BBox& inner) {
  return inner.x1 >= outer.x1 && inner.y1 >= outer.y1 && inner.x2 <= outer.x2 &&
         inner.y2 <= outer.y2;
}

bool intersects(const BBox& a, const BBox& b) { return intersection_area(a, b) > 0.0; }

bool contains_point(const BBox& b, Point p) {
  return p.x >= b.x1 && p.x <= b.x2 && p.y >= b.y1 && p.y <= b.y2;
}

bool midpoint_in(const BBox& b, const BBox& target) { return contains_point(target, b.center()); }

}  // namespace screenparse
