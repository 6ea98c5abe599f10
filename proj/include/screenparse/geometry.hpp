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

#include <cmath>

namespace screenparse {

/// Pixel-space point. Coordinates are real-valued; rounding happens only when rendering.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle [x1, x2] x [y1, y2] in pixel coordinates.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  Point center() const { return {(x1 + x2) / 2.0, (y1 + y2) / 2.0}; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Finite, ordered (x1 <= x2, y1 <= y2) and non-negative.
bool is_valid(const BBox& b);

double area(const BBox& b);

double intersection_area(const BBox& a, const BBox& b);

/// Intersection over the FIRST box's size: inter / (area(a) + 1e-3).
/// Asymmetric. The additive constant makes zero-area boxes score 0.
double ios(const BBox& a, const BBox& b);

/// Boundary-inclusive: true when inner lies entirely within outer.
bool contains(const BBox& outer, const BBox& inner);

/// Positive-area overlap.
bool intersects(const BBox& a, const BBox& b);

/// Boundary-inclusive point test.
bool contains_point(const BBox& b, Point p);

/// True when the center of b lies inside target (boundary-inclusive).
bool midpoint_in(const BBox& b, const BBox& target);

}  // namespace screenparse
