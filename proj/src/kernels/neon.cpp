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

// AArch64 variant. Compiled with -ffp-contract=off.

#include <arm_neon.h>

#include <cassert>

#include "screenparse/kernels.hpp"

namespace screenparse::kernels::neon {

namespace {

struct Broadcast {
  float64x2_t x1, y1, x2, y2;
  explicit Broadcast(const BBox& b)
      : x1(vdupq_n_f64(b.x1)), y1(vdupq_n_f64(b.y1)), x2(vdupq_n_f64(b.x2)), y2(vdupq_n_f64(b.y2)) {}
};

inline float64x2_t overlap_area(const Broadcast& a, float64x2_t bx1, float64x2_t by1,
                                float64x2_t bx2, float64x2_t by2) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t w = vmaxq_f64(vsubq_f64(vminq_f64(a.x2, bx2), vmaxq_f64(a.x1, bx1)), zero);
  const float64x2_t h = vmaxq_f64(vsubq_f64(vminq_f64(a.y2, by2), vmaxq_f64(a.y1, by1)), zero);
  return vmulq_f64(w, h);
}

inline std::size_t lanes_set(uint64x2_t mask) {
  return static_cast<std::size_t>((vgetq_lane_u64(mask, 0) & 1u) + (vgetq_lane_u64(mask, 1) & 1u));
}

}  // namespace

void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out) {
  assert(out.size() == boxes.size());
  const std::size_t n = boxes.size();
  const std::size_t body = n - n % 2;
  const double area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
  const float64x2_t denom = vdupq_n_f64(area_a + 1e-3);
  const Broadcast va(a);
  const double* x1 = boxes.x1().data();
  const double* y1 = boxes.y1().data();
  const double* x2 = boxes.x2().data();
  const double* y2 = boxes.y2().data();
  for (std::size_t i = 0; i < body; i += 2) {
    const float64x2_t inter = overlap_area(va, vld1q_f64(x1 + i), vld1q_f64(y1 + i),
                                           vld1q_f64(x2 + i), vld1q_f64(y2 + i));
    vst1q_f64(out.data() + i, vdivq_f64(inter, denom));
  }
  if (body < n) {
    BoxColumns tail;
    tail.push_back(boxes.at(body));
    scalar::ios_row(a, tail, out.subspan(body));
  }
}

RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes) {
  const std::size_t n = boxes.size();
  const std::size_t body = n - n % 2;
  const Broadcast vr(region);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const double* x1 = boxes.x1().data();
  const double* y1 = boxes.y1().data();
  const double* x2 = boxes.x2().data();
  const double* y2 = boxes.y2().data();
  RelationCounts counts;
  for (std::size_t i = 0; i < body; i += 2) {
    const float64x2_t bx1 = vld1q_f64(x1 + i);
    const float64x2_t by1 = vld1q_f64(y1 + i);
    const float64x2_t bx2 = vld1q_f64(x2 + i);
    const float64x2_t by2 = vld1q_f64(y2 + i);
    const uint64x2_t inside = vandq_u64(vandq_u64(vcgeq_f64(bx1, vr.x1), vcgeq_f64(by1, vr.y1)),
                                        vandq_u64(vcleq_f64(bx2, vr.x2), vcleq_f64(by2, vr.y2)));
    const uint64x2_t positive = vcgtq_f64(overlap_area(vr, bx1, by1, bx2, by2), zero);
    const uint64x2_t partial = vbicq_u64(positive, inside);
    counts.inside += lanes_set(inside);
    counts.intersecting += lanes_set(partial);
  }
  if (body < n) {
    BoxColumns tail;
    tail.push_back(boxes.at(body));
    const RelationCounts rest = scalar::relation_counts(region, tail);
    counts.inside += rest.inside;
    counts.intersecting += rest.intersecting;
  }
  return counts;
}

}  // namespace screenparse::kernels::neon
