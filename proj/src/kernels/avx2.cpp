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

// Compiled with -mavx2 -ffp-contract=off; only reached after a CPUID check.

#include <immintrin.h>

#include <bit>
#include <cassert>

#include "screenparse/kernels.hpp"

namespace screenparse::kernels::avx2 {

namespace {

struct Broadcast {
  __m256d x1, y1, x2, y2;
  explicit Broadcast(const BBox& b)
      : x1(_mm256_set1_pd(b.x1)),
        y1(_mm256_set1_pd(b.y1)),
        x2(_mm256_set1_pd(b.x2)),
        y2(_mm256_set1_pd(b.y2)) {}
};

// max(d, 0) returns +0.0 when d is a zero, matching std::max(0.0, d).
inline __m256d clamp_nonneg(__m256d d) { return _mm256_max_pd(d, _mm256_setzero_pd()); }

inline __m256d overlap_area(const Broadcast& a, __m256d bx1, __m256d by1, __m256d bx2,
                            __m256d by2) {
  const __m256d w = clamp_nonneg(_mm256_sub_pd(_mm256_min_pd(a.x2, bx2), _mm256_max_pd(a.x1, bx1)));
  const __m256d h = clamp_nonneg(_mm256_sub_pd(_mm256_min_pd(a.y2, by2), _mm256_max_pd(a.y1, by1)));
  return _mm256_mul_pd(w, h);
}

}  // namespace

void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out) {
  assert(out.size() == boxes.size());
  const std::size_t n = boxes.size();
  const std::size_t body = n - n % 4;
  const double area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
  const __m256d denom = _mm256_set1_pd(area_a + 1e-3);
  const Broadcast va(a);
  const double* x1 = boxes.x1().data();
  const double* y1 = boxes.y1().data();
  const double* x2 = boxes.x2().data();
  const double* y2 = boxes.y2().data();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d inter = overlap_area(va, _mm256_loadu_pd(x1 + i), _mm256_loadu_pd(y1 + i),
                                       _mm256_loadu_pd(x2 + i), _mm256_loadu_pd(y2 + i));
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(inter, denom));
  }
  if (body < n) {
    BoxColumns tail;
    for (std::size_t i = body; i < n; ++i) tail.push_back(boxes.at(i));
    scalar::ios_row(a, tail, out.subspan(body));
  }
}

RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes) {
  const std::size_t n = boxes.size();
  const std::size_t body = n - n % 4;
  const Broadcast vr(region);
  const __m256d zero = _mm256_setzero_pd();
  const double* x1 = boxes.x1().data();
  const double* y1 = boxes.y1().data();
  const double* x2 = boxes.x2().data();
  const double* y2 = boxes.y2().data();
  RelationCounts counts;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d bx1 = _mm256_loadu_pd(x1 + i);
    const __m256d by1 = _mm256_loadu_pd(y1 + i);
    const __m256d bx2 = _mm256_loadu_pd(x2 + i);
    const __m256d by2 = _mm256_loadu_pd(y2 + i);
    const __m256d inside = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(bx1, vr.x1, _CMP_GE_OQ), _mm256_cmp_pd(by1, vr.y1, _CMP_GE_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(bx2, vr.x2, _CMP_LE_OQ), _mm256_cmp_pd(by2, vr.y2, _CMP_LE_OQ)));
    const __m256d positive = _mm256_cmp_pd(overlap_area(vr, bx1, by1, bx2, by2), zero, _CMP_GT_OQ);
    const __m256d partial = _mm256_andnot_pd(inside, positive);
    counts.inside += static_cast<std::size_t>(std::popcount(
        static_cast<unsigned>(_mm256_movemask_pd(inside))));
    counts.intersecting += static_cast<std::size_t>(std::popcount(
        static_cast<unsigned>(_mm256_movemask_pd(partial))));
  }
  if (body < n) {
    BoxColumns tail;
    for (std::size_t i = body; i < n; ++i) tail.push_back(boxes.at(i));
    const RelationCounts rest = scalar::relation_counts(region, tail);
    counts.inside += rest.inside;
    counts.intersecting += rest.intersecting;
  }
  return counts;
}

}  // namespace screenparse::kernels::avx2
