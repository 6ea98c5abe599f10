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

// Batch box-relation kernels. Each kernel has a scalar reference implementation
// and vectorized variants (AVX2 on x86-64, NEON on AArch64) selected at runtime.
// All variants are bit-identical to the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "screenparse/geometry.hpp"

namespace screenparse::kernels {

/// Structure-of-arrays box storage for the vector kernels.
class BoxColumns {
 public:
  BoxColumns() = default;
  explicit BoxColumns(std::span<const BBox> boxes);

  void push_back(const BBox& b);
  void clear();
  std::size_t size() const { return x1_.size(); }
  bool empty() const { return x1_.empty(); }
  BBox at(std::size_t i) const { return {x1_[i], y1_[i], x2_[i], y2_[i]}; }

  std::span<const double> x1() const { return x1_; }
  std::span<const double> y1() const { return y1_; }
  std::span<const double> x2() const { return x2_; }
  std::span<const double> y2() const { return y2_; }

 private:
  std::vector<double> x1_, y1_, x2_, y2_;
};

struct RelationCounts {
  std::size_t inside = 0;        // boxes fully inside the region
  std::size_t intersecting = 0;  // positive overlap but not inside

  friend bool operator==(const RelationCounts&, const RelationCounts&) = default;
};

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

/// ISA used by the dispatching entry points. Chosen once per process: the best
/// available, unless SCREENPARSE_SIMD=scalar|avx2|neon forces one.
Isa active_isa();

/// out[i] = ios(a, boxes[i]). out.size() must equal boxes.size().
void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out);

/// Inside/intersecting counts of boxes relative to region.
RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes);

/// Explicit-ISA entry points, used by the equivalence tests.
void ios_row(Isa isa, const BBox& a, const BoxColumns& boxes, std::span<double> out);
RelationCounts relation_counts(Isa isa, const BBox& region, const BoxColumns& boxes);

namespace scalar {
void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out);
RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes);
}  // namespace scalar

#if defined(SCREENPARSE_HAVE_AVX2)
namespace avx2 {
void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out);
RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes);
}  // namespace avx2
#endif

#if defined(SCREENPARSE_HAVE_NEON)
namespace neon {
void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out);
RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes);
}  // namespace neon
#endif

}  // namespace screenparse::kernels
