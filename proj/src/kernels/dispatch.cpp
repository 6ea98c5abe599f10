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

#include <cstdlib>
#include <string>

#include "screenparse/errors.hpp"
#include "screenparse/kernels.hpp"

namespace screenparse::kernels {

namespace {

using IosRowFn = void (*)(const BBox&, const BoxColumns&, std::span<double>);
using RelationCountsFn = RelationCounts (*)(const BBox&, const BoxColumns&);

struct KernelTable {
  IosRowFn ios_row;
  RelationCountsFn relation_counts;
};

const KernelTable& table_for(Isa isa) {
  static const KernelTable kScalar{&scalar::ios_row, &scalar::relation_counts};
  switch (isa) {
    case Isa::kScalar:
      return kScalar;
    case Isa::kAvx2:
#if defined(SCREENPARSE_HAVE_AVX2)
      if (isa_available(Isa::kAvx2)) {
        static const KernelTable kAvx2{&avx2::ios_row, &avx2::relation_counts};
        return kAvx2;
      }
#endif
      break;
    case Isa::kNeon:
#if defined(SCREENPARSE_HAVE_NEON)
      {
        static const KernelTable kNeon{&neon::ios_row, &neon::relation_counts};
        return kNeon;
      }
#endif
      break;
  }
  throw Error(ErrorKind::kConfig, "kernel ISA not available: " + std::string(isa_name(isa)));
}

Isa select_isa() {
  if (const char* forced = std::getenv("SCREENPARSE_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") return Isa::kScalar;
    if (value == "avx2" && isa_available(Isa::kAvx2)) return Isa::kAvx2;
    if (value == "neon" && isa_available(Isa::kNeon)) return Isa::kNeon;
  }
  if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_available(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(SCREENPARSE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(SCREENPARSE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

void ios_row(const BBox& a, const BoxColumns& boxes, std::span<double> out) {
  table_for(active_isa()).ios_row(a, boxes, out);
}

RelationCounts relation_counts(const BBox& region, const BoxColumns& boxes) {
  return table_for(active_isa()).relation_counts(region, boxes);
}

void ios_row(Isa isa, const BBox& a, const BoxColumns& boxes, std::span<double> out) {
  table_for(isa).ios_row(a, boxes, out);
}

RelationCounts relation_counts(Isa isa, const BBox& region, const BoxColumns& boxes) {
  return table_for(isa).relation_counts(region, boxes);
}

}  // namespace screenparse::kernels
