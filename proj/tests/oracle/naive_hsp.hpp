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

// Reference parser for tests: each screen-parsing rule applied by plain
// enumeration over the boxes, sharing only the data types with the library.

#include "screenparse/candidates.hpp"
#include "screenparse/hsp.hpp"

namespace oracle {

double area(const screenparse::BBox& b);
double inter(const screenparse::BBox& a, const screenparse::BBox& b);
double ios(const screenparse::BBox& a, const screenparse::BBox& b);
bool inside(const screenparse::BBox& outer, const screenparse::BBox& inner);
bool midpoint_inside(const screenparse::BBox& elem, const screenparse::BBox& region);

/// Pixel-count IoS: each unit cell of `a` counted when it also lies in `b`.
double raster_ios(const screenparse::BBox& a, const screenparse::BBox& b);

double info_score(const screenparse::BBox& g, const std::vector<screenparse::BBox>& elements, double area_scale);

screenparse::ScreenHierarchy parse(const screenparse::CandidateSet& c, const screenparse::HspConfig& cfg);

}  // namespace oracle
