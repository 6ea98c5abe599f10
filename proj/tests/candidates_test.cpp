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

#include "screenparse/candidates.hpp"

#include <gtest/gtest.h>

#include "screenparse/errors.hpp"
#include "support/support.hpp"

namespace screenparse {
namespace {

using nlohmann::json;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kConfig;
}

TEST(ClampToImage, Examples) {
  EXPECT_EQ(clamp_to_image({-10, 0, 50, 200}, 100, 100), (BBox{0, 0, 50, 100}));
  EXPECT_EQ(clamp_to_image({0, 0, 10, 10}, 100, 100), (BBox{0, 0, 10, 10}));
  const BBox corner = clamp_to_image({150, 150, 160, 160}, 100, 100);
  EXPECT_EQ(corner, (BBox{100, 100, 100, 100}));
  EXPECT_EQ(area(corner), 0.0);
}

TEST(CandidatesJson, CountsAndClamping) {
  const json j = {{"image", {{"width", 100}, {"height", 100}}},
                  {"sam", {{{"box", {-5, -5, 10, 10}}}, {{"box", {0, 0, 50, 50}}, {"score", 0.9}}, {{"box", {1, 1, 2, 2}}}}},
                  {"ocr", {{{"box", {20, 20, 60, 30}}, {"text", "Search"}}, {{"box", {0, 90, 30, 99}}, {"text", "Menu"}}}}};
  const CandidateSet c = candidates_from_json(j);
  ASSERT_EQ(c.sam.size(), 3u);
  ASSERT_EQ(c.ocr.size(), 2u);
  EXPECT_EQ(c.sam[0].box, (BBox{0, 0, 10, 10}));
  EXPECT_EQ(c.sam[1].score, 0.9);
  EXPECT_EQ(c.ocr[1].text, "Menu");
}

TEST(CandidatesJson, DropsZeroAreaAfterClampAndKeepsOrder) {
  const json j = {{"image", {{"width", 100}, {"height", 100}}},
                  {"sam", {{{"box", {0, 0, 5, 5}}}, {{"box", {150, 150, 160, 160}}}, {{"box", {6, 6, 9, 9}}}}}};
  const CandidateSet c = candidates_from_json(j);
  ASSERT_EQ(c.sam.size(), 2u);
  EXPECT_EQ(c.sam[1].box, (BBox{6, 6, 9, 9}));
}

TEST(CandidatesJson, InvertedBoxIsMalformed) {
  const json j = {{"image", {{"width", 100}, {"height", 100}}},
                  {"ocr", {{{"box", {30, 0, 10, 10}}, {"text", "oops"}}}}};
  EXPECT_EQ(kind_of([&] { candidates_from_json(j); }), ErrorKind::kMalformedInput);
}

TEST(CandidatesJson, SchemaViolations) {
  EXPECT_EQ(kind_of([] { candidates_from_json(json::object()); }), ErrorKind::kMalformedInput);
  EXPECT_EQ(kind_of([] { candidates_from_json({{"image", {{"width", 0}, {"height", 10}}}}); }),
            ErrorKind::kMalformedInput);
  EXPECT_EQ(kind_of([] {
              candidates_from_json({{"image", {{"width", 10}, {"height", 10}}}, {"sam", {{{"box", {0, 0, 1}}}}}});
            }),
            ErrorKind::kMalformedInput);
  EXPECT_EQ(kind_of([] {
              candidates_from_json({{"image", {{"width", 10}, {"height", 10}}}, {"ocr", {{{"box", {0, 0, 1, 1}}}}}});
            }),
            ErrorKind::kMalformedInput);
}

TEST(CandidatesJson, EmptyIsValid) {
  const CandidateSet c = candidates_from_json({{"image", {{"width", 10}, {"height", 10}}}});
  EXPECT_TRUE(c.sam.empty());
  EXPECT_TRUE(c.ocr.empty());
}

TEST(CandidatesJson, ReserializeIsIdempotent) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const CandidateSet c = testing_support::random_candidates(rng);
    const json once = candidates_to_json(c);
    const CandidateSet again = candidates_from_json(once);
    EXPECT_EQ(again, c);
    EXPECT_EQ(candidates_to_json(again), once);
    for (const SamBox& s : again.sam) EXPECT_TRUE(is_valid(s.box));
  }
}

TEST(LoadCandidates, MissingFileNamesPath) {
  try {
    load_candidates("/nonexistent/shot.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedInput);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/shot.json"), std::string::npos);
  }
}

TEST(LoadCandidates, ShippedFixture) {
  const CandidateSet c = load_candidates(testing_support::fixture_dir() / "screens" / "account.candidates.json");
  EXPECT_EQ(c.image.width, 640);
  EXPECT_EQ(c.ocr.size(), 1u + 2u + 24u);
}

}  // namespace
}  // namespace screenparse
