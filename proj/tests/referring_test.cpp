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

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "screenparse/errors.hpp"
#include "screenparse/referring.hpp"
#include "support/lens_check.hpp"
#include "support/support.hpp"

namespace sp = screenparse;
using testing_support::fixture_dir;
using testing_support::read_json;

namespace {

sp::ScreenHierarchy small_screen() {
  sp::ScreenHierarchy h;
  h.image = {400, 400, std::nullopt};
  h.grois = {{0, {100, 100, 300, 300}, 30.0, {0, 1}}, {1, {0, 0, 400, 400}, 26.0, {}}};
  h.elements = {{0, {120, 120, 200, 200}, sp::ElementKind::kIcon, {}},
                {1, {140, 140, 180, 180}, sp::ElementKind::kButton, {}},
                {2, {10, 10, 50, 50}, sp::ElementKind::kIcon, {}},
                {3, {10, 10, 50, 50}, sp::ElementKind::kIcon, {}}};
  h.orphan_ids = {2, 3};
  return h;
}

TEST(Locate, SmallestElementWins) {
  const auto h = small_screen();
  EXPECT_EQ(sp::locate(h, {150, 150}), (sp::Location{1, 0}));
  EXPECT_EQ(sp::locate(h, {125, 125}), (sp::Location{0, 0}));
  EXPECT_EQ(sp::locate(h, {30, 30}), (sp::Location{2, 1}));  // tie -> lower id; orphan takes the enclosing region
  EXPECT_EQ(sp::locate(h, {150, 250}), (sp::Location{std::nullopt, 0}));  // smallest region
  EXPECT_EQ(sp::locate(h, {350, 50}), (sp::Location{std::nullopt, 1}));
  EXPECT_EQ(sp::locate(h, {400, 400}), (sp::Location{std::nullopt, 1}));
}

TEST(Locate, OutOfBounds) {
  const auto h = small_screen();
  for (sp::Point p : {sp::Point{-1, 5}, sp::Point{401, 0}, sp::Point{0, 400.5}}) {
    try {
      sp::locate(h, p);
      FAIL();
    } catch (const sp::Error& e) {
      EXPECT_EQ(e.kind(), sp::ErrorKind::kPointOutOfBounds);
    }
  }
}

TEST(Lenses, RegionCloseUp) {
  auto h = small_screen();
  h.elements.clear();
  h.grois[0].member_ids.clear();
  cv::Mat image(400, 400, CV_8UC3, cv::Scalar(200, 200, 200));
  const sp::Point p{150, 200};
  const auto where = sp::locate(h, p);
  ASSERT_EQ(where.groi_id, 0);
  const auto lenses = sp::build_lenses(h, image, where, p, {});
  EXPECT_EQ(lenses.lens1.cols, 200);
  EXPECT_EQ(lenses.lens1.rows, 200);
  EXPECT_EQ(lenses.lens1_point, (sp::Point{50, 100}));
  EXPECT_EQ(lenses.lens1.at<cv::Vec3b>(100, 50), cv::Vec3b(0, 0, 0));
  EXPECT_EQ(lenses.lens2.cols, 400);
  EXPECT_EQ(lenses.lens2.at<cv::Vec3b>(299, 299), cv::Vec3b(255, 0, 0));  // region outline, BGR blue
}

TEST(Lenses, FullScreenWithoutRegion) {
  sp::ScreenHierarchy h;
  h.image = {120, 80, std::nullopt};
  cv::Mat image(80, 120, CV_8UC3, cv::Scalar(10, 20, 30));
  const auto lenses = sp::build_lenses(h, image, sp::locate(h, {60, 40}), {60, 40}, {});
  EXPECT_EQ(lenses.lens1.cols, 120);
  EXPECT_EQ(lenses.lens1_point, (sp::Point{60, 40}));
  EXPECT_EQ(lenses.lens1_transform, sp::CropTransform{});
}

TEST(Lenses, UnknownRegionRejected) {
  const auto h = small_screen();
  cv::Mat image(400, 400, CV_8UC3);
  EXPECT_THROW(sp::build_lenses(h, image, {std::nullopt, 5}, {1, 1}, {}), sp::Error);
}

TEST(Lenses, RandomLayouts) {
  std::mt19937 rng(20261015);
  for (int i = 0; i < 200; ++i) {
    ASSERT_EQ(testing_support::check_random_lens(rng), "") << "case " << i;
  }
}

TEST(Lenses, ShippedGoldens) {
  int checked = 0;
  for (const auto& t : read_json(fixture_dir() / "tasks.json")) {
    if (!t.contains("golden_lens1")) continue;
    const auto h = sp::load_hierarchy(fixture_dir() / t["referring_hierarchy"].get<std::string>());
    const cv::Mat image = sp::load_image(fixture_dir() / t["image"].get<std::string>());
    const sp::Point p{t["point"][0].get<double>(), t["point"][1].get<double>()};
    const auto lenses = sp::build_lenses(h, image, sp::locate(h, p), p, {});
    const cv::Mat golden = sp::load_image(fixture_dir() / t["golden_lens1"].get<std::string>());
    ASSERT_EQ(golden.size(), lenses.lens1.size());
    EXPECT_EQ(cv::norm(golden, lenses.lens1, cv::NORM_INF), 0.0) << t["screen"];
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST(ReferringParse, Sections) {
  auto [c, l] = sp::parse_referring_response("Content: a gear icon\nLayout: top right");
  EXPECT_EQ(c, "a gear icon");
  EXPECT_EQ(l, "top right");
  std::tie(c, l) = sp::parse_referring_response("**Layout:** below the title\n\n## CONTENT: Search box\n");
  EXPECT_EQ(c, "Search box");
  EXPECT_EQ(l, "below the title");
  std::tie(c, l) = sp::parse_referring_response("The content is a logo.\n\nIt sits in the header.");
  EXPECT_EQ(c, "The content is a logo.");
  EXPECT_EQ(l, "It sits in the header.");
  std::tie(c, l) = sp::parse_referring_response("Content: multi\nline\nLayout: x");
  EXPECT_EQ(c, "multi\nline");
}

TEST(ReferringParse, Rejects) {
  for (const char* raw : {"", "just one paragraph", "Content: something\nLayout:", "Content:\nLayout: x"}) {
    try {
      sp::parse_referring_response(raw);
      FAIL() << raw;
    } catch (const sp::Error& e) {
      EXPECT_EQ(e.kind(), sp::ErrorKind::kUnparseableResponse);
    }
  }
}

TEST(Refer, NoCallWhenPointOutside) {
  int calls = 0;
  sp::ScriptedTransport t([&](const sp::LvlmRequest&) {
    ++calls;
    return std::string("Content: a\nLayout: b");
  });
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto h = small_screen();
  cv::Mat image(400, 400, CV_8UC3);
  EXPECT_THROW(sp::refer(h, image, {500, 5}, ctx), sp::Error);
  EXPECT_EQ(calls, 0);
}

TEST(Refer, RequestCarriesBothLenses) {
  sp::LvlmRequest seen;
  sp::ScriptedTransport t([&](const sp::LvlmRequest& r) {
    seen = r;
    return std::string("Content: small button\nLayout: inside the icon");
  });
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto h = small_screen();
  cv::Mat image(400, 400, CV_8UC3, cv::Scalar(255, 255, 255));
  sp::LensPair lenses;
  const auto r = sp::refer(h, image, {150, 150}, ctx, &lenses);
  EXPECT_EQ(r.element_id, 1);
  EXPECT_EQ(r.groi_id, 0);
  EXPECT_EQ(r.content, "small button");
  int images = 0;
  std::string text;
  for (const auto& part : seen.user_parts) {
    if (std::holds_alternative<sp::ImagePart>(part)) ++images;
    if (const auto* tp = std::get_if<sp::TextPart>(&part)) text += tp->text;
  }
  EXPECT_EQ(images, 2);
  EXPECT_NE(text.find("(150, 150)"), std::string::npos);
  EXPECT_NE(text.find("element 1"), std::string::npos);
  EXPECT_EQ(lenses.lens1.cols, 200);
  const auto j = sp::referring_result_to_json(r);
  EXPECT_EQ(j["groi_id"], 0);
  EXPECT_EQ(j["element_id"], 1);
}

TEST(Refer, ShippedReplayMatchesTasks) {
  auto replay = sp::ReplayTransport::from_file(fixture_dir() / "replay.jsonl");
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{replay, prompts};
  for (const auto& t : read_json(fixture_dir() / "tasks.json")) {
    const auto h = sp::load_hierarchy(fixture_dir() / t["referring_hierarchy"].get<std::string>());
    const cv::Mat image = sp::load_image(fixture_dir() / t["image"].get<std::string>());
    const sp::Point p{t["point"][0].get<double>(), t["point"][1].get<double>()};
    EXPECT_EQ(sp::referring_result_to_json(sp::refer(h, image, p, ctx)), t["refer"]) << t["screen"];
  }
}

}  // namespace
