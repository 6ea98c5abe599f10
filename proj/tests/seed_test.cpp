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

#include <string>
#include <vector>

#include "screenparse/errors.hpp"
#include "screenparse/prompts.hpp"
#include "screenparse/seed.hpp"
#include "support/seed_cases.hpp"

namespace sp = screenparse;
using testing_support::seed_cases;
using testing_support::seed_screen;

namespace {

class SeedCaseTest : public ::testing::TestWithParam<testing_support::SeedCase> {};

TEST_P(SeedCaseTest, ParsesOrRejectsCleanly) {
  EXPECT_EQ(testing_support::check_seed_case(GetParam()), "");
}

INSTANTIATE_TEST_SUITE_P(Adversarial, SeedCaseTest, ::testing::ValuesIn(seed_cases()),
                         [](const auto& info) { return info.param.name; });

TEST(SeedLabels, NameVariants) {
  EXPECT_EQ(sp::seed_label_from_name("Paired"), sp::SeedLabel::kPaired);
  EXPECT_EQ(sp::seed_label_from_name(" actionable text "), sp::SeedLabel::kActionableText);
  EXPECT_EQ(sp::seed_label_from_name("PICTURE"), sp::SeedLabel::kPicture);
  EXPECT_FALSE(sp::seed_label_from_name("icon").has_value());
  for (auto l : {sp::SeedLabel::kPaired, sp::SeedLabel::kStandalone, sp::SeedLabel::kPicture,
                 sp::SeedLabel::kActionableText}) {
    EXPECT_EQ(sp::seed_label_from_name(sp::seed_label_name(l)), l);
  }
}

TEST(SeedListing, IconsThenTexts) {
  const auto h = seed_screen();
  const std::vector<int> scope = {3, 0, 1};
  EXPECT_EQ(sp::format_element_listing(h, scope),
            "Icons:\n0, icon, [10, 10, 30, 30]\nTexts:\n3, text, [10, 60, 150, 80], \"Settings page\"\n"
            "1, text, [40, 12, 120, 28], \"Search\"");
  const std::vector<int> only_icon = {2};
  EXPECT_EQ(sp::format_element_listing(h, only_icon), "Icons:\n2, icon, [150, 10, 170, 30]\nTexts:\n(none)");
}

TEST(SeedParse, ScopeRestrictsOutput) {
  const auto h = seed_screen();
  const std::vector<int> scope = {1, 3};
  const auto d = sp::parse_seed_response(testing_support::kGoodArray, h, scope);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].element_id, 1);
  EXPECT_EQ(d[0].label, sp::SeedLabel::kActionableText);
  EXPECT_EQ(d[0].associated_ids, std::vector<int>{0});
  EXPECT_EQ(d[1].element_id, 3);
  EXPECT_EQ(d[1].description, "link to the settings page");
}

TEST(SeedParse, FallbackUsesOcrText) {
  const auto h = seed_screen();
  const auto scope = sp::all_element_ids(h);
  const auto d = sp::parse_seed_response("[]", h, scope);
  EXPECT_EQ(d[0].description, "");
  EXPECT_EQ(d[1].description, "Search");
  EXPECT_TRUE(d[1].inferred);
}

TEST(SeedDescriptors, EmptyScopeMakesNoCall) {
  int calls = 0;
  sp::ScriptedTransport t([&](const sp::LvlmRequest&) {
    ++calls;
    return std::string("[]");
  });
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto h = seed_screen();
  cv::Mat img(100, 200, CV_8UC3, cv::Scalar(255, 255, 255));
  EXPECT_TRUE(sp::seed_descriptors(h, {}, img, ctx).empty());
  EXPECT_EQ(calls, 0);
}

TEST(SeedDescriptors, SendsImageAndListing) {
  sp::LvlmRequest seen;
  sp::ScriptedTransport t([&](const sp::LvlmRequest& r) {
    seen = r;
    return testing_support::kGoodArray;
  });
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto h = seed_screen();
  cv::Mat img(100, 200, CV_8UC3, cv::Scalar(255, 255, 255));
  const auto scope = sp::all_element_ids(h);
  const auto d = sp::seed_descriptors(h, scope, img, ctx);
  ASSERT_EQ(d.size(), 4u);
  ASSERT_EQ(seen.user_parts.size(), 2u);
  const auto& image = std::get<sp::ImagePart>(seen.user_parts[0]).image;
  EXPECT_EQ(image.cols, 200);
  const auto& text = std::get<sp::TextPart>(seen.user_parts[1]).text;
  EXPECT_NE(text.find("\"Settings page\""), std::string::npos);
  EXPECT_EQ(text.find("{ELEMENT_LIST}"), std::string::npos);
}

TEST(SeedDescriptors, UnparseablePropagates) {
  sp::ScriptedTransport t([](const sp::LvlmRequest&) { return std::string("no idea"); });
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto h = seed_screen();
  cv::Mat img(100, 200, CV_8UC3);
  const auto scope = sp::all_element_ids(h);
  try {
    sp::seed_descriptors(h, scope, img, ctx);
    FAIL();
  } catch (const sp::Error& e) {
    EXPECT_EQ(e.kind(), sp::ErrorKind::kUnparseableResponse);
  }
}

TEST(SeedPrompt, FocusCropsImage) {
  const auto prompts = sp::PromptSet::defaults();
  const auto h = seed_screen();
  cv::Mat img(100, 200, CV_8UC3, cv::Scalar(255, 255, 255));
  const auto scope = sp::all_element_ids(h);
  const auto b = sp::build_seed_prompt(h, scope, img, prompts.seed, prompts.icl_examples, {},
                                       sp::BBox{0, 0, 100, 50});
  EXPECT_EQ(b.annotated_image.cols, 100);
  EXPECT_EQ(b.annotated_image.rows, 50);
  EXPECT_EQ(b.scope_ids, scope);
}

TEST(SeedRelabel, PicturesLoseText) {
  auto h = seed_screen();
  const auto scope = sp::all_element_ids(h);
  const auto d = sp::parse_seed_response(testing_support::kGoodArray, h, scope);
  sp::relabel_pictures(h, d);
  EXPECT_EQ(h.find_element(2)->kind, sp::ElementKind::kPicture);
  EXPECT_EQ(h.find_element(0)->kind, sp::ElementKind::kIcon);
  const auto j = sp::descriptors_to_json(d);
  EXPECT_EQ(j[2]["label"], "picture");
  EXPECT_EQ(j[0]["associated"], nlohmann::json::array({1}));
  EXPECT_EQ(j[0]["inferred"], false);
}

}  // namespace
