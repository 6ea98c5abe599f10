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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "screenparse/errors.hpp"
#include "screenparse/grounding.hpp"
#include "support/support.hpp"

namespace sp = screenparse;
using testing_support::fixture_dir;

namespace {

std::string first_text(const sp::LvlmRequest& r) {
  for (const auto& part : r.user_parts) {
    if (const auto* t = std::get_if<sp::TextPart>(&part)) return t->text;
  }
  return {};
}

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

struct AccountScreen {
  sp::GroundingTask task;
  AccountScreen() {
    task.hierarchy = sp::load_hierarchy(fixture_dir() / "screens/account.hierarchy.json");
    task.image = sp::load_image(fixture_dir() / "screens/account.png");
    task.instruction = "click the sign-in button";
  }
};

// Proposal, element descriptions and final pick answered from fixed strings.
struct Script {
  std::vector<std::string> proposals;
  std::string pick = "[]";
  std::vector<sp::LvlmRequest> proposal_requests;
  int seed_calls = 0;
  int pick_calls = 0;

  std::string operator()(const sp::LvlmRequest& r) {
    const std::string text = first_text(r);
    if (starts_with(text, "You are helping")) {
      proposal_requests.push_back(r);
      const std::size_t i = std::min(proposal_requests.size(), proposals.size()) - 1;
      return proposals[i];
    }
    if (starts_with(text, "You are given a screenshot")) {
      ++seed_calls;
      return "[]";
    }
    ++pick_calls;
    return pick;
  }
};

TEST(GroiProposalParse, Variants) {
  auto p = sp::parse_groi_proposal(R"(```json
{"groi_id": 1, "descriptions": {"0": "settings list", "1": "media", "x": "junk", "2": 3}}
```)");
  EXPECT_EQ(p.groi_id, 1);
  EXPECT_EQ(p.descriptions.size(), 2u);
  EXPECT_EQ(p.descriptions.at(0), "settings list");
  EXPECT_EQ(sp::parse_groi_proposal(R"({"groi_id": "2"})").groi_id, 2);
  EXPECT_EQ(sp::parse_groi_proposal(R"({"region_id": 3})").groi_id, 3);
  EXPECT_EQ(sp::parse_groi_proposal("I would pick Region 4 here.").groi_id, 4);
  EXPECT_EQ(sp::parse_groi_proposal("GROI #5").groi_id, 5);
  EXPECT_EQ(sp::parse_groi_proposal("id: 6").groi_id, 6);
  EXPECT_FALSE(sp::parse_groi_proposal("the top panel").groi_id);
  EXPECT_FALSE(sp::parse_groi_proposal(R"({"groi_id": "abc"})").groi_id);
}

TEST(RankedIds, Variants) {
  EXPECT_EQ(sp::parse_ranked_ids(R"({"ranked_ids": [3, "5", 3, -1, "x"]})"), (std::vector<int>{3, 5, 3}));
  EXPECT_EQ(sp::parse_ranked_ids("Answer: [7, 2]"), (std::vector<int>{7, 2}));
  EXPECT_EQ(sp::parse_ranked_ids(R"({"element_id": 11})"), (std::vector<int>{11}));
  EXPECT_EQ(sp::parse_ranked_ids("First ID 4, otherwise id: 9."), (std::vector<int>{4, 9}));
  EXPECT_EQ(sp::parse_ranked_ids(" 12\n"), (std::vector<int>{12}));
  EXPECT_TRUE(sp::parse_ranked_ids("nothing matches").empty());
  EXPECT_TRUE(sp::parse_ranked_ids("").empty());
}

TEST(ProposeGroi, NoRegionsNoCall) {
  AccountScreen s;
  s.task.hierarchy.grois.clear();
  int calls = 0;
  sp::ScriptedTransport t([&](const sp::LvlmRequest&) {
    ++calls;
    return std::string("{}");
  });
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto p = sp::propose_groi(s.task, ctx);
  EXPECT_EQ(p.groi_id, sp::kFullImage);
  EXPECT_FALSE(p.fallback);
  EXPECT_EQ(calls, 0);
}

TEST(ProposeGroi, RequestShape) {
  AccountScreen s;
  Script script;
  script.proposals = {R"({"groi_id": 1})"};
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto p = sp::propose_groi(s.task, ctx);
  EXPECT_EQ(p.groi_id, 1);
  EXPECT_EQ(p.attempts, 1);
  ASSERT_EQ(script.proposal_requests.size(), 1u);
  const auto& parts = script.proposal_requests[0].user_parts;
  ASSERT_EQ(parts.size(), 4u);  // prompt, annotated screen, one crop per region
  EXPECT_NE(first_text(script.proposal_requests[0]).find("click the sign-in button"), std::string::npos);
  const auto& crop1 = std::get<sp::ImagePart>(parts[3]).image;
  EXPECT_EQ(crop1.cols, 600);
  EXPECT_EQ(crop1.rows, 195);
}

TEST(ProposeGroi, RetryThenAccept) {
  AccountScreen s;
  Script script;
  script.proposals = {R"({"groi_id": 7})", R"({"groi_id": 0, "descriptions": {"0": "account"}})"};
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto p = sp::propose_groi(s.task, ctx);
  EXPECT_EQ(p.groi_id, 0);
  EXPECT_EQ(p.attempts, 2);
  EXPECT_FALSE(p.fallback);
  EXPECT_EQ(p.groi_descriptions.at(0), "account");
  const auto& retry = script.proposal_requests[1].user_parts;
  const auto& correction = std::get<sp::TextPart>(retry.back()).text;
  EXPECT_NE(correction.find("region 7"), std::string::npos);
  EXPECT_NE(correction.find("0, 1"), std::string::npos);
}

TEST(ProposeGroi, FallsBackAfterTwoMisses) {
  AccountScreen s;
  Script script;
  script.proposals = {"no idea", R"({"groi_id": 9})"};
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto p = sp::propose_groi(s.task, ctx);
  EXPECT_EQ(p.groi_id, sp::kFullImage);
  EXPECT_TRUE(p.fallback);
  EXPECT_EQ(p.attempts, 2);
  EXPECT_TRUE(sp::groi_proposal_hit(p, s.task.hierarchy, {0, 0, 1, 1}));
}

TEST(Ground, CapsAndFlags) {
  AccountScreen s;
  Script script;
  script.proposals = {R"({"groi_id": 0})"};
  script.pick = R"({"ranked_ids": [99, 4, 4, 0, 5, 6, 7]})";
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};

  const auto r3 = sp::ground(s.task, ctx, 3);
  ASSERT_EQ(r3.ranked_candidates.size(), 3u);
  EXPECT_EQ(r3.ranked_candidates[0].element_id, 4);
  EXPECT_EQ(r3.ranked_candidates[1].element_id, 0);
  EXPECT_TRUE(r3.ranked_candidates[1].out_of_scope);
  EXPECT_FALSE(r3.ranked_candidates[0].out_of_scope);
  EXPECT_EQ(r3.ranked_candidates[2].element_id, 5);
  EXPECT_EQ(r3.descriptors.size(), 26u);
  ASSERT_EQ(r3.warnings.size(), 1u);

  const auto r1 = sp::ground(s.task, ctx, 1);
  ASSERT_EQ(r1.ranked_candidates.size(), 1u);
  EXPECT_EQ(r1.chosen().element_id, 4);

  const auto j = sp::grounding_result_to_json(r3, s.task.instruction, sp::BBox{230, 76, 270, 116}, 3);
  EXPECT_EQ(j["groi_id"], 0);
  EXPECT_EQ(j["candidates"].size(), 3u);
  EXPECT_EQ(j["candidates"][1]["out_of_scope"], true);
  EXPECT_FALSE(j["candidates"][0].contains("out_of_scope"));
  EXPECT_EQ(j["pass"]["1"], true);
  EXPECT_TRUE(j.contains("warnings"));
}

TEST(Ground, KCappedByScope) {
  AccountScreen s;
  sp::ScreenHierarchy& h = s.task.hierarchy;
  h.grois[0].member_ids = {3, 4};
  Script script;
  script.proposals = {R"({"groi_id": 0})"};
  script.pick = "[3, 4, 5, 6]";
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  EXPECT_EQ(sp::ground(s.task, ctx, 10).ranked_candidates.size(), 2u);
}

TEST(Ground, EmptyRegionUsesWholeScreen) {
  AccountScreen s;
  s.task.hierarchy.grois[1].member_ids.clear();
  Script script;
  script.proposals = {R"({"groi_id": 1})"};
  script.pick = "[0]";
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  const auto r = sp::ground(s.task, ctx, 1);
  EXPECT_EQ(r.descriptors.size(), 53u);
  EXPECT_FALSE(r.chosen().out_of_scope);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Ground, Errors) {
  AccountScreen s;
  Script script;
  script.proposals = {R"({"groi_id": 0})"};
  script.pick = "I cannot find it.";
  sp::ScriptedTransport t(std::ref(script));
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{t, prompts};
  auto kind_of = [&](auto fn) -> std::optional<sp::ErrorKind> {
    try {
      fn();
    } catch (const sp::Error& e) {
      return e.kind();
    }
    return std::nullopt;
  };
  EXPECT_EQ(kind_of([&] { sp::ground(s.task, ctx, 1); }), sp::ErrorKind::kNoCandidate);
  EXPECT_EQ(kind_of([&] { sp::ground(s.task, ctx, 0); }), sp::ErrorKind::kConfig);
  s.task.instruction = "   ";
  EXPECT_EQ(kind_of([&] { sp::ground(s.task, ctx, 1); }), sp::ErrorKind::kMalformedInput);
}

TEST(Ground, HitUsesMidpoint) {
  sp::GroundingResult r;
  r.ranked_candidates = {{1, {0, 0, 10, 10}, false}, {2, {100, 100, 110, 110}, false}};
  EXPECT_FALSE(sp::grounding_hit(r, {100, 100, 200, 200}, 1));
  EXPECT_TRUE(sp::grounding_hit(r, {100, 100, 200, 200}, 2));
  EXPECT_TRUE(sp::grounding_hit(r, {5, 5, 6, 6}, 1));
  EXPECT_FALSE(sp::grounding_hit(r, {6, 6, 7, 7}, 5));
  EXPECT_FALSE(sp::grounding_hit(r, {0, 0, 10, 10}, 0));
}

TEST(Ground, ShippedReplaySignIn) {
  AccountScreen s;
  auto replay = sp::ReplayTransport::from_file(fixture_dir() / "replay.jsonl");
  const auto prompts = sp::PromptSet::defaults();
  sp::AgentContext ctx{replay, prompts};
  const auto r = sp::ground(s.task, ctx, 1);
  ASSERT_EQ(r.ranked_candidates.size(), 1u);
  EXPECT_EQ(r.proposal.groi_id, 0);
  EXPECT_TRUE(sp::grounding_hit(r, {80, 86, 210, 106}, 1));
}

}  // namespace
