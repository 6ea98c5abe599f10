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

#include "screenparse/grounding.hpp"

#include <algorithm>
#include <regex>

#include "screenparse/errors.hpp"
#include "screenparse/response_text.hpp"

namespace screenparse {

using nlohmann::json;

ParsedProposal parse_groi_proposal(std::string_view raw) {
  ParsedProposal out;
  if (auto obj = find_json(raw, '{'); obj && obj->is_object()) {
    for (const char* key : {"groi_id", "region_id", "id"}) {
      if (obj->contains(key)) {
        out.groi_id = json_to_id(obj->at(key));
        break;
      }
    }
    if (obj->contains("descriptions")) {
      const json& descs = obj->at("descriptions");
      if (descs.is_object()) {
        for (const auto& [key, value] : descs.items()) {
          const auto id = json_to_id(json(key));
          if (id && value.is_string()) out.descriptions[*id] = value.get<std::string>();
        }
      }
    }
    if (out.groi_id) return out;
  }
  static const std::regex kMention(R"((?:region|groi|id)\s*(?:id)?\s*[:#=]?\s*(\d{1,9}))",
                                   std::regex::icase);
  const std::string text(raw);
  std::smatch m;
  if (std::regex_search(text, m, kMention)) out.groi_id = std::stoi(m[1].str());
  return out;
}

std::vector<int> parse_ranked_ids(std::string_view raw) {
  std::vector<int> ids;
  auto from_array = [&](const json& arr) {
    for (const json& v : arr) {
      if (auto id = json_to_id(v)) ids.push_back(*id);
    }
  };
  if (auto obj = find_json(raw, '{'); obj && obj->is_object()) {
    for (const char* key : {"ranked_ids", "ids", "id", "element_id"}) {
      if (!obj->contains(key)) continue;
      const json& v = obj->at(key);
      if (v.is_array()) {
        from_array(v);
      } else if (auto id = json_to_id(v)) {
        ids.push_back(*id);
      }
      if (!ids.empty()) return ids;
    }
  }
  if (auto arr = find_json(raw, '['); arr && arr->is_array()) {
    from_array(*arr);
    if (!ids.empty()) return ids;
  }
  static const std::regex kMention(R"(\bid\s*[:#=]?\s*(\d{1,9}))", std::regex::icase);
  const std::string text(raw);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kMention); it != std::sregex_iterator(); ++it) {
    ids.push_back(std::stoi((*it)[1].str()));
  }
  if (ids.empty()) {
    const std::string bare = trim(raw);
    if (auto id = json_to_id(json(bare))) ids.push_back(*id);
  }
  return ids;
}

namespace {

std::string groi_listing(const ScreenHierarchy& h) {
  std::string out;
  for (const Groi& g : h.grois) out += std::to_string(g.id) + ", " + format_box(g.box) + "\n";
  if (!out.empty()) out.pop_back();
  return out;
}

std::string valid_id_list(const ScreenHierarchy& h) {
  std::string out;
  for (const Groi& g : h.grois) out += (out.empty() ? "" : ", ") + std::to_string(g.id);
  return out;
}

}  // namespace

GroiProposal propose_groi(const GroundingTask& task, AgentContext& ctx) {
  const ScreenHierarchy& h = task.hierarchy;
  GroiProposal proposal;
  if (h.grois.empty()) return proposal;

  cv::Mat annotated = task.image.clone();
  for (const Groi& g : h.grois) {
    annotated = draw_region(annotated, g.box, "Region " + std::to_string(g.id), ctx.style);
  }
  LvlmRequest req = ctx.new_request();
  req.add_text(ctx.prompts.groi_proposal.render(
      {{"INSTRUCTION", task.instruction}, {"GROI_LIST", groi_listing(h)}}));
  req.add_image(annotated);
  for (const Groi& g : h.grois) req.add_image(crop(task.image, g.box).image);

  for (int attempt = 0; attempt < 2; ++attempt) {
    proposal.raw_response = ctx.transport.send(req);
    ++proposal.attempts;
    ParsedProposal parsed = parse_groi_proposal(proposal.raw_response);
    if (!parsed.descriptions.empty()) proposal.groi_descriptions = std::move(parsed.descriptions);
    if (parsed.groi_id && h.find_groi(*parsed.groi_id) != nullptr) {
      proposal.groi_id = *parsed.groi_id;
      return proposal;
    }
    const std::string named = parsed.groi_id ? "region " + std::to_string(*parsed.groi_id) : "no region";
    req.add_text("Your previous answer named " + named + ", which is not one of the regions. " +
                 "Valid region IDs: " + valid_id_list(h) + ". Reply again with JSON only.");
  }
  proposal.groi_id = kFullImage;
  proposal.fallback = true;
  return proposal;
}

bool groi_proposal_hit(const GroiProposal& p, const ScreenHierarchy& h, const BBox& gt_box) {
  if (p.groi_id == kFullImage) return true;
  const Groi* g = h.find_groi(p.groi_id);
  return g != nullptr && midpoint_in(gt_box, g->box);
}

GroundingResult ground_with_proposal(const GroundingTask& task, GroiProposal proposal,
                                     AgentContext& ctx, int k) {
  if (k < 1) throw Error(ErrorKind::kConfig, "k must be >= 1");
  if (trim(task.instruction).empty()) throw Error(ErrorKind::kMalformedInput, "instruction is empty");
  const ScreenHierarchy& h = task.hierarchy;
  GroundingResult result;
  result.proposal = std::move(proposal);

  const Groi* groi = h.find_groi(result.proposal.groi_id);
  std::vector<int> scope;
  std::optional<BBox> focus;
  if (groi != nullptr && !groi->member_ids.empty()) {
    scope = groi->member_ids;
    focus = groi->box;
  } else {
    if (groi != nullptr) result.warnings.push_back("proposed region has no elements; using the full screen");
    scope = all_element_ids(h);
  }
  if (scope.empty()) throw Error(ErrorKind::kNoCandidate, "screen has no local elements");

  result.descriptors = seed_descriptors(h, scope, task.image, ctx, focus);
  ScreenHierarchy described = h;
  relabel_pictures(described, result.descriptors);

  std::string listing;
  for (const SeedDescriptor& d : result.descriptors) {
    const LocalElement* e = described.find_element(d.element_id);
    listing += std::to_string(d.element_id) + ", " + std::string(element_kind_name(e->kind)) + ", " +
               std::string(seed_label_name(d.label)) + ": " + d.description + "\n";
  }
  if (!listing.empty()) listing.pop_back();

  std::vector<LocalElement> marked;
  for (int id : scope) marked.push_back(*described.find_element(id));
  cv::Mat view = draw_som(task.image, marked, ctx.style);
  if (focus) view = crop(view, *focus).image;

  LvlmRequest req = ctx.new_request();
  req.add_image(view).add_text(ctx.prompts.som_grounding.render(
      {{"INSTRUCTION", task.instruction}, {"ELEMENT_LIST", listing}}));
  const std::string raw = ctx.transport.send(req);

  const std::size_t cap = std::min(static_cast<std::size_t>(k), scope.size());
  for (int id : parse_ranked_ids(raw)) {
    if (result.ranked_candidates.size() >= cap) break;
    const LocalElement* e = h.find_element(id);
    if (e == nullptr) continue;
    const bool seen = std::any_of(result.ranked_candidates.begin(), result.ranked_candidates.end(),
                                  [&](const GroundingCandidate& c) { return c.element_id == id; });
    if (seen) continue;
    const bool outside = std::find(scope.begin(), scope.end(), id) == scope.end();
    if (outside) result.warnings.push_back("element " + std::to_string(id) + " is outside the proposed region");
    result.ranked_candidates.push_back({id, e->box, outside});
  }
  if (result.ranked_candidates.empty()) {
    throw Error(ErrorKind::kNoCandidate, "grounding reply names no valid element");
  }
  return result;
}

GroundingResult ground(const GroundingTask& task, AgentContext& ctx, int k) {
  if (k < 1) throw Error(ErrorKind::kConfig, "k must be >= 1");
  return ground_with_proposal(task, propose_groi(task, ctx), ctx, k);
}

bool grounding_hit(const GroundingResult& result, const BBox& gt_box, int j) {
  const std::size_t n = std::min(result.ranked_candidates.size(), static_cast<std::size_t>(std::max(j, 0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (midpoint_in(result.ranked_candidates[i].box, gt_box)) return true;
  }
  return false;
}

json grounding_result_to_json(const GroundingResult& result, const std::string& instruction,
                              const std::optional<BBox>& gt_box, int k) {
  json candidates = json::array();
  for (const GroundingCandidate& c : result.ranked_candidates) {
    json item = {{"id", c.element_id}, {"box", box_to_json(c.box)}};
    if (c.out_of_scope) item["out_of_scope"] = true;
    candidates.push_back(std::move(item));
  }
  json pass = json::object();
  if (gt_box) {
    for (int j = 1; j <= k; ++j) pass[std::to_string(j)] = grounding_hit(result, *gt_box, j);
  }
  json out = {{"instruction", instruction},
              {"groi_id", result.proposal.groi_id == kFullImage ? json("full") : json(result.proposal.groi_id)},
              {"candidates", std::move(candidates)},
              {"pass", std::move(pass)}};
  if (!result.warnings.empty()) out["warnings"] = result.warnings;
  return out;
}

}  // namespace screenparse
