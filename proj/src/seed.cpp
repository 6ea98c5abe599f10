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

#include "screenparse/seed.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "screenparse/errors.hpp"
#include "screenparse/response_text.hpp"

namespace screenparse {

using nlohmann::json;

std::string_view seed_label_name(SeedLabel label) {
  switch (label) {
    case SeedLabel::kPaired: return "paired";
    case SeedLabel::kStandalone: return "standalone";
    case SeedLabel::kPicture: return "picture";
    case SeedLabel::kActionableText: return "actionable_text";
  }
  return "standalone";
}

std::optional<SeedLabel> seed_label_from_name(std::string_view name) {
  std::string norm;
  for (char ch : trim(name)) {
    norm.push_back(ch == '-' || ch == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (norm == "paired") return SeedLabel::kPaired;
  if (norm == "standalone") return SeedLabel::kStandalone;
  if (norm == "picture") return SeedLabel::kPicture;
  if (norm == "actionable_text") return SeedLabel::kActionableText;
  return std::nullopt;
}

std::vector<int> all_element_ids(const ScreenHierarchy& h) {
  std::vector<int> ids;
  ids.reserve(h.elements.size());
  for (const LocalElement& e : h.elements) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string format_element_listing(const ScreenHierarchy& h, std::span<const int> scope) {
  std::string icons, texts;
  for (int id : scope) {
    const LocalElement* e = h.find_element(id);
    if (e == nullptr) continue;
    std::string line = std::to_string(e->id) + ", " + std::string(element_kind_name(e->kind)) + ", " +
                       format_box(e->box);
    if (e->kind == ElementKind::kText) {
      texts += line + ", " + json(e->text.value_or("")).dump() + "\n";
    } else {
      icons += line + "\n";
    }
  }
  if (icons.empty()) icons = "(none)\n";
  if (texts.empty()) texts = "(none)\n";
  std::string out = "Icons:\n" + icons + "Texts:\n" + texts;
  out.pop_back();
  return out;
}

SeedPromptBundle build_seed_prompt(const ScreenHierarchy& h, std::span<const int> scope,
                                   const cv::Mat& image, const PromptTemplate& tmpl,
                                   std::span<const IclExample> icl, const RenderStyle& style,
                                   const std::optional<BBox>& focus) {
  SeedPromptBundle bundle;
  bundle.scope_ids.assign(scope.begin(), scope.end());
  std::vector<LocalElement> marked;
  for (int id : scope) {
    if (const LocalElement* e = h.find_element(id)) marked.push_back(*e);
  }
  bundle.annotated_image = draw_som(image, marked, style);
  if (focus) bundle.annotated_image = crop(bundle.annotated_image, *focus).image;
  bundle.icl_examples.assign(icl.begin(), icl.end());
  bundle.prompt_text = tmpl.render({{"ELEMENT_LIST", format_element_listing(h, scope)},
                                    {"ICL_EXAMPLES", render_icl_block(icl)}});
  return bundle;
}

namespace {

std::optional<json> descriptor_array(std::string_view raw) {
  if (auto arr = find_json(raw, '[')) {
    if (arr->is_array()) return arr;
  }
  if (auto obj = find_json(raw, '{')) {
    for (const char* key : {"descriptors", "elements"}) {
      if (obj->contains(key) && obj->at(key).is_array()) return obj->at(key);
    }
  }
  return std::nullopt;
}

std::optional<SeedDescriptor> read_entry(const json& item, const ScreenHierarchy& h) {
  if (!item.is_object() || !item.contains("id")) return std::nullopt;
  const auto id = json_to_id(item.at("id"));
  if (!id) return std::nullopt;
  const LocalElement* element = h.find_element(*id);
  if (element == nullptr || !item.contains("label") || !item.at("label").is_string()) return std::nullopt;
  const auto label = seed_label_from_name(item.at("label").get<std::string>());
  if (!label) return std::nullopt;

  SeedDescriptor d;
  d.element_id = *id;
  d.box = element->box;
  d.label = *label;
  if (item.contains("associated") && item.at("associated").is_array()) {
    for (const json& a : item.at("associated")) {
      const auto other = json_to_id(a);
      if (!other || *other == *id || h.find_element(*other) == nullptr) continue;
      if (std::find(d.associated_ids.begin(), d.associated_ids.end(), *other) == d.associated_ids.end()) {
        d.associated_ids.push_back(*other);
      }
    }
  }
  const bool needs_partner = *label == SeedLabel::kPaired || *label == SeedLabel::kActionableText;
  if (needs_partner == d.associated_ids.empty()) return std::nullopt;
  if (item.contains("description") && item.at("description").is_string()) {
    d.description = item.at("description").get<std::string>();
  }
  return d;
}

SeedDescriptor fallback(const LocalElement& e) {
  SeedDescriptor d;
  d.element_id = e.id;
  d.box = e.box;
  d.label = SeedLabel::kStandalone;
  d.description = e.kind == ElementKind::kText ? e.text.value_or("") : "";
  d.inferred = true;
  return d;
}

}  // namespace

std::vector<SeedDescriptor> parse_seed_response(std::string_view raw, const ScreenHierarchy& h,
                                                std::span<const int> scope) {
  const auto entries = descriptor_array(raw);
  if (!entries) throw Error(ErrorKind::kUnparseableResponse, "no JSON array in element description reply");

  const std::set<int> in_scope(scope.begin(), scope.end());
  std::vector<std::optional<SeedDescriptor>> found;
  std::vector<int> found_ids;
  for (const json& item : *entries) {
    auto d = read_entry(item, h);
    if (!d || !in_scope.contains(d->element_id)) continue;
    if (std::find(found_ids.begin(), found_ids.end(), d->element_id) != found_ids.end()) continue;
    found_ids.push_back(d->element_id);
    found.push_back(std::move(d));
  }

  std::vector<SeedDescriptor> out;
  for (int id : scope) {
    const LocalElement* e = h.find_element(id);
    if (e == nullptr) continue;
    const auto it = std::find(found_ids.begin(), found_ids.end(), id);
    out.push_back(it != found_ids.end() ? *found[static_cast<std::size_t>(it - found_ids.begin())]
                                        : fallback(*e));
  }
  return out;
}

std::vector<SeedDescriptor> seed_descriptors(const ScreenHierarchy& h, std::span<const int> scope,
                                             const cv::Mat& image, AgentContext& ctx,
                                             const std::optional<BBox>& focus) {
  if (scope.empty()) return {};
  const SeedPromptBundle bundle =
      build_seed_prompt(h, scope, image, ctx.prompts.seed, ctx.prompts.icl_examples, ctx.style, focus);
  LvlmRequest req = ctx.new_request();
  req.add_image(bundle.annotated_image).add_text(bundle.prompt_text);
  return parse_seed_response(ctx.transport.send(req), h, scope);
}

void relabel_pictures(ScreenHierarchy& h, std::span<const SeedDescriptor> descriptors) {
  for (const SeedDescriptor& d : descriptors) {
    if (d.label != SeedLabel::kPicture) continue;
    for (LocalElement& e : h.elements) {
      if (e.id == d.element_id) {
        e.kind = ElementKind::kPicture;
        e.text.reset();
      }
    }
  }
}

json descriptors_to_json(std::span<const SeedDescriptor> descriptors) {
  json out = json::array();
  for (const SeedDescriptor& d : descriptors) {
    out.push_back({{"id", d.element_id},
                   {"label", seed_label_name(d.label)},
                   {"associated", d.associated_ids},
                   {"description", d.description},
                   {"inferred", d.inferred}});
  }
  return out;
}

}  // namespace screenparse
