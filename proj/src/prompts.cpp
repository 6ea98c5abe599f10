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

#include "screenparse/prompts.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "screenparse/errors.hpp"
#include "screenparse/prompts_embedded.hpp"

namespace screenparse {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kTemplate, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Length of a placeholder name starting at text[pos] (just after '{'), or 0.
std::size_t placeholder_length(std::string_view text, std::size_t pos) {
  std::size_t end = pos;
  if (end >= text.size() || !std::isupper(static_cast<unsigned char>(text[end]))) return 0;
  while (end < text.size() && (std::isupper(static_cast<unsigned char>(text[end])) ||
                               std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '_')) {
    ++end;
  }
  return end < text.size() && text[end] == '}' ? end - pos : 0;
}

}  // namespace

PromptTemplate PromptTemplate::from_file(const std::filesystem::path& path) {
  return PromptTemplate(read_file(path));
}

std::string PromptTemplate::render(const std::map<std::string, std::string, std::less<>>& values) const {
  std::string out;
  out.reserve(text_.size());
  std::size_t i = 0;
  while (i < text_.size()) {
    if (text_[i] == '{') {
      if (const std::size_t len = placeholder_length(text_, i + 1); len > 0) {
        const std::string_view name(text_.data() + i + 1, len);
        const auto it = values.find(name);
        if (it == values.end()) {
          throw Error(ErrorKind::kTemplate, "unresolved placeholder {" + std::string(name) + "}");
        }
        out += it->second;
        i += len + 2;
        continue;
      }
    }
    out.push_back(text_[i++]);
  }
  return out;
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] != '{') continue;
    if (const std::size_t len = placeholder_length(text_, i + 1); len > 0) {
      names.emplace_back(text_.substr(i + 1, len));
      i += len + 1;
    }
  }
  return names;
}

std::vector<IclExample> icl_examples_from_json(const nlohmann::json& j) {
  std::vector<IclExample> out;
  try {
    for (const auto& item : j) {
      out.push_back({item.value("title", ""), item.at("elements").get<std::string>(),
                     item.at("response").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kTemplate, std::string("icl examples: ") + e.what());
  }
  return out;
}

std::string render_icl_block(std::span<const IclExample> examples) {
  if (examples.empty()) return "";
  std::string out = "Examples:\n\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const IclExample& ex = examples[i];
    out += "Example " + std::to_string(i + 1);
    if (!ex.title.empty()) out += " (" + ex.title + ")";
    out += ":\nElements:\n" + ex.elements + "\nAnswer:\n" + ex.response + "\n\n";
  }
  return out;
}

PromptSet PromptSet::defaults() {
  PromptSet set;
  set.seed = PromptTemplate(std::string(embedded::kSeedPrompt));
  set.groi_proposal = PromptTemplate(std::string(embedded::kGroiProposalPrompt));
  set.som_grounding = PromptTemplate(std::string(embedded::kSomGroundingPrompt));
  set.referring = PromptTemplate(std::string(embedded::kReferringPrompt));
  set.icl_examples = icl_examples_from_json(nlohmann::json::parse(embedded::kIclExamples));
  return set;
}

PromptSet PromptSet::from_dir(const std::filesystem::path& dir) {
  PromptSet set = defaults();
  auto maybe = [&](const char* name, PromptTemplate& field) {
    if (std::filesystem::exists(dir / name)) field = PromptTemplate::from_file(dir / name);
  };
  maybe("seed.txt", set.seed);
  maybe("groi_proposal.txt", set.groi_proposal);
  maybe("som_grounding.txt", set.som_grounding);
  maybe("referring.txt", set.referring);
  if (std::filesystem::exists(dir / "icl_examples.json")) {
    try {
      set.icl_examples = icl_examples_from_json(nlohmann::json::parse(read_file(dir / "icl_examples.json")));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::kTemplate, std::string("icl_examples.json: ") + e.what());
    }
  }
  return set;
}

}  // namespace screenparse
