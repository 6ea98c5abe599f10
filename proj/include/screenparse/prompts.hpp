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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace screenparse {

/// Text with {UPPER_CASE} placeholders. Substituted values are not rescanned,
/// and braces that do not form such a placeholder are left alone.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}
  static PromptTemplate from_file(const std::filesystem::path& path);

  /// Throws Error(kTemplate) naming the first placeholder without a value.
  std::string render(const std::map<std::string, std::string, std::less<>>& values) const;
  std::vector<std::string> placeholders() const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// One in-context example for the element description prompt.
struct IclExample {
  std::string title;
  std::string elements;
  std::string response;
};

std::vector<IclExample> icl_examples_from_json(const nlohmann::json& j);
std::string render_icl_block(std::span<const IclExample> examples);

struct PromptSet {
  PromptTemplate seed;
  PromptTemplate groi_proposal;
  PromptTemplate som_grounding;
  PromptTemplate referring;
  std::vector<IclExample> icl_examples;

  /// The templates shipped in data/prompts, compiled in.
  static PromptSet defaults();

  /// Defaults overridden by whichever of seed.txt, groi_proposal.txt,
  /// som_grounding.txt, referring.txt and icl_examples.json exist in dir.
  static PromptSet from_dir(const std::filesystem::path& dir);
};

}  // namespace screenparse
