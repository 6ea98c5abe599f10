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

#include "screenparse/annotate.hpp"
#include "screenparse/lvlm.hpp"
#include "screenparse/prompts.hpp"

namespace screenparse {

/// Sentinel GROI id meaning "the whole screenshot".
inline constexpr int kFullImage = -1;

/// Everything a model-backed workflow needs besides its inputs.
struct AgentContext {
  Transport& transport;
  const PromptSet& prompts;
  RenderStyle style{};
  LvlmSettings settings{};

  LvlmRequest new_request() const {
    LvlmRequest req;
    req.model_id = settings.model_id;
    req.temperature = settings.temperature;
    req.max_tokens = settings.max_tokens;
    return req;
  }
};

}  // namespace screenparse
