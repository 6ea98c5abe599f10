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

#include <stdexcept>
#include <string>
#include <string_view>

namespace screenparse {

enum class ErrorKind {
  kMalformedInput,
  kConfig,
  kTemplate,
  kTransport,
  kReplayMiss,
  kBudgetExceeded,
  kUnparseableResponse,
  kInvalidProposal,
  kNoCandidate,
  kPointOutOfBounds,
  kDegenerateCrop,
  kDataset,
};

std::string_view error_kind_name(ErrorKind kind);

/// Single exception type for every domain failure; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit status for a failure: 2 for input/usage/config problems, 1 for domain errors.
int exit_code_for(ErrorKind kind);

/// HTTP status used by the service for a failure.
int http_status_for(ErrorKind kind);

}  // namespace screenparse
