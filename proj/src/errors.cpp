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

#include "screenparse/errors.hpp"

namespace screenparse {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedInput: return "MalformedInput";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kTemplate: return "TemplateError";
    case ErrorKind::kTransport: return "TransportError";
    case ErrorKind::kReplayMiss: return "ReplayMiss";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kUnparseableResponse: return "UnparseableResponse";
    case ErrorKind::kInvalidProposal: return "InvalidProposal";
    case ErrorKind::kNoCandidate: return "NoCandidate";
    case ErrorKind::kPointOutOfBounds: return "PointOutOfBounds";
    case ErrorKind::kDegenerateCrop: return "DegenerateCrop";
    case ErrorKind::kDataset: return "DatasetError";
  }
  return "Error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedInput:
    case ErrorKind::kConfig:
    case ErrorKind::kDataset:
      return 2;
    default:
      return 1;
  }
}

int http_status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedInput:
    case ErrorKind::kConfig:
      return 400;
    case ErrorKind::kTransport:
    case ErrorKind::kReplayMiss:
    case ErrorKind::kBudgetExceeded:
      return 502;
    default:
      return 422;
  }
}

}  // namespace screenparse
