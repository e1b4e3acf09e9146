// Copyright 2026 The flowrej Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowrej/error.h"

namespace flowrej {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kDuplicateJobId: return "DuplicateJobId";
    case ErrorCode::kMissingProcessingTime: return "MissingProcessingTime";
    case ErrorCode::kNonPositiveValue: return "NonPositiveValue";
    case ErrorCode::kBadEpsilon: return "BadEpsilon";
    case ErrorCode::kBadWorkloadSpec: return "BadWorkloadSpec";
    case ErrorCode::kBadPrefix: return "BadPrefix";
    case ErrorCode::kRhoUndefined: return "RhoUndefined";
    case ErrorCode::kUnknownJob: return "UnknownJob";
    case ErrorCode::kOutOfSupport: return "OutOfSupport";
    case ErrorCode::kGridRequired: return "GridRequired";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace flowrej
