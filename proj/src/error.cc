// Copyright 2026 The Declearn Authors
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

#include "declearn/error.h"

#include <fmt/format.h>

namespace declearn {
namespace {

std::string FormatMessage(ErrorCode code, const std::string& message,
                          SourceLoc loc) {
  if (loc.line > 0) {
    return fmt::format("{} at {}:{}: {}", ErrorCodeName(code), loc.line,
                       loc.column, message);
  }
  return fmt::format("{}: {}", ErrorCodeName(code), message);
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kUnknownConcept: return "UnknownConcept";
    case ErrorCode::kDuplicateArgName: return "DuplicateArgName";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnboundVariable: return "UnboundVariable";
    case ErrorCode::kBadPath: return "BadPath";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kDanglingLink: return "DanglingLink";
    case ErrorCode::kMissingArg: return "MissingArg";
    case ErrorCode::kMissingScore: return "MissingScore";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kMissingAssignment: return "MissingAssignment";
    case ErrorCode::kMissingLabels: return "MissingLabels";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kGraphMismatch: return "GraphMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, SourceLoc loc)
    : std::runtime_error(FormatMessage(code, message, loc)),
      code_(code),
      loc_(loc),
      message_(message) {}

}  // namespace declearn
