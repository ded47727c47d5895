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

#ifndef DECLEARN_ERROR_H_
#define DECLEARN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace declearn {

enum class ErrorCode {
  kDuplicateName,
  kUnknownParent,
  kUnknownConcept,
  kDuplicateArgName,
  kSyntaxError,
  kUnboundVariable,
  kBadPath,
  kSchemaError,
  kDanglingLink,
  kMissingArg,
  kMissingScore,
  kTooLarge,
  kDimMismatch,
  kMissingAssignment,
  kMissingLabels,
  kConfigError,
  kGraphMismatch,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Location in DSL source text, 1-based. line == 0 means "unknown".
struct SourceLoc {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, SourceLoc loc = {});

  ErrorCode code() const { return code_; }
  SourceLoc loc() const { return loc_; }
  // The message without code name and location.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  SourceLoc loc_;
  std::string message_;
};

}  // namespace declearn

#endif  // DECLEARN_ERROR_H_
