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

// Command-line front end. RunCli is the whole tool minus process setup, so
// tests can drive it in-process.

#ifndef DECLEARN_CLI_H_
#define DECLEARN_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "declearn/ground.h"

namespace declearn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInfeasible = 2;

// args[0] is the program name. JSON results go to `out`, diagnostics and
// progress to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// {"node": {"concept": p}} -> dense scores. Throws MissingScore for any
// decision variable without a finite entry in [0, 1].
ScoreVector ScoresFromJson(const nlohmann::json& doc,
                           const DecisionIndex& index);

}  // namespace declearn

#endif  // DECLEARN_CLI_H_
