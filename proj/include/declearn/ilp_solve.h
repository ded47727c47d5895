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

// Exact 0-1 solver for IlpModel plus an exhaustive oracle.
//
// Optimal set: feasible assignments whose objective is within kTieTolerance
// of the maximum. Both Solve() and BruteForce() return the lexicographically
// smallest member (x[0] most significant, 0 < 1).

#ifndef DECLEARN_ILP_SOLVE_H_
#define DECLEARN_ILP_SOLVE_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "declearn/ground.h"
#include "declearn/ilp_model.h"

namespace declearn {

inline constexpr double kTieTolerance = 1e-9;
inline constexpr int kBruteForceMaxVars = 24;

struct SolverConfig {
  std::int64_t node_limit = 50'000'000;
  double time_limit_seconds = 60.0;
};

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  // Limit hit with a feasible incumbent (optimality or tie-break unproven).
  kLimitFeasible,
  // Limit hit before any feasible assignment: independent argmax returned.
  kLimitUnverified,
};

std::string_view SolveStatusName(SolveStatus status);

struct Assignment {
  std::vector<std::uint8_t> values;
  double objective = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  Assignment assignment;
  // For kInfeasible: name of the row whose conflict ended the search first.
  std::string infeasible_hint;
  std::int64_t nodes = 0;

  bool has_assignment() const { return status != SolveStatus::kInfeasible; }
};

// Depth-first branch and bound with unit propagation. Never throws for
// well-formed models; limits produce kLimitFeasible/kLimitUnverified.
SolveResult Solve(const IlpModel& model, const SolverConfig& config = {});

// Exhaustive enumeration. Throws TooLarge above kBruteForceMaxVars.
SolveResult BruteForce(const IlpModel& model);

struct ViolationRecord {
  std::string constraint_id;
  std::vector<std::pair<std::string, std::string>> binding;

  friend bool operator==(const ViolationRecord&,
                         const ViolationRecord&) = default;
};

// Grounded constraints falsified by `decision_values` (one entry per
// decision variable).
std::vector<ViolationRecord> Violations(
    const std::vector<GroundedConstraint>& grounded,
    std::span<const std::uint8_t> decision_values);

std::vector<ViolationRecord> Violations(const ConstraintSet& constraints,
                                        const ConceptGraph& graph,
                                        const DataNodeGraph& dng,
                                        std::span<const std::uint8_t> values);

}  // namespace declearn

#endif  // DECLEARN_ILP_SOLVE_H_
