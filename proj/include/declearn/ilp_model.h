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

// 0-1 integer linear programs built from grounded constraints.

#ifndef DECLEARN_ILP_MODEL_H_
#define DECLEARN_ILP_MODEL_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "declearn/ground.h"

namespace declearn {

enum class Relation { kLe, kGe, kEq };

std::string_view RelationSymbol(Relation rel);

struct Term {
  int var = 0;
  double coeff = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::string name;    // c1, c2, ...
  std::string source;  // constraint id this row was lowered from
  std::vector<Term> terms;
  Relation rel = Relation::kLe;
  double rhs = 0;
};

// All variables are binary. Decision variables occupy indices
// [0, num_decision) in DecisionIndex order; auxiliaries follow.
struct IlpModel {
  std::vector<std::string> var_names;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  int num_decision = 0;

  int num_vars() const { return static_cast<int>(var_names.size()); }
  int add_var(std::string name, double objective_coeff);
  // Duplicate variables are merged and zero coefficients dropped, keeping
  // first-occurrence order.
  void add_constraint(std::vector<Term> terms, Relation rel, double rhs,
                      std::string source);
};

// Lowers `expr` into `model`, returning the variable whose value equals the
// truth of `expr` in every feasible assignment. Auxiliaries are named
// aux_<constraint_id>_<k> with k taken from `aux_counter`.
int Lower(const GExpr& expr, IlpModel& model, std::string_view constraint_id,
          int& aux_counter);

// Adds a top-level grounded constraint: ifL becomes a single `a <= b` row,
// atMostL a single `sum <= k` row, anything else forces its root to 1.
void AddTopLevel(const GExpr& expr, IlpModel& model,
                 std::string_view constraint_id, int& aux_counter);

// Decision variable names: var_<node>_<concept>.
std::string DecisionVarName(const DecisionVar& v);

// log p - log(1 - p) on the clamped probability.
double LogOdds(double p);

// Objective = sum of log-odds of decision variables; auxiliaries get 0.
// Throws MissingScore when scores do not cover the index.
IlpModel Compile(const std::vector<GroundedConstraint>& grounded,
                 const DecisionIndex& index, const ScoreVector& scores);

// Same, over bare decision variables; names default to v<i>. Used where no
// instance graph exists (tests, random models).
IlpModel CompileExprs(const std::vector<GExpr>& top_level,
                      const std::vector<double>& decision_objective);

// CPLEX LP text with deterministic variable and row order.
std::string EmitLp(const IlpModel& model);

nlohmann::json ModelToJson(const IlpModel& model);

// Row activity check for a full assignment. Names the first violated row in
// `violated` when given.
bool IsFeasible(const IlpModel& model, std::span<const std::uint8_t> values,
                std::string* violated = nullptr);

// Sum of objective coefficients of the variables set to 1, in index order.
double ObjectiveValue(const IlpModel& model,
                      std::span<const std::uint8_t> values);

}  // namespace declearn

#endif  // DECLEARN_ILP_MODEL_H_
