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

#include "declearn/ilp_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace declearn {

std::string_view RelationSymbol(Relation rel) {
  switch (rel) {
    case Relation::kLe: return "<=";
    case Relation::kGe: return ">=";
    case Relation::kEq: return "=";
  }
  return "?";
}

int IlpModel::add_var(std::string name, double objective_coeff) {
  var_names.push_back(std::move(name));
  objective.push_back(objective_coeff);
  return num_vars() - 1;
}

void IlpModel::add_constraint(std::vector<Term> terms, Relation rel,
                              double rhs, std::string source) {
  std::vector<Term> merged;
  for (const Term& t : terms) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& m) { return m.var == t.var; });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->coeff += t.coeff;
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
  constraints.push_back(LinearConstraint{
      fmt::format("c{}", constraints.size() + 1), std::move(source),
      std::move(merged), rel, rhs});
}

namespace {

class Lowerer {
 public:
  Lowerer(IlpModel& model, std::string_view constraint_id, int& aux_counter)
      : model_(model), id_(constraint_id), counter_(aux_counter) {}

  int Lower(const GExpr& e) {
    switch (e.kind) {
      case GKind::kVar:
        return e.var;
      case GKind::kConst: {
        const int v = NewAux();
        Row({{v, 1}}, Relation::kEq, e.value ? 1 : 0);
        return v;
      }
      case GKind::kNot: {
        const int a = Lower(e.children[0]);
        const int v = NewAux();
        Row({{v, 1}, {a, 1}}, Relation::kEq, 1);
        return v;
      }
      case GKind::kAnd: {
        std::vector<int> xs = LowerAll(e.children);
        const int v = NewAux();
        for (int x : xs) Row({{v, 1}, {x, -1}}, Relation::kLe, 0);
        std::vector<Term> sum = Sum(xs);
        sum.push_back({v, -1});
        Row(std::move(sum), Relation::kLe,
            static_cast<double>(xs.size()) - 1);
        return v;
      }
      case GKind::kOr: {
        std::vector<int> xs = LowerAll(e.children);
        const int v = NewAux();
        for (int x : xs) Row({{v, 1}, {x, -1}}, Relation::kGe, 0);
        std::vector<Term> row{{v, 1}};
        for (int x : xs) row.push_back({x, -1});
        Row(std::move(row), Relation::kLe, 0);
        return v;
      }
      case GKind::kIf: {
        const int a = Lower(e.children[0]);
        const int b = Lower(e.children[1]);
        const int v = NewAux();
        Row({{v, 1}, {a, 1}}, Relation::kGe, 1);
        Row({{v, 1}, {b, -1}}, Relation::kGe, 0);
        Row({{v, 1}, {a, 1}, {b, -1}}, Relation::kLe, 1);
        return v;
      }
      case GKind::kAtMost: {
        std::vector<int> xs = LowerAll(e.children);
        const int n = static_cast<int>(xs.size());
        if (e.k >= n) return Lower(GConst(true));
        // v = 1  <=>  sum <= k.
        const int v = NewAux();
        std::vector<Term> upper = Sum(xs);
        upper.push_back({v, static_cast<double>(n - e.k)});
        Row(std::move(upper), Relation::kLe, n);
        std::vector<Term> lower = Sum(xs);
        lower.push_back({v, static_cast<double>(e.k + 1)});
        Row(std::move(lower), Relation::kGe, e.k + 1);
        return v;
      }
    }
    return -1;
  }

  void TopLevel(const GExpr& e) {
    if (e.kind == GKind::kIf) {
      const int a = Lower(e.children[0]);
      const int b = Lower(e.children[1]);
      Row({{a, 1}, {b, -1}}, Relation::kLe, 0);
      return;
    }
    if (e.kind == GKind::kAtMost) {
      Row(Sum(LowerAll(e.children)), Relation::kLe, e.k);
      return;
    }
    const int root = Lower(e);
    Row({{root, 1}}, Relation::kEq, 1);
  }

 private:
  int NewAux() {
    return model_.add_var(fmt::format("aux_{}_{}", id_, counter_++), 0.0);
  }

  std::vector<int> LowerAll(const std::vector<GExpr>& children) {
    std::vector<int> out;
    out.reserve(children.size());
    for (const GExpr& c : children) out.push_back(Lower(c));
    return out;
  }

  static std::vector<Term> Sum(const std::vector<int>& xs) {
    std::vector<Term> out;
    for (int x : xs) out.push_back({x, 1});
    return out;
  }

  void Row(std::vector<Term> terms, Relation rel, double rhs) {
    model_.add_constraint(std::move(terms), rel, rhs, std::string(id_));
  }

  IlpModel& model_;
  std::string_view id_;
  int& counter_;
};

// LP identifiers may not contain operators or whitespace.
std::string LpSafe(std::string_view name) {
  std::string out(name);
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '.' || c == '#' || c == '@' || c == '~' || c == '!';
    if (!ok) c = '_';
  }
  return out;
}

std::string Number(double x) {
  if (x == 0) return "0";
  return fmt::format("{}", x);
}

std::string LinearText(const IlpModel& model, const std::vector<Term>& terms,
                       bool keep_zero) {
  std::string out;
  bool first = true;
  for (const Term& t : terms) {
    if (t.coeff == 0 && !keep_zero) continue;
    const double mag = std::fabs(t.coeff);
    const bool negative = std::signbit(t.coeff) && t.coeff != 0;
    if (first) {
      if (negative) out += "- ";
    } else {
      out += negative ? " - " : " + ";
    }
    if (mag != 1) out += Number(mag) + " ";
    out += model.var_names[t.var];
    first = false;
  }
  return out;
}

}  // namespace

int Lower(const GExpr& expr, IlpModel& model, std::string_view constraint_id,
          int& aux_counter) {
  return Lowerer(model, constraint_id, aux_counter).Lower(expr);
}

void AddTopLevel(const GExpr& expr, IlpModel& model,
                 std::string_view constraint_id, int& aux_counter) {
  Lowerer(model, constraint_id, aux_counter).TopLevel(expr);
}

std::string DecisionVarName(const DecisionVar& v) {
  return LpSafe(fmt::format("var_{}_{}", v.node_id, v.concept_name));
}

double LogOdds(double p) {
  const double q = ClampProb(p);
  return std::log(q) - std::log1p(-q);
}

IlpModel Compile(const std::vector<GroundedConstraint>& grounded,
                 const DecisionIndex& index, const ScoreVector& scores) {
  if (scores.size() != index.size()) {
    throw Error(ErrorCode::kMissingScore,
                fmt::format("{} scores for {} decision variables",
                            scores.size(), index.size()));
  }
  IlpModel model;
  for (const DecisionVar& v : index.vars()) {
    if (!std::isfinite(scores[v.index])) {
      throw Error(ErrorCode::kMissingScore,
                  fmt::format("no usable score for {}", DecisionVarName(v)));
    }
    model.add_var(DecisionVarName(v), LogOdds(scores[v.index]));
  }
  model.num_decision = model.num_vars();
  std::map<std::string, int> counters;
  for (const GroundedConstraint& g : grounded) {
    AddTopLevel(g.expr, model, g.constraint_id, counters[g.constraint_id]);
  }
  return model;
}

IlpModel CompileExprs(const std::vector<GExpr>& top_level,
                      const std::vector<double>& decision_objective) {
  IlpModel model;
  for (std::size_t i = 0; i < decision_objective.size(); ++i) {
    model.add_var(fmt::format("v{}", i), decision_objective[i]);
  }
  model.num_decision = model.num_vars();
  for (std::size_t i = 0; i < top_level.size(); ++i) {
    int counter = 0;
    AddTopLevel(top_level[i], model, fmt::format("e{}", i), counter);
  }
  return model;
}

std::string EmitLp(const IlpModel& model) {
  std::string out = "\\ declearn 0-1 model\n";
  out += "Maximize\n obj:";
  std::vector<Term> objective;
  for (int i = 0; i < model.num_vars(); ++i) {
    // Decision variables always appear so the model lists every decision.
    if (i < model.num_decision || model.objective[i] != 0) {
      objective.push_back({i, model.objective[i]});
    }
  }
  if (!objective.empty()) out += " " + LinearText(model, objective, true);
  out += "\nSubject To\n";
  for (const LinearConstraint& c : model.constraints) {
    std::string lhs = LinearText(model, c.terms, false);
    if (lhs.empty()) {
      lhs = model.num_vars() > 0 ? "0 " + model.var_names.front() : "0";
    }
    out += fmt::format(" {}: {} {} {}\n", c.name, lhs, RelationSymbol(c.rel),
                       Number(c.rhs));
  }
  out += "Binary\n";
  for (const std::string& name : model.var_names) out += " " + name + "\n";
  out += "End\n";
  return out;
}

nlohmann::json ModelToJson(const IlpModel& model) {
  nlohmann::json vars = nlohmann::json::array();
  for (int i = 0; i < model.num_vars(); ++i) {
    vars.push_back({{"name", model.var_names[i]},
                    {"objective", model.objective[i]},
                    {"decision", i < model.num_decision}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const LinearConstraint& c : model.constraints) {
    nlohmann::json terms = nlohmann::json::array();
    for (const Term& t : c.terms) {
      terms.push_back({model.var_names[t.var], t.coeff});
    }
    rows.push_back({{"name", c.name},
                    {"source", c.source},
                    {"terms", terms},
                    {"rel", RelationSymbol(c.rel)},
                    {"rhs", c.rhs}});
  }
  return {{"vars", vars}, {"constraints", rows}};
}

bool IsFeasible(const IlpModel& model, std::span<const std::uint8_t> values,
                std::string* violated) {
  for (const LinearConstraint& c : model.constraints) {
    double act = 0;
    for (const Term& t : c.terms) act += t.coeff * values[t.var];
    const bool ok = c.rel == Relation::kLe   ? act <= c.rhs + 1e-9
                    : c.rel == Relation::kGe ? act >= c.rhs - 1e-9
                                             : std::fabs(act - c.rhs) <= 1e-9;
    if (!ok) {
      if (violated) *violated = c.name;
      return false;
    }
  }
  return true;
}

double ObjectiveValue(const IlpModel& model,
                      std::span<const std::uint8_t> values) {
  double total = 0;
  for (int i = 0; i < model.num_vars(); ++i) {
    if (values[i]) total += model.objective[i];
  }
  return total;
}

}  // namespace declearn
