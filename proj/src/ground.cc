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

#include <fmt/format.h>

#include "declearn/ground.h"

namespace declearn {

GExpr GVar(int index) {
  GExpr e;
  e.kind = GKind::kVar;
  e.var = index;
  return e;
}

GExpr GConst(bool value) {
  GExpr e;
  e.kind = GKind::kConst;
  e.value = value;
  return e;
}

namespace {

GExpr GNode(GKind kind, std::vector<GExpr> children) {
  GExpr e;
  e.kind = kind;
  e.children = std::move(children);
  return e;
}

}  // namespace

GExpr GNot(GExpr child) { return GNode(GKind::kNot, {std::move(child)}); }

GExpr GAnd(std::vector<GExpr> children) {
  if (children.empty()) return GConst(true);
  if (children.size() == 1) return std::move(children.front());
  return GNode(GKind::kAnd, std::move(children));
}

GExpr GOr(std::vector<GExpr> children) {
  if (children.empty()) return GConst(false);
  if (children.size() == 1) return std::move(children.front());
  return GNode(GKind::kOr, std::move(children));
}

GExpr GIf(GExpr antecedent, GExpr consequent) {
  return GNode(GKind::kIf, {std::move(antecedent), std::move(consequent)});
}

GExpr GAtMost(int k, std::vector<GExpr> children) {
  GExpr e = GNode(GKind::kAtMost, std::move(children));
  e.k = k;
  return e;
}

bool EvalBool(const GExpr& e, std::span<const std::uint8_t> values) {
  switch (e.kind) {
    case GKind::kVar: return values[e.var] != 0;
    case GKind::kConst: return e.value;
    case GKind::kNot: return !EvalBool(e.children[0], values);
    case GKind::kAnd:
      for (const GExpr& c : e.children) {
        if (!EvalBool(c, values)) return false;
      }
      return true;
    case GKind::kOr:
      for (const GExpr& c : e.children) {
        if (EvalBool(c, values)) return true;
      }
      return false;
    case GKind::kIf:
      return !EvalBool(e.children[0], values) || EvalBool(e.children[1], values);
    case GKind::kAtMost: {
      int count = 0;
      for (const GExpr& c : e.children) count += EvalBool(c, values) ? 1 : 0;
      return count <= e.k;
    }
  }
  return false;
}

std::string Describe(const GExpr& e) {
  auto list = [&](std::string head) {
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      head += (i == 0 ? "" : ", ") + Describe(e.children[i]);
    }
    return head + ")";
  };
  switch (e.kind) {
    case GKind::kVar: return fmt::format("v{}", e.var);
    case GKind::kConst: return e.value ? "true" : "false";
    case GKind::kNot: return list("not(");
    case GKind::kAnd: return list("and(");
    case GKind::kOr: return list("or(");
    case GKind::kIf: return list("if(");
    case GKind::kAtMost: return list(fmt::format("atMost({}; ", e.k));
  }
  return "";
}

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

const std::string* Lookup(const Env& env, const std::string& var) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == var) return &it->second;
  }
  return nullptr;
}

class Grounder {
 public:
  Grounder(const ConceptGraph& graph, const DataNodeGraph& dng,
           const DecisionIndex& index)
      : graph_(graph), dng_(dng), index_(index) {}

  void GroundConstraint(const Constraint& c,
                        std::vector<GroundedConstraint>& out) {
    if (c.expr.kind == ExprKind::kDisjoint) {
      GroundDisjoint(c, out);
      return;
    }
    std::vector<const LcExpr*> binders;
    Env env;
    CollectBinders(c.expr, env, binders);
    Enumerate(binders, 0, env, [&](const Env& bound) {
      out.push_back(GroundedConstraint{c.id, bound, GroundExpr(c.expr, bound)});
    });
  }

 private:
  // Atom truth for one node: its decision variable, or `true` when the atom
  // names the node's own (non-decision) concept.
  GExpr AtomOf(const std::string& node_id, const std::string& concept_name) {
    const Concept& c = graph_.get(concept_name);
    if (c.kind != ConceptKind::kDecision) {
      return GConst(dng_.node(node_id).concept_name == graph_.root(c.name));
    }
    std::optional<int> v = index_.find(node_id, concept_name);
    if (!v) {
      throw Error(ErrorCode::kBadPath,
                  fmt::format("node '{}' has no '{}' decision", node_id,
                              concept_name));
    }
    return GVar(*v);
  }

  // Atoms introducing a variable not yet in `env`, in pre-order. Binders
  // under existsL belong to that existsL and are skipped.
  void CollectBinders(const LcExpr& e, Env& env,
                      std::vector<const LcExpr*>& binders) {
    if (e.kind == ExprKind::kExists) return;
    if (e.kind == ExprKind::kAtom) {
      if (e.var && !Lookup(env, *e.var)) {
        env.emplace_back(*e.var, "");
        binders.push_back(&e);
      }
      return;
    }
    for (const LcExpr& c : e.children) CollectBinders(c, env, binders);
  }

  std::vector<std::string> Domain(const LcExpr& binder, const Env& env) {
    if (binder.path) {
      const std::string* start = Lookup(env, binder.path->root_var);
      if (!start) {
        throw Error(ErrorCode::kUnboundVariable,
                    fmt::format("unbound variable '{}'", binder.path->root_var),
                    binder.loc);
      }
      return ResolvePath(graph_, dng_, *start, binder.path->steps);
    }
    std::vector<std::string> out;
    for (const DataNode* n : Candidates(graph_, dng_, binder.concept_name)) {
      out.push_back(n->id);
    }
    return out;
  }

  template <typename Fn>
  void Enumerate(const std::vector<const LcExpr*>& binders, std::size_t i,
                 Env& env, Fn&& emit) {
    if (i == binders.size()) {
      Env bound;
      for (const auto& kv : env) {
        if (!kv.second.empty()) bound.push_back(kv);
      }
      emit(bound);
      return;
    }
    const LcExpr& binder = *binders[i];
    // Placeholder slots created by CollectBinders are filled in order.
    auto slot = std::find_if(env.begin(), env.end(), [&](const auto& kv) {
      return kv.first == *binder.var;
    });
    for (const std::string& node : Domain(binder, env)) {
      slot->second = node;
      Enumerate(binders, i + 1, env, emit);
    }
    slot->second.clear();
  }

  GExpr GroundExpr(const LcExpr& e, const Env& env) {
    switch (e.kind) {
      case ExprKind::kAtom: return GroundAtom(e, env);
      case ExprKind::kNot: return GNot(GroundExpr(e.children[0], env));
      case ExprKind::kAnd: return GAnd(GroundChildren(e, env));
      case ExprKind::kOr: return GOr(GroundChildren(e, env));
      case ExprKind::kIf:
        return GIf(GroundExpr(e.children[0], env),
                   GroundExpr(e.children[1], env));
      case ExprKind::kAtMost: return GAtMost(e.k, GroundChildren(e, env));
      case ExprKind::kExists: return GroundExists(e.children[0], env);
      case ExprKind::kDisjoint:
        throw Error(ErrorCode::kSchemaError,
                    "disjoint is only allowed at top level", e.loc);
    }
    return GConst(false);
  }

  std::vector<GExpr> GroundChildren(const LcExpr& e, const Env& env) {
    std::vector<GExpr> out;
    out.reserve(e.children.size());
    for (const LcExpr& c : e.children) out.push_back(GroundExpr(c, env));
    return out;
  }

  GExpr GroundAtom(const LcExpr& e, const Env& env) {
    if (e.var) {
      if (const std::string* node = Lookup(env, *e.var)) {
        return AtomOf(*node, e.concept_name);
      }
    }
    if (!e.path) {
      throw Error(ErrorCode::kUnboundVariable,
                  fmt::format("atom '{}' has no bound variable or path",
                              Pretty(e)),
                  e.loc);
    }
    std::vector<GExpr> atoms;
    for (const std::string& node : Domain(e, env)) {
      atoms.push_back(AtomOf(node, e.concept_name));
    }
    // Several reached nodes: all must hold. None: false.
    if (atoms.empty()) return GConst(false);
    return GAnd(std::move(atoms));
  }

  GExpr GroundExists(const LcExpr& child, const Env& env) {
    std::vector<const LcExpr*> binders;
    Env scoped = env;
    CollectBinders(child, scoped, binders);
    std::vector<GExpr> disjuncts;
    if (!binders.empty()) {
      Enumerate(binders, 0, scoped, [&](const Env&) {
        disjuncts.push_back(GroundExpr(child, scoped));
      });
      return GOr(std::move(disjuncts));
    }
    if (child.kind == ExprKind::kAtom && !child.var) {
      std::vector<std::string> nodes;
      if (child.path) {
        nodes = Domain(child, env);
      } else {
        for (const DataNode* n : Candidates(graph_, dng_, child.concept_name)) {
          nodes.push_back(n->id);
        }
      }
      for (const std::string& node : nodes) {
        disjuncts.push_back(AtomOf(node, child.concept_name));
      }
      return GOr(std::move(disjuncts));
    }
    return GroundExpr(child, env);
  }

  void GroundDisjoint(const Constraint& c,
                      std::vector<GroundedConstraint>& out) {
    std::optional<std::string> shared = graph_.common_ancestor(c.expr.concepts);
    if (!shared) {
      throw Error(ErrorCode::kSchemaError,
                  "disjoint concepts share no common is_a ancestor",
                  c.expr.loc);
    }
    for (const DataNode* n : Candidates(graph_, dng_, *shared)) {
      std::vector<GExpr> atoms;
      for (const std::string& name : c.expr.concepts) {
        atoms.push_back(AtomOf(n->id, name));
      }
      out.push_back(GroundedConstraint{
          c.id, {{"_", n->id}}, GAtMost(1, std::move(atoms))});
    }
  }

  const ConceptGraph& graph_;
  const DataNodeGraph& dng_;
  const DecisionIndex& index_;
};

}  // namespace

std::vector<GroundedConstraint> Ground(const ConstraintSet& constraints,
                                       const ConceptGraph& graph,
                                       const DataNodeGraph& dng,
                                       const DecisionIndex& index) {
  std::vector<GroundedConstraint> out;
  Grounder grounder(graph, dng, index);
  for (const Constraint& c : constraints.constraints) {
    grounder.GroundConstraint(c, out);
  }
  return out;
}

}  // namespace declearn
