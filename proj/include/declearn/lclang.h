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

// Logical-constraint language: AST, parser for the .dk DSL, well-formedness
// checks against a ConceptGraph and a canonical printer.
//
// A .dk file holds graph declarations followed by constraints:
//
//   concept phrase;
//   concept people : phrase;
//   pair has_a (arg1=phrase, arg2=phrase);
//   sentence contains phrase;
//   ifL(work_for('x'), andL(people(path=('x', arg1)),
//                           organization(path=('x', arg2))))
//
// Path steps are one of
//   arg        composite -> member through a has_a argument,
//   C.arg      member -> every C composite holding it under another argument
//              -> that composite's `arg` member,
//   C          along a contains edge to concept C (children or parents,
//              whichever direction the schema declares).

#ifndef DECLEARN_LCLANG_H_
#define DECLEARN_LCLANG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "declearn/error.h"
#include "declearn/schema.h"

namespace declearn {

struct PathStep {
  std::string via;  // compositional concept for C.arg hops, else empty
  std::string name;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct Path {
  std::string root_var;
  std::vector<PathStep> steps;

  friend bool operator==(const Path&, const Path&) = default;
};

enum class ExprKind { kAtom, kNot, kAnd, kOr, kIf, kExists, kAtMost, kDisjoint };

struct LcExpr {
  ExprKind kind = ExprKind::kAtom;
  std::string concept_name;        // kAtom
  std::optional<std::string> var;  // kAtom: binds, or refers to, a variable
  std::optional<Path> path;        // kAtom
  int k = 0;                       // kAtMost
  std::vector<LcExpr> children;
  std::vector<std::string> concepts;  // kDisjoint
  SourceLoc loc;                      // not part of equality

  friend bool operator==(const LcExpr& a, const LcExpr& b);
};

LcExpr Atom(std::string concept_name, std::optional<std::string> var = {},
            std::optional<Path> path = {});
LcExpr NotL(LcExpr child);
LcExpr AndL(std::vector<LcExpr> children);
LcExpr OrL(std::vector<LcExpr> children);
LcExpr IfL(LcExpr antecedent, LcExpr consequent);
LcExpr ExistsL(LcExpr child);
LcExpr AtMostL(int k, std::vector<LcExpr> children);
LcExpr Disjoint(std::vector<std::string> concepts);

struct Constraint {
  std::string id;
  LcExpr expr;
};

struct ConstraintSet {
  std::vector<Constraint> constraints;

  // Appends with the next stable id ("lc0", "lc1", ...).
  const Constraint& add(LcExpr expr);
  std::size_t size() const { return constraints.size(); }
  bool empty() const { return constraints.empty(); }
};

struct Document {
  ConceptGraph graph;
  ConstraintSet constraints;
};

// Syntax plus graph construction only; constraint semantics unchecked.
// Throws Error (SyntaxError, DuplicateName, UnknownParent, UnknownConcept,
// DuplicateArgName, SchemaError) carrying the line/column.
Document ParseSyntax(std::string_view source);

// ParseSyntax followed by CheckWellFormed on every constraint; the first
// problem is thrown (UnknownConcept, UnboundVariable, BadPath, SyntaxError
// for arity, SchemaError otherwise).
Document Parse(std::string_view source);

enum class StepKind { kArg, kVia, kContainsDown, kContainsUp };

struct ResolvedStep {
  StepKind kind = StepKind::kArg;
  std::string target;  // concept reached by the step
};

// Types one path step leaving a node of concept `from`. nullopt when the step
// names no has_a argument or contains edge reachable from `from`.
std::optional<ResolvedStep> ResolveStep(const ConceptGraph& graph,
                                        std::string_view from,
                                        const PathStep& step);

// A single constraint expression, no graph context.
LcExpr ParseExpr(std::string_view source);

// Variable binding, path typing, arity and the disjoint sibling rule.
// Issue codes: unknown_concept, unbound_variable, bad_path, arity,
// bare_atom, rebound_variable, disjoint_ancestor, disjoint_nested.
ValidationReport CheckWellFormed(const LcExpr& expr, const ConceptGraph& graph);

// Maps a CheckWellFormed issue code to the error thrown by Parse().
ErrorCode IssueErrorCode(std::string_view issue_code);

std::string Pretty(const LcExpr& expr);
std::string Pretty(const Path& path);

// Graph declarations in DSL form; Parse(PrettyGraph(g)).graph == g for
// graphs built through add_concept/add_has_a/add_contains.
std::string PrettyGraph(const ConceptGraph& graph);

}  // namespace declearn

#endif  // DECLEARN_LCLANG_H_
