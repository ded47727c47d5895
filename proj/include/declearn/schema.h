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

// Conceptual graph: concepts plus typed is_a / has_a / contains edges.

#ifndef DECLEARN_SCHEMA_H_
#define DECLEARN_SCHEMA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "declearn/error.h"

namespace declearn {

enum class ConceptKind { kBasic, kCompositional, kDecision };
enum class EdgeKind { kIsA, kHasA, kContains };

std::string_view ConceptKindName(ConceptKind kind);
std::string_view EdgeKindName(EdgeKind kind);

struct Concept {
  std::string name;
  ConceptKind kind = ConceptKind::kBasic;
  std::optional<std::string> parent;

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct Edge {
  EdgeKind kind = EdgeKind::kIsA;
  std::string src;
  std::string dst;
  std::string arg_name;  // has_a only

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct NamedArg {
  std::string arg_name;
  std::string concept_name;
};

enum class Severity { kError, kWarning };

struct Issue {
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  SourceLoc loc;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool empty() const { return issues.empty(); }
  // True when no error-severity issue is present; warnings are allowed.
  bool ok() const;
  std::size_t count(std::string_view code) const;
  void add(Severity severity, std::string code, std::string message,
           SourceLoc loc = {});
  void append(const ValidationReport& other);
};

// Concept names are case-sensitive identifiers [A-Za-z_][A-Za-z0-9_]*.
bool IsIdentifier(std::string_view name);

// Built single-threaded through the add_* calls, then shared read-only.
// Declaration order of concepts and edges is preserved and drives every
// deterministic ordering downstream.
class ConceptGraph {
 public:
  // Decision concepts record their parent via an implicit is_a edge.
  // Throws DuplicateName, UnknownParent, SchemaError (bad identifier).
  void add_concept(const std::string& name, ConceptKind kind,
                   std::optional<std::string> parent = std::nullopt);

  // One has_a edge per argument. A basic concept becomes compositional.
  // Throws UnknownConcept, DuplicateArgName, SchemaError (arity < 2 or
  // decision source).
  void add_has_a(const std::string& compositional,
                 const std::vector<NamedArg>& args);

  // Throws UnknownConcept. Self-loops are accepted and reported as warnings
  // by Validate().
  void add_contains(const std::string& parent, const std::string& child);

  // Raw is_a edge without the kind bookkeeping of add_concept. Lets callers
  // (and tests) build graphs that Validate() must reject.
  void add_is_a(const std::string& child, const std::string& parent);

  bool has_concept(std::string_view name) const;
  // Throws UnknownConcept.
  const Concept& get(std::string_view name) const;

  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Proper is_a ancestors, nearest first. Stops on cycles.
  std::vector<std::string> ancestors(std::string_view name) const;
  // Reflexive-transitive closure of is_a.
  bool is_subtype(std::string_view a, std::string_view b) const;
  // Top of the is_a chain (the concept itself when it has no parent).
  std::string root(std::string_view name) const;

  std::vector<NamedArg> has_a_args(std::string_view name) const;
  std::optional<std::string> arg_target(std::string_view composite,
                                        std::string_view arg_name) const;
  bool has_contains(std::string_view parent, std::string_view child) const;

  // Decision concepts whose root is `root_concept`, in declaration order.
  std::vector<std::string> decision_concepts_under(
      std::string_view root_concept) const;
  // All decision concepts in declaration order.
  std::vector<std::string> decision_concepts() const;

  // Nearest concept that every name is a subtype of, if any.
  std::optional<std::string> common_ancestor(
      const std::vector<std::string>& names) const;

  friend bool operator==(const ConceptGraph& a, const ConceptGraph& b);

 private:
  Concept& mutable_get(std::string_view name);

  std::vector<Concept> concepts_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Edge> edges_;
};

// Reports every invariant violation. Contains self-loops and cycles are
// warnings; all else is an error.
ValidationReport Validate(const ConceptGraph& graph);

}  // namespace declearn

#endif  // DECLEARN_SCHEMA_H_
