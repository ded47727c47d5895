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

#include "declearn/schema.h"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace declearn {

std::string_view ConceptKindName(ConceptKind kind) {
  switch (kind) {
    case ConceptKind::kBasic: return "basic";
    case ConceptKind::kCompositional: return "compositional";
    case ConceptKind::kDecision: return "decision";
  }
  return "?";
}

std::string_view EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kIsA: return "is_a";
    case EdgeKind::kHasA: return "has_a";
    case EdgeKind::kContains: return "contains";
  }
  return "?";
}

bool ValidationReport::ok() const {
  return std::none_of(issues.begin(), issues.end(), [](const Issue& i) {
    return i.severity == Severity::kError;
  });
}

std::size_t ValidationReport::count(std::string_view code) const {
  return std::count_if(issues.begin(), issues.end(),
                       [&](const Issue& i) { return i.code == code; });
}

void ValidationReport::add(Severity severity, std::string code,
                           std::string message, SourceLoc loc) {
  issues.push_back(
      Issue{severity, std::move(code), std::move(message), loc});
}

void ValidationReport::append(const ValidationReport& other) {
  issues.insert(issues.end(), other.issues.begin(), other.issues.end());
}

bool IsIdentifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9');
  });
}

void ConceptGraph::add_concept(const std::string& name, ConceptKind kind,
                               std::optional<std::string> parent) {
  if (!IsIdentifier(name)) {
    throw Error(ErrorCode::kSchemaError,
                fmt::format("'{}' is not a valid concept name", name));
  }
  if (has_concept(name)) {
    throw Error(ErrorCode::kDuplicateName,
                fmt::format("concept '{}' already declared", name));
  }
  if (parent && !has_concept(*parent)) {
    throw Error(ErrorCode::kUnknownParent,
                fmt::format("parent '{}' of '{}' is not declared", *parent,
                            name));
  }
  index_.emplace(name, concepts_.size());
  concepts_.push_back(Concept{name, kind, parent});
  if (parent) edges_.push_back(Edge{EdgeKind::kIsA, name, *parent, ""});
}

void ConceptGraph::add_has_a(const std::string& compositional,
                             const std::vector<NamedArg>& args) {
  Concept& source = mutable_get(compositional);
  if (source.kind == ConceptKind::kDecision) {
    throw Error(ErrorCode::kSchemaError,
                fmt::format("decision concept '{}' cannot have has_a edges",
                            compositional));
  }
  std::set<std::string> names;
  for (const NamedArg& existing : has_a_args(compositional)) {
    names.insert(existing.arg_name);
  }
  for (const NamedArg& arg : args) {
    if (!IsIdentifier(arg.arg_name)) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("'{}' is not a valid argument name",
                              arg.arg_name));
    }
    if (!has_concept(arg.concept_name)) {
      throw Error(ErrorCode::kUnknownConcept,
                  fmt::format("has_a target '{}' is not declared",
                              arg.concept_name));
    }
    if (!names.insert(arg.arg_name).second) {
      throw Error(ErrorCode::kDuplicateArgName,
                  fmt::format("'{}' already has an argument named '{}'",
                              compositional, arg.arg_name));
    }
  }
  if (names.size() < 2) {
    throw Error(ErrorCode::kSchemaError,
                fmt::format("'{}' needs at least 2 has_a arguments",
                            compositional));
  }
  source.kind = ConceptKind::kCompositional;
  for (const NamedArg& arg : args) {
    edges_.push_back(
        Edge{EdgeKind::kHasA, compositional, arg.concept_name, arg.arg_name});
  }
}

void ConceptGraph::add_contains(const std::string& parent,
                                const std::string& child) {
  get(parent);
  get(child);
  edges_.push_back(Edge{EdgeKind::kContains, parent, child, ""});
}

void ConceptGraph::add_is_a(const std::string& child,
                            const std::string& parent) {
  Concept& c = mutable_get(child);
  get(parent);
  if (!c.parent) c.parent = parent;
  edges_.push_back(Edge{EdgeKind::kIsA, child, parent, ""});
}

bool ConceptGraph::has_concept(std::string_view name) const {
  return index_.find(name) != index_.end();
}

const Concept& ConceptGraph::get(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownConcept,
                fmt::format("concept '{}' is not declared", name));
  }
  return concepts_[it->second];
}

Concept& ConceptGraph::mutable_get(std::string_view name) {
  get(name);
  return concepts_[index_.find(name)->second];
}

std::vector<std::string> ConceptGraph::ancestors(std::string_view name) const {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen{std::string(name)};
  const Concept* current = &get(name);
  while (current->parent && seen.insert(*current->parent).second) {
    out.push_back(*current->parent);
    current = &get(*current->parent);
  }
  return out;
}

bool ConceptGraph::is_subtype(std::string_view a, std::string_view b) const {
  get(a);
  get(b);
  if (a == b) return true;
  for (const std::string& anc : ancestors(a)) {
    if (anc == b) return true;
  }
  return false;
}

std::string ConceptGraph::root(std::string_view name) const {
  std::vector<std::string> chain = ancestors(name);
  return chain.empty() ? std::string(name) : chain.back();
}

std::vector<NamedArg> ConceptGraph::has_a_args(std::string_view name) const {
  std::vector<NamedArg> out;
  for (const Edge& e : edges_) {
    if (e.kind == EdgeKind::kHasA && e.src == name) {
      out.push_back(NamedArg{e.arg_name, e.dst});
    }
  }
  return out;
}

std::optional<std::string> ConceptGraph::arg_target(
    std::string_view composite, std::string_view arg_name) const {
  for (const Edge& e : edges_) {
    if (e.kind == EdgeKind::kHasA && e.src == composite &&
        e.arg_name == arg_name) {
      return e.dst;
    }
  }
  return std::nullopt;
}

bool ConceptGraph::has_contains(std::string_view parent,
                                std::string_view child) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return e.kind == EdgeKind::kContains && e.src == parent && e.dst == child;
  });
}

std::vector<std::string> ConceptGraph::decision_concepts_under(
    std::string_view root_concept) const {
  std::vector<std::string> out;
  for (const Concept& c : concepts_) {
    if (c.kind == ConceptKind::kDecision && root(c.name) == root_concept) {
      out.push_back(c.name);
    }
  }
  return out;
}

std::vector<std::string> ConceptGraph::decision_concepts() const {
  std::vector<std::string> out;
  for (const Concept& c : concepts_) {
    if (c.kind == ConceptKind::kDecision) out.push_back(c.name);
  }
  return out;
}

std::optional<std::string> ConceptGraph::common_ancestor(
    const std::vector<std::string>& names) const {
  if (names.empty()) return std::nullopt;
  std::vector<std::string> candidates = ancestors(names.front());
  candidates.insert(candidates.begin(), names.front());
  for (const std::string& cand : candidates) {
    bool all = std::all_of(names.begin(), names.end(), [&](const auto& n) {
      return is_subtype(n, cand);
    });
    if (all) return cand;
  }
  return std::nullopt;
}

bool operator==(const ConceptGraph& a, const ConceptGraph& b) {
  if (a.concepts_ != b.concepts_) return false;
  // Edges form a set; declaration interleaving does not matter.
  auto key = [](const Edge& e) {
    return std::tie(e.kind, e.src, e.dst, e.arg_name);
  };
  auto less = [&](const Edge& x, const Edge& y) { return key(x) < key(y); };
  std::vector<Edge> ea = a.edges_, eb = b.edges_;
  std::sort(ea.begin(), ea.end(), less);
  std::sort(eb.begin(), eb.end(), less);
  return ea == eb;
}

namespace {

void CheckIsACycles(const ConceptGraph& graph, ValidationReport& report,
                    std::set<std::string>& in_cycle) {
  std::map<std::string, std::vector<std::string>> parents;
  for (const Edge& e : graph.edges()) {
    if (e.kind == EdgeKind::kIsA) parents[e.src].push_back(e.dst);
  }
  // 0 = unvisited, 1 = on stack, 2 = done. One report per back edge.
  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    color[n] = 1;
    stack.push_back(n);
    for (const std::string& p : parents[n]) {
      if (color[p] == 1) {
        auto from = std::find(stack.begin(), stack.end(), p);
        std::string path;
        for (auto it = from; it != stack.end(); ++it) {
          in_cycle.insert(*it);
          path += *it + " -> ";
        }
        report.add(Severity::kError, "isa_cycle",
                   fmt::format("is_a cycle: {}{}", path, p));
      } else if (color[p] == 0) {
        visit(p);
      }
    }
    stack.pop_back();
    color[n] = 2;
  };
  for (const Concept& c : graph.concepts()) {
    if (color[c.name] == 0) visit(c.name);
  }
}

void CheckContainsCycles(const ConceptGraph& graph, ValidationReport& report) {
  std::map<std::string, std::vector<std::string>> children;
  for (const Edge& e : graph.edges()) {
    if (e.kind != EdgeKind::kContains) continue;
    if (e.src == e.dst) {
      report.add(Severity::kWarning, "contains_self_loop",
                 fmt::format("'{}' contains itself", e.src));
    } else {
      children[e.src].push_back(e.dst);
    }
  }
  std::map<std::string, int> color;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    color[n] = 1;
    for (const std::string& c : children[n]) {
      if (color[c] == 1) {
        report.add(Severity::kWarning, "contains_cycle",
                   fmt::format("contains cycle through '{}' and '{}'", n, c));
      } else if (color[c] == 0) {
        visit(c);
      }
    }
    color[n] = 2;
  };
  for (const Concept& c : graph.concepts()) {
    if (color[c.name] == 0) visit(c.name);
  }
}

}  // namespace

ValidationReport Validate(const ConceptGraph& graph) {
  ValidationReport report;
  std::set<std::string> in_cycle;
  CheckIsACycles(graph, report, in_cycle);

  std::map<std::string, int> isa_out;
  for (const Edge& e : graph.edges()) {
    if (e.kind == EdgeKind::kIsA) ++isa_out[e.src];
    if (!graph.has_concept(e.src) || !graph.has_concept(e.dst)) {
      report.add(Severity::kError, "undeclared_endpoint",
                 fmt::format("{} edge {} -> {} names an undeclared concept",
                             EdgeKindName(e.kind), e.src, e.dst));
    }
  }

  for (const Concept& c : graph.concepts()) {
    if (!IsIdentifier(c.name)) {
      report.add(Severity::kError, "bad_name",
                 fmt::format("'{}' is not a valid identifier", c.name));
    }
    const bool decision = c.kind == ConceptKind::kDecision;
    if (decision != c.parent.has_value()) {
      report.add(Severity::kError, "decision_parent",
                 decision
                     ? fmt::format("decision concept '{}' has no parent",
                                   c.name)
                     : fmt::format("{} concept '{}' has an is_a parent",
                                   ConceptKindName(c.kind), c.name));
    }
    if (isa_out[c.name] > 1) {
      report.add(Severity::kError, "isa_multiple_parents",
                 fmt::format("'{}' has {} is_a parents", c.name,
                             isa_out[c.name]));
    }
    std::vector<NamedArg> args = graph.has_a_args(c.name);
    const bool compositional = c.kind == ConceptKind::kCompositional;
    if (compositional != (args.size() >= 2)) {
      report.add(Severity::kError, "compositional_arity",
                 fmt::format("'{}' is {} with {} has_a arguments", c.name,
                             ConceptKindName(c.kind), args.size()));
    }
    std::set<std::string> arg_names;
    for (const NamedArg& a : args) {
      if (!arg_names.insert(a.arg_name).second) {
        report.add(Severity::kError, "duplicate_arg",
                   fmt::format("'{}' repeats has_a argument '{}'", c.name,
                               a.arg_name));
      }
    }
    if (decision && c.parent && !in_cycle.count(c.name) &&
        graph.has_concept(*c.parent)) {
      const Concept& top = graph.get(graph.root(c.name));
      if (top.kind == ConceptKind::kDecision) {
        report.add(Severity::kError, "isa_root",
                   fmt::format("is_a chain of '{}' ends at decision concept "
                               "'{}'",
                               c.name, top.name));
      }
    }
  }
  CheckContainsCycles(graph, report);
  return report;
}

}  // namespace declearn
