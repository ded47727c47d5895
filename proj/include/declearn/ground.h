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

// Instance graphs (DataNodeGraph) loaded from JSON, the dense decision
// variable index, and grounding of constraints into propositional
// expressions over decision variables.

#ifndef DECLEARN_GROUND_H_
#define DECLEARN_GROUND_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "declearn/lclang.h"
#include "declearn/schema.h"

namespace declearn {

struct DataNode {
  std::string id;
  std::string concept_name;  // basic or compositional
  std::vector<double> features;
  std::map<std::string, std::string> attrs;
  std::map<std::string, int> labels;  // decision concept -> 0/1
};

struct ContainsLink {
  std::string parent;
  std::string child;
};

struct HasALink {
  std::string composite;
  std::string arg_name;
  std::string member;
};

class DataNodeGraph {
 public:
  DataNodeGraph() = default;

  // Builds and validates. Throws SchemaError, UnknownConcept, DanglingLink,
  // MissingArg.
  DataNodeGraph(const ConceptGraph& graph, std::vector<DataNode> nodes,
                std::vector<ContainsLink> contains,
                std::vector<HasALink> has_a);

  const std::vector<DataNode>& nodes() const { return nodes_; }
  const std::vector<ContainsLink>& contains_links() const { return contains_; }
  const std::vector<HasALink>& has_a_links() const { return has_a_; }

  const DataNode* find(std::string_view id) const;
  const DataNode& node(std::string_view id) const;

  // Adjacency, each sorted by id.
  std::vector<std::string> children(std::string_view id) const;
  std::vector<std::string> parents(std::string_view id) const;
  std::optional<std::string> member(std::string_view composite,
                                    std::string_view arg_name) const;
  // (composite id, arg name) pairs in which `id` is a member.
  std::vector<std::pair<std::string, std::string>> memberships(
      std::string_view id) const;

 private:
  std::vector<DataNode> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<ContainsLink> contains_;
  std::vector<HasALink> has_a_;
};

// Instance JSON:
//   {"nodes":[{"id","concept","features":[...],"attrs":{},"labels":{}}],
//    "contains":[["parent","child"]],
//    "has_a":[["composite","arg_name","member"]]}
DataNodeGraph LoadData(const nlohmann::json& doc, const ConceptGraph& graph);
DataNodeGraph LoadData(std::string_view json_text, const ConceptGraph& graph);
// Exact-match overloads; strings otherwise convert to json and string_view.
inline DataNodeGraph LoadData(const std::string& json_text,
                              const ConceptGraph& graph) {
  return LoadData(std::string_view(json_text), graph);
}
inline DataNodeGraph LoadData(const char* json_text,
                              const ConceptGraph& graph) {
  return LoadData(std::string_view(json_text), graph);
}

// One DataNodeGraph per top-level sample. Accepts a single instance object,
// an array of instances, or {"samples":[...]}.
std::vector<DataNodeGraph> LoadSamples(std::string_view json_text,
                                       const ConceptGraph& graph);

nlohmann::json DataToJson(const DataNodeGraph& dng);

// Nodes a variable over `concept_name` ranges over: nodes of its root
// concept, sorted by id. Throws UnknownConcept.
std::vector<const DataNode*> Candidates(const ConceptGraph& graph,
                                        const DataNodeGraph& dng,
                                        std::string_view concept_name);

// Follows `steps` from node `start`; result sorted by id, possibly empty.
// Throws BadPath when a step is not defined on the schema.
std::vector<std::string> ResolvePath(const ConceptGraph& graph,
                                     const DataNodeGraph& dng,
                                     std::string_view start,
                                     const std::vector<PathStep>& steps);

struct DecisionVar {
  std::string node_id;
  std::string concept_name;
  int index = 0;
};

// Dense 0..n-1 index over (node, decision concept): nodes by id, then
// decision concepts in declaration order.
class DecisionIndex {
 public:
  DecisionIndex() = default;
  DecisionIndex(const ConceptGraph& graph, const DataNodeGraph& dng);

  const std::vector<DecisionVar>& vars() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  std::optional<int> find(std::string_view node_id,
                          std::string_view concept_name) const;
  const DecisionVar& operator[](std::size_t i) const { return vars_[i]; }

 private:
  std::vector<DecisionVar> vars_;
  std::map<std::pair<std::string, std::string>, int> lookup_;
};

// Probability of the positive class per decision variable.
using ScoreVector = std::vector<double>;
// Ground truth per decision variable; -1 marks "unlabeled".
using LabelVector = std::vector<int>;

inline constexpr double kProbFloor = 1e-7;
double ClampProb(double p);

// Labels from the data nodes; -1 where a node carries no label.
LabelVector CollectLabels(const DataNodeGraph& dng, const DecisionIndex& index);

enum class GKind { kVar, kConst, kNot, kAnd, kOr, kIf, kAtMost };

// Propositional expression over decision variables.
struct GExpr {
  GKind kind = GKind::kConst;
  int var = -1;        // kVar
  bool value = false;  // kConst
  int k = 0;           // kAtMost
  std::vector<GExpr> children;

  friend bool operator==(const GExpr&, const GExpr&) = default;
};

GExpr GVar(int index);
GExpr GConst(bool value);
GExpr GNot(GExpr child);
GExpr GAnd(std::vector<GExpr> children);
GExpr GOr(std::vector<GExpr> children);
GExpr GIf(GExpr antecedent, GExpr consequent);
GExpr GAtMost(int k, std::vector<GExpr> children);

bool EvalBool(const GExpr& e, std::span<const std::uint8_t> values);
// Text form with variables as v<index>, for diagnostics and tests.
std::string Describe(const GExpr& e);

struct GroundedConstraint {
  std::string constraint_id;
  std::vector<std::pair<std::string, std::string>> binding;  // var -> node
  GExpr expr;
};

// One GroundedConstraint per binding of the top-level (universal) variables,
// in nested candidate order. existsL becomes an Or over its candidates; a
// path atom reaching several nodes becomes an And, reaching none becomes
// false. disjoint(c1..cn) yields one atMost(1) per candidate of the shared
// ancestor. Throws BadPath.
std::vector<GroundedConstraint> Ground(const ConstraintSet& constraints,
                                       const ConceptGraph& graph,
                                       const DataNodeGraph& dng,
                                       const DecisionIndex& index);

}  // namespace declearn

#endif  // DECLEARN_GROUND_H_
