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

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "declearn/ground.h"

namespace declearn {

using nlohmann::json;

DataNodeGraph::DataNodeGraph(const ConceptGraph& graph,
                             std::vector<DataNode> nodes,
                             std::vector<ContainsLink> contains,
                             std::vector<HasALink> has_a)
    : nodes_(std::move(nodes)),
      contains_(std::move(contains)),
      has_a_(std::move(has_a)) {
  std::map<std::string, std::size_t> dims;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const DataNode& n = nodes_[i];
    if (n.id.empty()) {
      throw Error(ErrorCode::kSchemaError, "node with empty id");
    }
    if (!index_.emplace(n.id, i).second) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("duplicate node id '{}'", n.id));
    }
    const Concept& c = graph.get(n.concept_name);
    if (c.kind == ConceptKind::kDecision) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("node '{}' has decision concept '{}'; data "
                              "nodes must be basic or compositional",
                              n.id, n.concept_name));
    }
    if (!n.features.empty()) {
      auto [it, fresh] = dims.emplace(n.concept_name, n.features.size());
      if (!fresh && it->second != n.features.size()) {
        throw Error(ErrorCode::kSchemaError,
                    fmt::format("node '{}' has {} features, other '{}' nodes "
                                "have {}",
                                n.id, n.features.size(), n.concept_name,
                                it->second));
      }
    }
    for (const auto& [label_concept, value] : n.labels) {
      const Concept& lc = graph.get(label_concept);
      if (lc.kind != ConceptKind::kDecision ||
          graph.root(label_concept) != n.concept_name) {
        throw Error(ErrorCode::kSchemaError,
                    fmt::format("label '{}' does not apply to '{}' node '{}'",
                                label_concept, n.concept_name, n.id));
      }
      if (value != 0 && value != 1) {
        throw Error(ErrorCode::kSchemaError,
                    fmt::format("label '{}' of node '{}' must be 0 or 1",
                                label_concept, n.id));
      }
    }
  }
  for (const ContainsLink& l : contains_) {
    const DataNode* p = find(l.parent);
    const DataNode* c = find(l.child);
    if (!p || !c) {
      throw Error(ErrorCode::kDanglingLink,
                  fmt::format("contains link [{}, {}] names a missing node",
                              l.parent, l.child));
    }
    if (!graph.has_contains(p->concept_name, c->concept_name)) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("schema has no '{} contains {}' edge for link "
                              "[{}, {}]",
                              p->concept_name, c->concept_name, l.parent,
                              l.child));
    }
  }
  std::set<std::pair<std::string, std::string>> filled;
  for (const HasALink& l : has_a_) {
    const DataNode* comp = find(l.composite);
    const DataNode* mem = find(l.member);
    if (!comp || !mem) {
      throw Error(ErrorCode::kDanglingLink,
                  fmt::format("has_a link [{}, {}, {}] names a missing node",
                              l.composite, l.arg_name, l.member));
    }
    std::optional<std::string> target =
        graph.arg_target(comp->concept_name, l.arg_name);
    if (!target) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("'{}' has no has_a argument '{}'",
                              comp->concept_name, l.arg_name));
    }
    if (graph.root(*target) != mem->concept_name) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("argument '{}' of '{}' expects a '{}', got '{}'",
                              l.arg_name, l.composite, graph.root(*target),
                              mem->concept_name));
    }
    if (!filled.emplace(l.composite, l.arg_name).second) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("argument '{}' of '{}' given twice", l.arg_name,
                              l.composite));
    }
  }
  for (const DataNode& n : nodes_) {
    for (const NamedArg& a : graph.has_a_args(n.concept_name)) {
      if (!filled.count({n.id, a.arg_name})) {
        throw Error(ErrorCode::kMissingArg,
                    fmt::format("'{}' node '{}' lacks argument '{}'",
                                n.concept_name, n.id, a.arg_name));
      }
    }
  }
}

const DataNode* DataNodeGraph::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const DataNode& DataNodeGraph::node(std::string_view id) const {
  const DataNode* n = find(id);
  if (!n) {
    throw Error(ErrorCode::kDanglingLink, fmt::format("no node '{}'", id));
  }
  return *n;
}

std::vector<std::string> DataNodeGraph::children(std::string_view id) const {
  std::vector<std::string> out;
  for (const ContainsLink& l : contains_) {
    if (l.parent == id) out.push_back(l.child);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> DataNodeGraph::parents(std::string_view id) const {
  std::vector<std::string> out;
  for (const ContainsLink& l : contains_) {
    if (l.child == id) out.push_back(l.parent);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> DataNodeGraph::member(
    std::string_view composite, std::string_view arg_name) const {
  for (const HasALink& l : has_a_) {
    if (l.composite == composite && l.arg_name == arg_name) return l.member;
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> DataNodeGraph::memberships(
    std::string_view id) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const HasALink& l : has_a_) {
    if (l.member == id) out.emplace_back(l.composite, l.arg_name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

[[noreturn]] void SchemaFail(const std::string& msg) {
  throw Error(ErrorCode::kSchemaError, msg);
}

const json& RequireArray(const json& doc, const char* key, bool required) {
  static const json kEmpty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) {
    if (required) SchemaFail(fmt::format("missing \"{}\" array", key));
    return kEmpty;
  }
  if (!it->is_array()) SchemaFail(fmt::format("\"{}\" must be an array", key));
  return *it;
}

std::string RequireString(const json& j, const char* what) {
  if (!j.is_string()) SchemaFail(fmt::format("{} must be a string", what));
  return j.get<std::string>();
}

DataNode ParseNode(const json& j) {
  if (!j.is_object()) SchemaFail("node entries must be objects");
  DataNode n;
  if (!j.contains("id")) SchemaFail("node without \"id\"");
  n.id = RequireString(j["id"], "node id");
  if (!j.contains("concept")) {
    SchemaFail(fmt::format("node '{}' without \"concept\"", n.id));
  }
  n.concept_name = RequireString(j["concept"], "node concept");
  if (auto it = j.find("features"); it != j.end()) {
    if (!it->is_array()) SchemaFail("\"features\" must be an array");
    for (const json& x : *it) {
      if (!x.is_number()) {
        SchemaFail(fmt::format("node '{}' has a non-numeric feature", n.id));
      }
      n.features.push_back(x.get<double>());
    }
  }
  if (auto it = j.find("attrs"); it != j.end()) {
    if (!it->is_object()) SchemaFail("\"attrs\" must be an object");
    for (const auto& [k, v] : it->items()) {
      n.attrs[k] = RequireString(v, "attribute value");
    }
  }
  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_object()) SchemaFail("\"labels\" must be an object");
    for (const auto& [k, v] : it->items()) {
      if (v.is_boolean()) {
        n.labels[k] = v.get<bool>() ? 1 : 0;
      } else if (v.is_number_integer()) {
        n.labels[k] = v.get<int>();
      } else {
        SchemaFail(fmt::format("label '{}' of node '{}' must be 0/1", k, n.id));
      }
    }
  }
  return n;
}

}  // namespace

DataNodeGraph LoadData(const json& doc, const ConceptGraph& graph) {
  if (!doc.is_object()) SchemaFail("instance must be a JSON object");
  std::vector<DataNode> nodes;
  for (const json& j : RequireArray(doc, "nodes", true)) {
    nodes.push_back(ParseNode(j));
  }
  std::vector<ContainsLink> contains;
  for (const json& j : RequireArray(doc, "contains", false)) {
    if (!j.is_array() || j.size() != 2) {
      SchemaFail("contains links are [parent, child]");
    }
    contains.push_back(ContainsLink{RequireString(j[0], "contains parent"),
                                    RequireString(j[1], "contains child")});
  }
  std::vector<HasALink> has_a;
  for (const json& j : RequireArray(doc, "has_a", false)) {
    if (!j.is_array() || j.size() != 3) {
      SchemaFail("has_a links are [composite, arg_name, member]");
    }
    has_a.push_back(HasALink{RequireString(j[0], "has_a composite"),
                             RequireString(j[1], "has_a argument"),
                             RequireString(j[2], "has_a member")});
  }
  return DataNodeGraph(graph, std::move(nodes), std::move(contains),
                       std::move(has_a));
}

namespace {

json ParseJsonText(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    SchemaFail(fmt::format("invalid JSON: {}", e.what()));
  }
}

}  // namespace

DataNodeGraph LoadData(std::string_view json_text, const ConceptGraph& graph) {
  return LoadData(ParseJsonText(json_text), graph);
}

std::vector<DataNodeGraph> LoadSamples(std::string_view json_text,
                                       const ConceptGraph& graph) {
  json doc = ParseJsonText(json_text);
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("samples")) return {LoadData(doc, graph)};
    list = &doc["samples"];
  }
  if (!list->is_array()) SchemaFail("\"samples\" must be an array");
  std::vector<DataNodeGraph> out;
  for (const json& sample : *list) out.push_back(LoadData(sample, graph));
  return out;
}

json DataToJson(const DataNodeGraph& dng) {
  json nodes = json::array();
  for (const DataNode& n : dng.nodes()) {
    json j = {{"id", n.id}, {"concept", n.concept_name}};
    if (!n.features.empty()) j["features"] = n.features;
    if (!n.attrs.empty()) j["attrs"] = n.attrs;
    if (!n.labels.empty()) j["labels"] = n.labels;
    nodes.push_back(std::move(j));
  }
  json contains = json::array();
  for (const ContainsLink& l : dng.contains_links()) {
    contains.push_back({l.parent, l.child});
  }
  json has_a = json::array();
  for (const HasALink& l : dng.has_a_links()) {
    has_a.push_back({l.composite, l.arg_name, l.member});
  }
  return {{"nodes", nodes}, {"contains", contains}, {"has_a", has_a}};
}

std::vector<const DataNode*> Candidates(const ConceptGraph& graph,
                                        const DataNodeGraph& dng,
                                        std::string_view concept_name) {
  const std::string root = graph.root(concept_name);
  std::vector<const DataNode*> out;
  for (const DataNode& n : dng.nodes()) {
    if (n.concept_name == root) out.push_back(&n);
  }
  std::sort(out.begin(), out.end(),
            [](const DataNode* a, const DataNode* b) { return a->id < b->id; });
  return out;
}

std::vector<std::string> ResolvePath(const ConceptGraph& graph,
                                     const DataNodeGraph& dng,
                                     std::string_view start,
                                     const std::vector<PathStep>& steps) {
  std::vector<std::string> current{std::string(start)};
  for (const PathStep& step : steps) {
    std::set<std::string> next;
    for (const std::string& id : current) {
      const DataNode& n = dng.node(id);
      std::optional<ResolvedStep> r = ResolveStep(graph, n.concept_name, step);
      if (!r) {
        throw Error(ErrorCode::kBadPath,
                    fmt::format("step '{}{}{}' is undefined on '{}'", step.via,
                                step.via.empty() ? "" : ".", step.name,
                                n.concept_name));
      }
      switch (r->kind) {
        case StepKind::kArg:
          if (auto m = dng.member(id, step.name)) next.insert(*m);
          break;
        case StepKind::kVia:
          for (const auto& [composite, arg] : dng.memberships(id)) {
            if (arg == step.name) continue;
            if (dng.node(composite).concept_name != step.via) continue;
            if (auto m = dng.member(composite, step.name)) next.insert(*m);
          }
          break;
        case StepKind::kContainsDown:
          for (const std::string& c : dng.children(id)) {
            if (dng.node(c).concept_name == r->target) next.insert(c);
          }
          break;
        case StepKind::kContainsUp:
          for (const std::string& p : dng.parents(id)) {
            if (dng.node(p).concept_name == r->target) next.insert(p);
          }
          break;
      }
    }
    current.assign(next.begin(), next.end());
  }
  return current;
}

DecisionIndex::DecisionIndex(const ConceptGraph& graph,
                             const DataNodeGraph& dng) {
  std::vector<const DataNode*> sorted;
  for (const DataNode& n : dng.nodes()) sorted.push_back(&n);
  std::sort(sorted.begin(), sorted.end(),
            [](const DataNode* a, const DataNode* b) { return a->id < b->id; });
  for (const DataNode* n : sorted) {
    for (const std::string& c : graph.decision_concepts_under(n->concept_name)) {
      const int index = static_cast<int>(vars_.size());
      lookup_.emplace(std::make_pair(n->id, c), index);
      vars_.push_back(DecisionVar{n->id, c, index});
    }
  }
}

std::optional<int> DecisionIndex::find(std::string_view node_id,
                                       std::string_view concept_name) const {
  auto it = lookup_.find(
      std::make_pair(std::string(node_id), std::string(concept_name)));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double ClampProb(double p) {
  return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

LabelVector CollectLabels(const DataNodeGraph& dng,
                          const DecisionIndex& index) {
  LabelVector out(index.size(), -1);
  for (const DecisionVar& v : index.vars()) {
    const DataNode& n = dng.node(v.node_id);
    auto it = n.labels.find(v.concept_name);
    if (it != n.labels.end()) out[v.index] = it->second;
  }
  return out;
}

}  // namespace declearn
