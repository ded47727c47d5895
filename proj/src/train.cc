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

#include "declearn/train.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "declearn/error.h"
#include "declearn/softlogic.h"

namespace declearn {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Uniform [0, 1) from the top 53 bits; identical on every platform.
double Unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const LinearParams& ClassifierFor(const ParameterStore& params,
                                  const std::string& concept_name) {
  auto it = params.concepts.find(concept_name);
  if (it == params.concepts.end()) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("no classifier for concept '{}'", concept_name));
  }
  return it->second;
}

}  // namespace

nlohmann::json ParamsToJson(const ParameterStore& params) {
  nlohmann::json concepts = nlohmann::json::object();
  for (const auto& [name, p] : params.concepts) {
    concepts[name] = {{"weights", p.weights}, {"bias", p.bias}};
  }
  nlohmann::json multipliers = nlohmann::json::object();
  for (const auto& [id, v] : params.multipliers) multipliers[id] = v;
  return {{"concepts", concepts}, {"multipliers", multipliers}};
}

ParameterStore ParamsFromJson(const nlohmann::json& doc) {
  ParameterStore out;
  try {
    if (doc.contains("concepts")) {
      for (const auto& [name, p] : doc.at("concepts").items()) {
        LinearParams lp;
        lp.weights = p.at("weights").get<std::vector<double>>();
        lp.bias = p.value("bias", 0.0);
        out.concepts.emplace(name, std::move(lp));
      }
    }
    if (doc.contains("multipliers")) {
      for (const auto& [id, v] : doc.at("multipliers").items()) {
        const double m = v.get<double>();
        if (!(m >= 0)) {
          throw Error(ErrorCode::kConfigError,
                      fmt::format("multiplier '{}' is negative", id));
        }
        out.multipliers.emplace(id, m);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("malformed parameter file: {}", e.what()));
  }
  return out;
}

std::vector<double> NodeFeatures(const ConceptGraph& graph,
                                 const DataNodeGraph& dng,
                                 const DataNode& node) {
  if (!node.features.empty()) return node.features;
  std::vector<double> out;
  for (const NamedArg& arg : graph.has_a_args(graph.root(node.concept_name))) {
    std::optional<std::string> member = dng.member(node.id, arg.arg_name);
    if (!member) return {};
    const std::vector<double>& f = dng.node(*member).features;
    if (f.empty()) return {};
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

std::map<std::string, std::size_t> FeatureDims(
    const ConceptGraph& graph, std::span<const DataNodeGraph> samples) {
  std::map<std::string, std::size_t> dims;
  for (const std::string& c : graph.decision_concepts()) {
    for (const DataNodeGraph& dng : samples) {
      std::vector<const DataNode*> cands = Candidates(graph, dng, c);
      if (cands.empty()) continue;
      dims[c] = NodeFeatures(graph, dng, *cands.front()).size();
      break;
    }
  }
  return dims;
}

ParameterStore InitParams(const ConceptGraph& graph,
                          const ConstraintSet& constraints,
                          const std::map<std::string, std::size_t>& dims,
                          std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  ParameterStore out;
  // Declaration order keeps the draw sequence independent of map ordering.
  for (const std::string& c : graph.decision_concepts()) {
    auto it = dims.find(c);
    if (it == dims.end()) continue;
    LinearParams lp;
    lp.weights.resize(it->second);
    for (double& w : lp.weights) w = scale * (2 * Unit(rng) - 1);
    out.concepts.emplace(c, std::move(lp));
  }
  for (const Constraint& c : constraints.constraints) {
    out.multipliers.emplace(c.id, 0.0);
  }
  return out;
}

ScoreVector Predict(const ParameterStore& params, const ConceptGraph& graph,
                    const DataNodeGraph& dng, const DecisionIndex& index) {
  ScoreVector out(index.size());
  std::string cached_node;
  std::vector<double> x;
  for (const DecisionVar& v : index.vars()) {
    if (v.node_id != cached_node) {
      x = NodeFeatures(graph, dng, dng.node(v.node_id));
      cached_node = v.node_id;
    }
    const LinearParams& lp = ClassifierFor(params, v.concept_name);
    if (x.empty() || x.size() != lp.weights.size()) {
      throw Error(ErrorCode::kDimMismatch,
                  fmt::format("node '{}' has {} features, classifier '{}' "
                              "expects {}",
                              v.node_id, x.size(), v.concept_name,
                              lp.weights.size()));
    }
    double z = lp.bias;
    for (std::size_t j = 0; j < x.size(); ++j) z += lp.weights[j] * x[j];
    out[v.index] = Sigmoid(z);
  }
  return out;
}

LossGrad NllLoss(std::span<const double> scores, const LabelVector& labels) {
  LossGrad out;
  out.grad.assign(scores.size(), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i >= labels.size() || labels[i] < 0) continue;
    const double p = ClampProb(scores[i]);
    if (labels[i] == 1) {
      out.loss -= std::log(p);
      out.grad[i] = -1.0 / p;
    } else {
      out.loss -= std::log1p(-p);
      out.grad[i] = 1.0 / (1.0 - p);
    }
  }
  return out;
}

LossGrad ImlLoss(std::span<const double> scores, const LabelVector& labels,
                 std::span<const std::uint8_t> fstar, double lambda) {
  if (fstar.size() < scores.size()) {
    throw Error(ErrorCode::kMissingAssignment,
                fmt::format("inference assignment covers {} of {} variables",
                            fstar.size(), scores.size()));
  }
  LossGrad out;
  out.grad.assign(scores.size(), 0.0);
  if (lambda != 1.0) {
    LossGrad nll = NllLoss(scores, labels);
    out.loss = (1 - lambda) * nll.loss;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out.grad[i] = (1 - lambda) * nll.grad[i];
    }
  }
  if (lambda == 0.0) return out;
  double iml = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i >= labels.size() || labels[i] != 1 || fstar[i] != 0) continue;
    const double p = ClampProb(scores[i]);
    iml -= std::log(p);
    out.grad[i] += lambda * (-1.0 / p);
  }
  out.loss += lambda * iml;
  return out;
}

PdLossResult PdLossScores(std::span<const double> scores,
                          const LabelVector& labels,
                          const std::vector<GroundedConstraint>& grounded,
                          const std::map<std::string, double>& multipliers) {
  LossGrad nll = NllLoss(scores, labels);
  PdLossResult out{nll.loss, std::move(nll.grad), {}};
  for (const GroundedConstraint& g : grounded) {
    auto it = multipliers.find(g.constraint_id);
    const double m = it == multipliers.end() ? 0.0 : it->second;
    // Gradients are only accumulated for active multipliers.
    const double v = m > 0 ? SoftViolation(g.expr, scores, out.grad, m)
                           : SoftViolation(g.expr, scores);
    out.grad_lambda[g.constraint_id] += v;
    if (m > 0) out.loss += m * v;
  }
  return out;
}

ParameterStore BackpropScores(const ParameterStore& params,
                              const ConceptGraph& graph,
                              const DataNodeGraph& dng,
                              const DecisionIndex& index,
                              std::span<const double> scores,
                              std::span<const double> grad_scores) {
  ParameterStore out;
  for (const auto& [name, lp] : params.concepts) {
    out.concepts[name].weights.assign(lp.weights.size(), 0.0);
  }
  std::string cached_node;
  std::vector<double> x;
  for (const DecisionVar& v : index.vars()) {
    const double g = grad_scores[v.index];
    if (g == 0) continue;
    if (v.node_id != cached_node) {
      x = NodeFeatures(graph, dng, dng.node(v.node_id));
      cached_node = v.node_id;
    }
    auto it = out.concepts.find(v.concept_name);
    if (it == out.concepts.end() || it->second.weights.size() != x.size()) {
      throw Error(ErrorCode::kDimMismatch,
                  fmt::format("no matching classifier for '{}' on node '{}'",
                              v.concept_name, v.node_id));
    }
    const double p = scores[v.index];
    const double dz = g * p * (1 - p);
    LinearParams& acc = it->second;
    for (std::size_t j = 0; j < x.size(); ++j) acc.weights[j] += dz * x[j];
    acc.bias += dz;
  }
  return out;
}

PdLossFull PdLoss(const ParameterStore& params, const ConceptGraph& graph,
                  const DataNodeGraph& dng, const DecisionIndex& index,
                  const LabelVector& labels,
                  const std::vector<GroundedConstraint>& grounded) {
  const ScoreVector scores = Predict(params, graph, dng, index);
  PdLossResult r = PdLossScores(scores, labels, grounded, params.multipliers);
  return PdLossFull{
      r.loss, BackpropScores(params, graph, dng, index, scores, r.grad),
      std::move(r.grad_lambda)};
}

ParameterStore PdStep(const ParameterStore& params,
                      const ParameterStore& grad_theta,
                      const std::map<std::string, double>& grad_lambda,
                      double lr_theta, double lr_lambda) {
  ParameterStore out = params;
  for (const auto& [name, g] : grad_theta.concepts) {
    auto it = out.concepts.find(name);
    if (it == out.concepts.end()) continue;
    LinearParams& lp = it->second;
    if (g.weights.size() != lp.weights.size()) {
      throw Error(ErrorCode::kDimMismatch,
                  fmt::format("gradient for '{}' has {} weights, expected {}",
                              name, g.weights.size(), lp.weights.size()));
    }
    for (std::size_t j = 0; j < lp.weights.size(); ++j) {
      lp.weights[j] -= lr_theta * g.weights[j];
    }
    lp.bias -= lr_theta * g.bias;
  }
  for (const auto& [id, g] : grad_lambda) {
    double& m = out.multipliers[id];
    m = std::max(0.0, m + lr_lambda * g);
  }
  return out;
}

std::vector<std::uint8_t> Threshold(std::span<const double> scores) {
  std::vector<std::uint8_t> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.5;
  return out;
}

double Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
}

double Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
}

double Counts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

Counts& Counts::operator+=(const Counts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

Metrics& Metrics::operator+=(const Metrics& o) {
  for (const auto& [name, c] : o.per_concept) per_concept[name] += c;
  micro += o.micro;
  return *this;
}

Metrics Prf1(std::span<const std::uint8_t> predictions,
             const LabelVector& labels, const DecisionIndex& index) {
  Metrics m;
  for (const DecisionVar& v : index.vars()) {
    Counts& c = m.per_concept[v.concept_name];
    const std::size_t i = static_cast<std::size_t>(v.index);
    if (i >= labels.size() || labels[i] < 0 || i >= predictions.size()) {
      continue;
    }
    const bool pred = predictions[i] != 0;
    const bool gold = labels[i] == 1;
    if (pred && gold) ++c.tp;
    if (pred && !gold) ++c.fp;
    if (!pred && gold) ++c.fn;
  }
  for (const auto& [name, c] : m.per_concept) m.micro += c;
  return m;
}

nlohmann::json MetricsToJson(const Metrics& m) {
  auto one = [](const Counts& c) {
    return nlohmann::json{{"tp", c.tp},
                          {"fp", c.fp},
                          {"fn", c.fn},
                          {"precision", c.precision()},
                          {"recall", c.recall()},
                          {"f1", c.f1()}};
  };
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [name, c] : m.per_concept) per[name] = one(c);
  return {{"micro", one(m.micro)}, {"per_concept", per}};
}

}  // namespace declearn
