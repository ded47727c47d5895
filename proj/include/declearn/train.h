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

// Linear per-concept classifiers, the three training losses (NLL, masked
// IML and primal-dual), SGD steps and precision/recall metrics.

#ifndef DECLEARN_TRAIN_H_
#define DECLEARN_TRAIN_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "declearn/ground.h"
#include "declearn/lclang.h"
#include "declearn/schema.h"

namespace declearn {

struct LinearParams {
  std::vector<double> weights;
  double bias = 0;

  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

// Classifier per decision concept plus one multiplier per constraint id.
// Multipliers stay >= 0.
struct ParameterStore {
  std::map<std::string, LinearParams> concepts;
  std::map<std::string, double> multipliers;

  friend bool operator==(const ParameterStore&,
                         const ParameterStore&) = default;
};

nlohmann::json ParamsToJson(const ParameterStore& params);
// Throws ConfigError on malformed input or negative multipliers.
ParameterStore ParamsFromJson(const nlohmann::json& doc);

// Input vector of a node: its own features, or for a compositional node
// without features the concatenation of its members' features in argument
// order. Empty if neither is available.
std::vector<double> NodeFeatures(const ConceptGraph& graph,
                                 const DataNodeGraph& dng,
                                 const DataNode& node);

// Feature dimension per decision concept, taken from the first candidate
// node found in `samples`. Concepts with no candidates are omitted.
std::map<std::string, std::size_t> FeatureDims(
    const ConceptGraph& graph, std::span<const DataNodeGraph> samples);

// Weights drawn uniformly from [-scale, scale] with a seeded mt19937_64;
// biases and multipliers start at 0.
ParameterStore InitParams(const ConceptGraph& graph,
                          const ConstraintSet& constraints,
                          const std::map<std::string, std::size_t>& dims,
                          std::uint64_t seed, double scale = 0.01);

// sigmoid(w.x + b) per decision variable. Throws DimMismatch when a node's
// features are missing or do not match the classifier, ConfigError when a
// concept has no classifier.
ScoreVector Predict(const ParameterStore& params, const ConceptGraph& graph,
                    const DataNodeGraph& dng, const DecisionIndex& index);

struct LossGrad {
  double loss = 0;
  std::vector<double> grad;  // d loss / d score
};

// Summed binary cross-entropy over labeled variables. Scores are clamped to
// [kProbFloor, 1 - kProbFloor] in the value; the gradient is taken at the
// clamped point and passed straight through.
LossGrad NllLoss(std::span<const double> scores, const LabelVector& labels);

// (1 - lambda) * NLL + lambda * IML, where IML = -sum (1 - f*_i) y_i log p_i.
// Throws MissingAssignment when `fstar` does not cover every score.
LossGrad ImlLoss(std::span<const double> scores, const LabelVector& labels,
                 std::span<const std::uint8_t> fstar, double lambda);

struct PdLossResult {
  double loss = 0;
  std::vector<double> grad;                   // d loss / d score
  std::map<std::string, double> grad_lambda;  // summed violation per id
};

// NLL + sum_c multiplier(c) * soft violation(c). Every constraint id of
// `grounded` appears in grad_lambda.
PdLossResult PdLossScores(std::span<const double> scores,
                          const LabelVector& labels,
                          const std::vector<GroundedConstraint>& grounded,
                          const std::map<std::string, double>& multipliers);

// Gradient of a loss w.r.t. classifier parameters given its gradient w.r.t.
// the scores Predict produced. Multipliers of the result are empty.
ParameterStore BackpropScores(const ParameterStore& params,
                              const ConceptGraph& graph,
                              const DataNodeGraph& dng,
                              const DecisionIndex& index,
                              std::span<const double> scores,
                              std::span<const double> grad_scores);

struct PdLossFull {
  double loss = 0;
  ParameterStore grad_theta;
  std::map<std::string, double> grad_lambda;
};

PdLossFull PdLoss(const ParameterStore& params, const ConceptGraph& graph,
                  const DataNodeGraph& dng, const DecisionIndex& index,
                  const LabelVector& labels,
                  const std::vector<GroundedConstraint>& grounded);

// theta -= lr_theta * grad_theta; lambda = max(0, lambda + lr_lambda * g).
// Concepts or ids absent from a gradient are left unchanged.
ParameterStore PdStep(const ParameterStore& params,
                      const ParameterStore& grad_theta,
                      const std::map<std::string, double>& grad_lambda,
                      double lr_theta, double lr_lambda);

// p > 0.5 -> 1; ties go negative.
std::vector<std::uint8_t> Threshold(std::span<const double> scores);

struct Counts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;  // 0 when precision + recall == 0

  Counts& operator+=(const Counts& o);
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct Metrics {
  std::map<std::string, Counts> per_concept;
  Counts micro;

  Metrics& operator+=(const Metrics& o);
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Unlabeled variables are skipped.
Metrics Prf1(std::span<const std::uint8_t> predictions,
             const LabelVector& labels, const DecisionIndex& index);

nlohmann::json MetricsToJson(const Metrics& m);

}  // namespace declearn

#endif  // DECLEARN_TRAIN_H_
