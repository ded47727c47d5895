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

// Programs bind a domain (graph + constraints) to a training strategy and a
// set of points of interest, and run train/test over prepared samples.

#ifndef DECLEARN_PROGRAM_H_
#define DECLEARN_PROGRAM_H_

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "declearn/ground.h"
#include "declearn/ilp_solve.h"
#include "declearn/lclang.h"
#include "declearn/train.h"

namespace declearn {

enum class Strategy { kBaseline, kIlp, kIml, kPd, kPdIlp };

std::string_view StrategyName(Strategy s);
// Throws ConfigError.
Strategy ParseStrategy(std::string_view name);

// Strategies whose test-time predictions go through the ILP solver.
bool UsesIlpAtTest(Strategy s);

struct ProgramSpec {
  std::shared_ptr<const Document> domain;
  // Concepts whose decision descendants are trained; empty trains all.
  std::set<std::string> poi;
  Strategy strategy = Strategy::kBaseline;
  double lambda = 0.5;  // IML blend weight
  double lr = 0.001;
  double lr_lambda = 0.01;
  int epochs = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  SolverConfig solver;
};

// Reads ProgramSpec fields from a config object; unknown keys are ignored.
// Throws ConfigError.
ProgramSpec SpecFromJson(const nlohmann::json& doc,
                         std::shared_ptr<const Document> domain,
                         ProgramSpec base = {});

// One instance graph with everything training and inference need.
struct Sample {
  DataNodeGraph data;
  DecisionIndex index;
  std::vector<GroundedConstraint> grounded;
  LabelVector labels;
};

std::vector<Sample> PrepareSamples(const Document& domain,
                                   std::vector<DataNodeGraph> graphs);

struct SampleReport {
  std::vector<std::uint8_t> prediction;
  std::vector<ViolationRecord> violations;
  double soft_violation = 0;  // summed over grounded constraints
  int grounded = 0;
  SolveStatus status = SolveStatus::kOptimal;  // meaningful with ILP only
};

struct EvalReport {
  Metrics metrics;
  std::vector<SampleReport> samples;
  std::int64_t violations = 0;
  // Soft violation averaged over every grounded constraint of every sample.
  double mean_soft_violation = 0;
};

struct EpochReport {
  int epoch = 0;
  double loss = 0;  // mean per-sample training loss
  EvalReport eval;
};

struct TrainResult {
  ParameterStore params;
  std::vector<EpochReport> epochs;  // [0] describes the starting point
};

class Program {
 public:
  // Throws ConfigError on an invalid spec.
  explicit Program(ProgramSpec spec);

  const ProgramSpec& spec() const { return spec_; }

  // Whether classifier parameters of `concept_name` may change.
  bool trainable(const std::string& concept_name) const;

  // Classifiers missing from `params` are created from the seed with
  // dimensions read off `train`. Throws MissingLabels, ConfigError,
  // DimMismatch.
  TrainResult Train(ParameterStore params, const std::vector<Sample>& train,
                    const std::vector<Sample>* dev = nullptr) const;

  EvalReport Test(const ParameterStore& params,
                  const std::vector<Sample>& data) const;

 private:
  ParameterStore Complete(ParameterStore params,
                          const std::vector<Sample>& train) const;
  double SampleLoss(const ParameterStore& params, const Sample& s,
                    std::vector<double>* grad_scores,
                    std::map<std::string, double>* grad_lambda,
                    ScoreVector* scores_out) const;

  ProgramSpec spec_;
};

struct ComposeResult {
  ParameterStore params;
  std::vector<TrainResult> stages;
};

// Trains each program in turn, threading parameters through. Throws
// GraphMismatch when the programs do not share one graph.
ComposeResult Compose(const std::vector<Program>& programs,
                      ParameterStore params, const std::vector<Sample>& train,
                      const std::vector<Sample>* dev = nullptr);

nlohmann::json EvalToJson(const EvalReport& report, bool per_sample);
nlohmann::json TrainToJson(const TrainResult& result);

}  // namespace declearn

#endif  // DECLEARN_PROGRAM_H_
