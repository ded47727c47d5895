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

#include "declearn/program.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>

#include <fmt/format.h>

#include "declearn/error.h"
#include "declearn/ilp_model.h"
#include "declearn/softlogic.h"

namespace declearn {
namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Each index writes
// only its own output slot, so results do not depend on scheduling.
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Inference {
  std::vector<std::uint8_t> values;
  SolveStatus status = SolveStatus::kOptimal;
};

// Constrained argmax; an infeasible model falls back to thresholding so a
// training or evaluation loop never stops on one bad sample.
Inference InferIlp(const Sample& s, const ScoreVector& scores,
                   const SolverConfig& config) {
  const IlpModel model = Compile(s.grounded, s.index, scores);
  SolveResult r = Solve(model, config);
  if (!r.has_assignment()) {
    return {Threshold(scores), SolveStatus::kInfeasible};
  }
  r.assignment.values.resize(static_cast<std::size_t>(model.num_decision));
  return {std::move(r.assignment.values), r.status};
}

bool CheckFinite(double v) { return std::isfinite(v); }

}  // namespace

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kBaseline: return "baseline";
    case Strategy::kIlp: return "ilp";
    case Strategy::kIml: return "iml";
    case Strategy::kPd: return "pd";
    case Strategy::kPdIlp: return "pd+ilp";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kBaseline, Strategy::kIlp, Strategy::kIml,
                     Strategy::kPd, Strategy::kPdIlp}) {
    if (StrategyName(s) == name) return s;
  }
  throw Error(ErrorCode::kConfigError,
              fmt::format("unknown strategy '{}' (expected baseline, ilp, "
                          "iml, pd or pd+ilp)",
                          name));
}

bool UsesIlpAtTest(Strategy s) {
  return s == Strategy::kIlp || s == Strategy::kPdIlp;
}

ProgramSpec SpecFromJson(const nlohmann::json& doc,
                         std::shared_ptr<const Document> domain,
                         ProgramSpec base) {
  ProgramSpec spec = std::move(base);
  spec.domain = std::move(domain);
  if (!doc.is_object()) {
    throw Error(ErrorCode::kConfigError, "program config must be an object");
  }
  try {
    if (doc.contains("poi")) {
      spec.poi.clear();
      for (const auto& c : doc.at("poi")) spec.poi.insert(c.get<std::string>());
    }
    if (doc.contains("strategy")) {
      spec.strategy = ParseStrategy(doc.at("strategy").get<std::string>());
    }
    spec.lambda = doc.value("lambda", spec.lambda);
    spec.lr = doc.value("lr", spec.lr);
    spec.lr_lambda = doc.value("lr_lambda", spec.lr_lambda);
    spec.epochs = doc.value("epochs", spec.epochs);
    spec.seed = doc.value("seed", spec.seed);
    spec.jobs = doc.value("jobs", spec.jobs);
    spec.solver.node_limit = doc.value("node_limit", spec.solver.node_limit);
    spec.solver.time_limit_seconds =
        doc.value("time_limit", spec.solver.time_limit_seconds);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("malformed program config: {}", e.what()));
  }
  return spec;
}

std::vector<Sample> PrepareSamples(const Document& domain,
                                   std::vector<DataNodeGraph> graphs) {
  std::vector<Sample> out;
  out.reserve(graphs.size());
  for (DataNodeGraph& g : graphs) {
    Sample s;
    s.data = std::move(g);
    s.index = DecisionIndex(domain.graph, s.data);
    s.grounded = Ground(domain.constraints, domain.graph, s.data, s.index);
    s.labels = CollectLabels(s.data, s.index);
    out.push_back(std::move(s));
  }
  return out;
}

Program::Program(ProgramSpec spec) : spec_(std::move(spec)) {
  auto bad = [](const std::string& msg) {
    return Error(ErrorCode::kConfigError, msg);
  };
  if (!spec_.domain) throw bad("program has no domain");
  for (const std::string& c : spec_.poi) {
    if (!spec_.domain->graph.has_concept(c)) {
      throw bad(fmt::format("point of interest '{}' is not a declared concept",
                            c));
    }
  }
  if (spec_.epochs < 0) throw bad("epochs must be >= 0");
  if (!CheckFinite(spec_.lr) || spec_.lr <= 0) throw bad("lr must be > 0");
  if (!CheckFinite(spec_.lr_lambda) || spec_.lr_lambda < 0) {
    throw bad("lr_lambda must be >= 0");
  }
  if (!(spec_.lambda >= 0 && spec_.lambda <= 1)) {
    throw bad("lambda must lie in [0, 1]");
  }
  if (spec_.jobs < 1) throw bad("jobs must be >= 1");
}

bool Program::trainable(const std::string& concept_name) const {
  if (spec_.poi.empty()) return true;
  if (spec_.poi.count(concept_name)) return true;
  for (const std::string& a : spec_.domain->graph.ancestors(concept_name)) {
    if (spec_.poi.count(a)) return true;
  }
  return false;
}

ParameterStore Program::Complete(ParameterStore params,
                                 const std::vector<Sample>& train) const {
  const Document& d = *spec_.domain;
  std::vector<DataNodeGraph> graphs;
  bool missing = false;
  for (const std::string& c : d.graph.decision_concepts()) {
    missing = missing || !params.concepts.count(c);
  }
  if (missing) {
    for (const Sample& s : train) graphs.push_back(s.data);
    ParameterStore fresh = InitParams(d.graph, d.constraints,
                                      FeatureDims(d.graph, graphs), spec_.seed);
    for (auto& [name, lp] : fresh.concepts) {
      params.concepts.try_emplace(name, std::move(lp));
    }
  }
  for (const Constraint& c : d.constraints.constraints) {
    params.multipliers.try_emplace(c.id, 0.0);
  }
  return params;
}

double Program::SampleLoss(const ParameterStore& params, const Sample& s,
                           std::vector<double>* grad_scores,
                           std::map<std::string, double>* grad_lambda,
                           ScoreVector* scores_out) const {
  const Document& d = *spec_.domain;
  ScoreVector scores = Predict(params, d.graph, s.data, s.index);
  double loss = 0;
  std::vector<double> grad;
  switch (spec_.strategy) {
    case Strategy::kBaseline:
    case Strategy::kIlp: {
      LossGrad r = NllLoss(scores, s.labels);
      loss = r.loss;
      grad = std::move(r.grad);
      break;
    }
    case Strategy::kIml: {
      const Inference f = InferIlp(s, scores, spec_.solver);
      LossGrad r = ImlLoss(scores, s.labels, f.values, spec_.lambda);
      loss = r.loss;
      grad = std::move(r.grad);
      break;
    }
    case Strategy::kPd:
    case Strategy::kPdIlp: {
      PdLossResult r =
          PdLossScores(scores, s.labels, s.grounded, params.multipliers);
      loss = r.loss;
      grad = std::move(r.grad);
      if (grad_lambda) {
        for (const auto& [id, g] : r.grad_lambda) (*grad_lambda)[id] += g;
      }
      break;
    }
  }
  if (grad_scores) {
    std::vector<double> masked(grad.size(), 0.0);
    for (const DecisionVar& v : s.index.vars()) {
      if (trainable(v.concept_name)) masked[v.index] = grad[v.index];
    }
    *grad_scores = std::move(masked);
  }
  if (scores_out) *scores_out = std::move(scores);
  return loss;
}

TrainResult Program::Train(ParameterStore params,
                           const std::vector<Sample>& train,
                           const std::vector<Sample>* dev) const {
  const Document& d = *spec_.domain;
  for (const Sample& s : train) {
    for (const DecisionVar& v : s.index.vars()) {
      if (trainable(v.concept_name) && s.labels[v.index] < 0) {
        throw Error(ErrorCode::kMissingLabels,
                    fmt::format("node '{}' has no label for trained concept "
                                "'{}'",
                                v.node_id, v.concept_name));
      }
    }
  }
  TrainResult result;
  result.params = Complete(std::move(params), train);
  ParameterStore& p = result.params;
  const std::vector<Sample>& eval_data = dev ? *dev : train;
  const bool primal_dual =
      spec_.strategy == Strategy::kPd || spec_.strategy == Strategy::kPdIlp;
  const double n = static_cast<double>(std::max<std::size_t>(train.size(), 1));

  {
    double loss = 0;
    for (const Sample& s : train) loss += SampleLoss(p, s, nullptr, nullptr, nullptr);
    result.epochs.push_back({0, loss / n, Test(p, eval_data)});
  }
  for (int epoch = 1; epoch <= spec_.epochs; ++epoch) {
    double loss = 0;
    std::map<std::string, double> grad_lambda;
    std::vector<double> grad_scores;
    ScoreVector scores;
    for (const Sample& s : train) {
      loss += SampleLoss(p, s, &grad_scores, &grad_lambda, &scores);
      ParameterStore g =
          BackpropScores(p, d.graph, s.data, s.index, scores, grad_scores);
      std::erase_if(g.concepts,
                    [&](const auto& kv) { return !trainable(kv.first); });
      p = PdStep(p, g, {}, spec_.lr, 0.0);
    }
    if (primal_dual) {
      for (auto& [id, g] : grad_lambda) g /= n;
      p = PdStep(p, {}, grad_lambda, 0.0, spec_.lr_lambda);
    }
    result.epochs.push_back({epoch, loss / n, Test(p, eval_data)});
  }
  return result;
}

EvalReport Program::Test(const ParameterStore& params,
                         const std::vector<Sample>& data) const {
  const Document& d = *spec_.domain;
  EvalReport report;
  report.samples.resize(data.size());
  std::vector<Metrics> metrics(data.size());
  ParallelFor(data.size(), spec_.jobs, [&](std::size_t i) {
    const Sample& s = data[i];
    SampleReport& r = report.samples[i];
    const ScoreVector scores = Predict(params, d.graph, s.data, s.index);
    if (UsesIlpAtTest(spec_.strategy)) {
      Inference f = InferIlp(s, scores, spec_.solver);
      r.prediction = std::move(f.values);
      r.status = f.status;
    } else {
      r.prediction = Threshold(scores);
    }
    r.violations = Violations(s.grounded, r.prediction);
    for (const GroundedConstraint& g : s.grounded) {
      r.soft_violation += SoftViolation(g.expr, scores);
    }
    r.grounded = static_cast<int>(s.grounded.size());
    metrics[i] = Prf1(r.prediction, s.labels, s.index);
  });
  double soft = 0;
  std::int64_t grounded = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    report.metrics += metrics[i];
    report.violations +=
        static_cast<std::int64_t>(report.samples[i].violations.size());
    soft += report.samples[i].soft_violation;
    grounded += report.samples[i].grounded;
  }
  report.mean_soft_violation =
      grounded == 0 ? 0.0 : soft / static_cast<double>(grounded);
  return report;
}

ComposeResult Compose(const std::vector<Program>& programs,
                      ParameterStore params, const std::vector<Sample>& train,
                      const std::vector<Sample>* dev) {
  for (std::size_t i = 1; i < programs.size(); ++i) {
    const auto& a = programs.front().spec().domain;
    const auto& b = programs[i].spec().domain;
    if (a != b && !(a->graph == b->graph)) {
      throw Error(ErrorCode::kGraphMismatch,
                  fmt::format("program {} uses a different graph than "
                              "program 0",
                              i));
    }
  }
  ComposeResult out;
  out.params = std::move(params);
  for (const Program& prog : programs) {
    TrainResult r = prog.Train(std::move(out.params), train, dev);
    out.params = r.params;
    out.stages.push_back(std::move(r));
  }
  return out;
}

nlohmann::json EvalToJson(const EvalReport& report, bool per_sample) {
  nlohmann::json j = {{"metrics", MetricsToJson(report.metrics)},
                      {"violations", report.violations},
                      {"mean_soft_violation", report.mean_soft_violation}};
  if (per_sample) {
    nlohmann::json samples = nlohmann::json::array();
    for (const SampleReport& s : report.samples) {
      nlohmann::json v = nlohmann::json::array();
      for (const ViolationRecord& rec : s.violations) {
        nlohmann::json binding = nlohmann::json::object();
        for (const auto& [var, node] : rec.binding) binding[var] = node;
        v.push_back({{"constraint", rec.constraint_id}, {"binding", binding}});
      }
      samples.push_back({{"violations", v},
                         {"soft_violation", s.soft_violation},
                         {"status", SolveStatusName(s.status)}});
    }
    j["samples"] = std::move(samples);
  }
  return j;
}

nlohmann::json TrainToJson(const TrainResult& result) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochReport& e : result.epochs) {
    nlohmann::json j = EvalToJson(e.eval, false);
    j["epoch"] = e.epoch;
    j["loss"] = e.loss;
    epochs.push_back(std::move(j));
  }
  return {{"epochs", epochs}};
}

}  // namespace declearn
