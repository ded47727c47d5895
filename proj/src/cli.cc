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

#include "declearn/cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "declearn/error.h"
#include "declearn/ilp_model.h"
#include "declearn/ilp_solve.h"
#include "declearn/lclang.h"
#include "declearn/program.h"

namespace declearn {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot read '{}'", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot write '{}'", path.string()));
  }
}

nlohmann::json ParseJson(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("{} is not valid JSON: {}", what, e.what()));
  }
}

std::string Dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::shared_ptr<const Document> LoadDomain(const fs::path& dsl) {
  return std::make_shared<const Document>(Parse(ReadFile(dsl)));
}

// Flags shared by the subcommands; unused ones stay at their defaults.
struct Options {
  std::string dsl;
  std::string data;
  std::string scores;
  bool uniform = false;
  std::string config;
  std::string emit_lp;
  std::string out;
  std::string params;
  std::string params_out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> strategy;
  std::optional<double> lambda;
  std::optional<double> lr;
  std::optional<double> lr_lambda;
  std::optional<int> epochs;
};

class Session {
 public:
  Session(const Options& opt, std::ostream& out, std::ostream& err)
      : opt_(opt), out_(out), err_(err) {}

  int Validate();
  int Compile();
  int Infer();
  int Train();
  int Eval();

 private:
  void Emit(const nlohmann::json& j) {
    const std::string text = Dump(j);
    out_ << text;
    if (!opt_.out.empty()) WriteFile(opt_.out, text);
  }

  std::vector<ScoreVector> LoadScores(const std::vector<Sample>& samples);

  struct Run {
    nlohmann::json config;
    fs::path base;
    std::shared_ptr<const Document> domain;
    ProgramSpec spec;
  };
  Run LoadRun();
  std::vector<Sample> LoadData(const Run& run, const std::string& key,
                               bool required);
  fs::path Resolve(const Run& run, const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : run.base / path;
  }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

int Session::Validate() {
  const std::string text = ReadFile(opt_.dsl);
  nlohmann::json issues = nlohmann::json::array();
  auto push = [&](std::string_view severity, std::string_view code,
                  const std::string& message, SourceLoc loc) {
    issues.push_back({{"severity", severity},
                      {"code", code},
                      {"message", message},
                      {"line", loc.line},
                      {"column", loc.column}});
    if (loc.line > 0) {
      err_ << fmt::format("{}:{}:{}: {}: {}: {}\n", opt_.dsl, loc.line,
                          loc.column, severity, code, message);
    } else {
      err_ << fmt::format("{}: {}: {}: {}\n", opt_.dsl, severity, code,
                          message);
    }
  };
  bool ok = true;
  std::size_t n_concepts = 0;
  std::size_t n_constraints = 0;
  try {
    Document doc = ParseSyntax(text);
    n_concepts = doc.graph.concepts().size();
    n_constraints = doc.constraints.constraints.size();
    if (n_concepts == 0) {
      push("error", "SchemaError", "no concepts declared", {});
      ok = false;
    }
    ValidationReport report = declearn::Validate(doc.graph);
    for (const Constraint& c : doc.constraints.constraints) {
      report.append(CheckWellFormed(c.expr, doc.graph));
    }
    for (const Issue& i : report.issues) {
      const bool error = i.severity == Severity::kError;
      push(error ? "error" : "warning", i.code, i.message, i.loc);
      ok = ok && !error;
    }
  } catch (const Error& e) {
    push("error", ErrorCodeName(e.code()), e.message(), e.loc());
    ok = false;
  }
  Emit({{"ok", ok},
        {"concepts", n_concepts},
        {"constraints", n_constraints},
        {"issues", issues}});
  return ok ? kExitOk : kExitUserError;
}

std::vector<ScoreVector> Session::LoadScores(
    const std::vector<Sample>& samples) {
  std::vector<ScoreVector> out;
  if (opt_.uniform) {
    for (const Sample& s : samples) out.emplace_back(s.index.size(), 0.5);
    return out;
  }
  if (opt_.scores.empty()) {
    throw Error(ErrorCode::kMissingScore, "pass --scores FILE or --uniform");
  }
  const nlohmann::json doc = ParseJson(ReadFile(opt_.scores), opt_.scores);
  if (doc.is_array()) {
    if (doc.size() != samples.size()) {
      throw Error(ErrorCode::kMissingScore,
                  fmt::format("{} score objects for {} samples", doc.size(),
                              samples.size()));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out.push_back(ScoresFromJson(doc[i], samples[i].index));
    }
  } else {
    for (const Sample& s : samples) out.push_back(ScoresFromJson(doc, s.index));
  }
  return out;
}

int Session::Compile() {
  auto domain = LoadDomain(opt_.dsl);
  std::vector<Sample> samples =
      PrepareSamples(*domain, LoadSamples(ReadFile(opt_.data), domain->graph));
  if (samples.size() != 1) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("compile takes exactly one sample, got {}",
                            samples.size()));
  }
  const std::vector<ScoreVector> scores = LoadScores(samples);
  const IlpModel model =
      declearn::Compile(samples[0].grounded, samples[0].index, scores[0]);
  if (!opt_.emit_lp.empty()) WriteFile(opt_.emit_lp, EmitLp(model));
  err_ << fmt::format("compiled {} variables ({} decision), {} rows\n",
                      model.num_vars(), model.num_decision,
                      model.constraints.size());
  Emit(ModelToJson(model));
  return kExitOk;
}

int Session::Infer() {
  auto domain = LoadDomain(opt_.dsl);
  std::vector<Sample> samples =
      PrepareSamples(*domain, LoadSamples(ReadFile(opt_.data), domain->graph));
  const std::vector<ScoreVector> scores = LoadScores(samples);
  std::vector<SolveResult> results(samples.size());
  std::vector<std::string> errors(samples.size());
  const int jobs = opt_.jobs.value_or(1);
  {
    // Samples are independent; each thread writes only its own slot.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < samples.size(); i = next++) {
        const IlpModel m = declearn::Compile(samples[i].grounded,
                                             samples[i].index, scores[i]);
        results[i] = Solve(m);
        results[i].assignment.values.resize(
            std::min<std::size_t>(results[i].assignment.values.size(),
                                  static_cast<std::size_t>(m.num_decision)));
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
  }
  int code = kExitOk;
  nlohmann::json out_samples = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    const SolveResult& r = results[i];
    nlohmann::json j = {{"status", SolveStatusName(r.status)}};
    if (r.status != SolveStatus::kOptimal) code = kExitInfeasible;
    if (!r.has_assignment()) {
      j["infeasible_hint"] = r.infeasible_hint;
      err_ << fmt::format("sample {}: infeasible (first conflict at {})\n", i,
                          r.infeasible_hint);
      out_samples.push_back(std::move(j));
      continue;
    }
    nlohmann::json assignment = nlohmann::json::object();
    for (const DecisionVar& v : s.index.vars()) {
      assignment[v.node_id][v.concept_name] = r.assignment.values[v.index];
    }
    nlohmann::json violations = nlohmann::json::array();
    for (const ViolationRecord& rec : Violations(s.grounded, r.assignment.values)) {
      nlohmann::json binding = nlohmann::json::object();
      for (const auto& [var, node] : rec.binding) binding[var] = node;
      violations.push_back(
          {{"constraint", rec.constraint_id}, {"binding", binding}});
    }
    j["objective"] = r.assignment.objective;
    j["assignment"] = std::move(assignment);
    j["violations"] = std::move(violations);
    out_samples.push_back(std::move(j));
  }
  Emit({{"samples", out_samples}});
  return code;
}

Session::Run Session::LoadRun() {
  if (opt_.config.empty()) {
    throw Error(ErrorCode::kConfigError, "pass --config FILE");
  }
  Run run;
  run.config = ParseJson(ReadFile(opt_.config), opt_.config);
  if (!run.config.is_object()) {
    throw Error(ErrorCode::kConfigError, "config must be a JSON object");
  }
  run.base = fs::path(opt_.config).parent_path();
  std::string dsl = opt_.dsl;
  if (dsl.empty()) {
    if (!run.config.contains("dsl")) {
      throw Error(ErrorCode::kConfigError, "config names no \"dsl\" file");
    }
    dsl = Resolve(run, run.config.at("dsl").get<std::string>()).string();
  }
  run.domain = LoadDomain(dsl);
  ProgramSpec spec = SpecFromJson(run.config, run.domain);
  if (opt_.seed) spec.seed = *opt_.seed;
  if (opt_.jobs) spec.jobs = *opt_.jobs;
  if (opt_.strategy) spec.strategy = ParseStrategy(*opt_.strategy);
  if (opt_.lambda) spec.lambda = *opt_.lambda;
  if (opt_.lr) spec.lr = *opt_.lr;
  if (opt_.lr_lambda) spec.lr_lambda = *opt_.lr_lambda;
  if (opt_.epochs) spec.epochs = *opt_.epochs;
  run.spec = spec;
  return run;
}

std::vector<Sample> Session::LoadData(const Run& run, const std::string& key,
                                      bool required) {
  if (!run.config.contains(key)) {
    if (required) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("config names no \"{}\" file", key));
    }
    return {};
  }
  const fs::path p = Resolve(run, run.config.at(key).get<std::string>());
  return PrepareSamples(*run.domain,
                        LoadSamples(ReadFile(p), run.domain->graph));
}

int Session::Train() {
  Run run = LoadRun();
  const std::vector<Sample> train = LoadData(run, "train", true);
  const std::vector<Sample> dev = LoadData(run, "dev", false);
  ParameterStore params;
  if (run.config.contains("params_in")) {
    params = ParamsFromJson(ParseJson(
        ReadFile(Resolve(run, run.config.at("params_in").get<std::string>())),
        "params_in"));
  }
  // A "stages" list runs one program per entry, each inheriting the
  // top-level settings it does not override.
  std::vector<Program> programs;
  if (run.config.contains("stages")) {
    for (const nlohmann::json& stage : run.config.at("stages")) {
      programs.emplace_back(SpecFromJson(stage, run.domain, run.spec));
    }
  } else {
    programs.emplace_back(run.spec);
  }
  err_ << fmt::format("training {} stage(s) on {} samples, strategy {}\n",
                      programs.size(), train.size(),
                      StrategyName(programs.front().spec().strategy));
  ComposeResult result =
      Compose(programs, std::move(params), train, dev.empty() ? nullptr : &dev);
  nlohmann::json stages = nlohmann::json::array();
  for (std::size_t s = 0; s < result.stages.size(); ++s) {
    for (const EpochReport& e : result.stages[s].epochs) {
      err_ << fmt::format("stage {} epoch {} loss {:.6f} violations {} "
                          "soft {:.6f} f1 {:.4f}\n",
                          s, e.epoch, e.loss, e.eval.violations,
                          e.eval.mean_soft_violation,
                          e.eval.metrics.micro.f1());
    }
    nlohmann::json j = TrainToJson(result.stages[s]);
    j["strategy"] = StrategyName(programs[s].spec().strategy);
    stages.push_back(std::move(j));
  }
  const nlohmann::json metrics = {{"stages", stages}};
  std::string params_out = opt_.params_out;
  if (params_out.empty() && run.config.contains("params_out")) {
    params_out =
        Resolve(run, run.config.at("params_out").get<std::string>()).string();
  }
  if (!params_out.empty()) {
    WriteFile(params_out, Dump(ParamsToJson(result.params)));
  }
  if (run.config.contains("metrics_out")) {
    WriteFile(Resolve(run, run.config.at("metrics_out").get<std::string>()),
              Dump(metrics));
  }
  Emit(metrics);
  return kExitOk;
}

int Session::Eval() {
  Run run = LoadRun();
  std::string params_path = opt_.params;
  if (params_path.empty()) {
    for (const char* key : {"params_in", "params_out"}) {
      if (run.config.contains(key)) {
        params_path =
            Resolve(run, run.config.at(key).get<std::string>()).string();
        break;
      }
    }
  }
  if (params_path.empty()) {
    throw Error(ErrorCode::kConfigError, "pass --params FILE");
  }
  const ParameterStore params =
      ParamsFromJson(ParseJson(ReadFile(params_path), params_path));
  std::vector<Sample> data = LoadData(run, "test", false);
  if (data.empty()) data = LoadData(run, "dev", false);
  if (data.empty()) data = LoadData(run, "train", true);
  const Program program(run.spec);
  const EvalReport report = program.Test(params, data);
  err_ << fmt::format("evaluated {} samples: f1 {:.4f}, {} violations\n",
                      data.size(), report.metrics.micro.f1(),
                      report.violations);
  nlohmann::json j = EvalToJson(report, true);
  j["strategy"] = StrategyName(run.spec.strategy);
  Emit(j);
  return kExitOk;
}

}  // namespace

ScoreVector ScoresFromJson(const nlohmann::json& doc,
                           const DecisionIndex& index) {
  ScoreVector out(index.size());
  for (const DecisionVar& v : index.vars()) {
    double p = NAN;
    if (doc.is_object() && doc.contains(v.node_id)) {
      const nlohmann::json& node = doc.at(v.node_id);
      if (node.is_object() && node.contains(v.concept_name) &&
          node.at(v.concept_name).is_number()) {
        p = node.at(v.concept_name).get<double>();
      }
    }
    if (!(p >= 0 && p <= 1)) {
      throw Error(ErrorCode::kMissingScore,
                  fmt::format("no score in [0, 1] for {}", DecisionVarName(v)));
    }
    out[v.index] = p;
  }
  return out;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Declarative constraints for structured prediction and "
               "training",
               "declearn"};
  app.require_subcommand(1);
  Options opt;

  auto* validate = app.add_subcommand("validate", "Check a .dk file");
  validate->add_option("--dsl", opt.dsl, "Graph and constraints")->required();

  auto* compile = app.add_subcommand("compile", "Compile one sample to ILP");
  auto* infer = app.add_subcommand("infer", "Constrained argmax per sample");
  for (CLI::App* sub : {compile, infer}) {
    sub->add_option("--dsl", opt.dsl, "Graph and constraints")->required();
    sub->add_option("--data", opt.data, "Instance JSON")->required();
    auto* scores = sub->add_option("--scores", opt.scores, "Scores JSON");
    auto* uniform =
        sub->add_flag("--uniform", opt.uniform, "Score every variable 0.5");
    scores->excludes(uniform);
  }
  compile->add_option("--emit-lp", opt.emit_lp, "Write the model in LP format");
  infer->add_option("--jobs", opt.jobs, "Parallel samples")
      ->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train from a config file");
  auto* eval = app.add_subcommand("eval", "Evaluate trained parameters");
  for (CLI::App* sub : {train, eval}) {
    sub->add_option("--config", opt.config, "Program config JSON")->required();
    sub->add_option("--dsl", opt.dsl, "Override the config's dsl file");
    sub->add_option("--seed", opt.seed, "Initialization seed");
    sub->add_option("--jobs", opt.jobs, "Parallel evaluation")
        ->check(CLI::PositiveNumber);
    sub->add_option("--strategy", opt.strategy,
                    "baseline, ilp, iml, pd or pd+ilp");
    sub->add_option("--lambda", opt.lambda, "IML blend weight");
    sub->add_option("--lr", opt.lr, "Parameter learning rate");
    sub->add_option("--lr-lambda", opt.lr_lambda, "Multiplier learning rate");
    sub->add_option("--epochs", opt.epochs, "Training epochs");
  }
  train->add_option("--params-out", opt.params_out, "Write parameters here");
  eval->add_option("--params", opt.params, "Parameter file");
  for (CLI::App* sub : {validate, compile, infer, train, eval}) {
    sub->add_option("--out", opt.out, "Also write the JSON result here");
  }

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  Session session(opt, out, err);
  try {
    if (*validate) return session.Validate();
    if (*compile) return session.Compile();
    if (*infer) return session.Infer();
    if (*train) return session.Train();
    if (*eval) return session.Eval();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUserError;
  } catch (const nlohmann::json::exception& e) {
    err << "ConfigError: " << e.what() << "\n";
    return kExitUserError;
  }
  return kExitUserError;
}

}  // namespace declearn
