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

#include <sstream>

#include <doctest.h>

#include "declearn/cli.h"
#include "declearn/ground.h"
#include "declearn/ilp_model.h"
#include "declearn/ilp_solve.h"
#include "declearn/lclang.h"
#include "declearn/synth.h"
#include "support/fixtures.h"

namespace declearn {
namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "declearn");
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string D(const char* name) { return testing::DataPath(name); }

// Synthetic train/test files plus a config in a fresh directory.
std::string WriteEmrRun(const std::string& strategy, int epochs) {
  const std::string dir = testing::MakeTempDir();
  SynthOptions opt;
  opt.samples = 80;
  opt.seed = 5;
  testing::WriteText(dir + "/task.dk", SynthEmrDsl());
  testing::WriteText(dir + "/train.json", SynthEmrData(opt).dump());
  opt.samples = 40;
  opt.seed = 6;
  opt.ambiguous = 0.2;
  testing::WriteText(dir + "/test.json", SynthEmrData(opt).dump());
  const nlohmann::json config = {
      {"dsl", "task.dk"},       {"train", "train.json"},
      {"test", "test.json"},    {"strategy", strategy},
      {"epochs", epochs},       {"lr", 0.05},
      {"lr_lambda", 1.0},       {"seed", 11},
      {"params_out", "out/params.json"},
      {"metrics_out", "out/metrics.json"}};
  testing::WriteText(dir + "/config.json", config.dump(2));
  return dir;
}

TEST_SUITE("cli") {
  TEST_CASE("validate") {
    CHECK(Cli({"validate", "--dsl", D("emr.dk")}).code == kExitOk);
    const Run bad = Cli({"validate", "--dsl", D("wiqa_unbalanced.dk")});
    CHECK(bad.code == kExitUserError);
    CHECK(bad.json()["issues"][0]["code"] == "SyntaxError");
    CHECK(bad.json()["issues"][0]["line"].get<int>() > 0);
    const std::string dir = testing::MakeTempDir();
    testing::WriteText(dir + "/empty.dk", "");
    const Run empty = Cli({"validate", "--dsl", dir + "/empty.dk"});
    CHECK(empty.code == kExitUserError);
    CHECK(empty.err.find("no concepts declared") != std::string::npos);
    CHECK(Cli({"validate", "--dsl", dir + "/missing.dk"}).code ==
          kExitUserError);
    CHECK(Cli({"frobnicate"}).code == kExitUserError);
  }

  TEST_CASE("compile") {
    const std::string dir = testing::MakeTempDir();
    const Run r = Cli({"compile", "--dsl", D("work_for.dk"), "--data",
                       D("work_for_pair.json"), "--scores",
                       D("work_for_pair.scores.json"), "--emit-lp",
                       dir + "/m.lp"});
    REQUIRE(r.code == kExitOk);
    CHECK(testing::ReadText(dir + "/m.lp") ==
          testing::ReadData("work_for_pair.lp"));

    const Run u = Cli({"compile", "--dsl", D("work_for.dk"), "--data",
                       D("work_for_pair.json"), "--uniform"});
    REQUIRE(u.code == kExitOk);
    for (const auto& v : u.json()["vars"]) {
      CHECK(v["objective"].get<double>() == 0.0);
    }

    testing::WriteText(dir + "/partial.json",
                       R"({"p1": {"people": 0.2, "organization": 0.1}})");
    const Run m = Cli({"compile", "--dsl", D("work_for.dk"), "--data",
                       D("work_for_pair.json"), "--scores",
                       dir + "/partial.json"});
    CHECK(m.code == kExitUserError);
    CHECK(m.err.find("MissingScore") != std::string::npos);
  }

  TEST_CASE("infer on the fire-station ring") {
    const Run r = Cli({"infer", "--dsl", D("firestation.dk"), "--data",
                       D("firestation.json"), "--scores",
                       D("firestation.scores.json")});
    REQUIRE(r.code == kExitOk);
    const nlohmann::json s = r.json()["samples"][0];
    CHECK(s["violations"].empty());
    // Compare with exhaustive search over the same model.
    Document d = Parse(testing::ReadData("firestation.dk"));
    DataNodeGraph g = LoadData(testing::ReadData("firestation.json"), d.graph);
    DecisionIndex idx(d.graph, g);
    const IlpModel m = Compile(Ground(d.constraints, d.graph, g, idx), idx,
                               ScoreVector(idx.size(), 0.3));
    const SolveResult best = BruteForce(m);
    for (const DecisionVar& v : idx.vars()) {
      CHECK(s["assignment"][v.node_id][v.concept_name].get<int>() ==
            best.assignment.values[v.index]);
    }
    CHECK(s["objective"].get<double>() ==
          doctest::Approx(best.assignment.objective).epsilon(1e-12));
  }

  TEST_CASE("infer without constraints and with contradictions") {
    const std::string dir = testing::MakeTempDir();
    testing::WriteText(dir + "/free.dk",
                       "concept item\nconcept good : item\n");
    testing::WriteText(dir + "/items.json",
                       R"({"nodes": [{"id": "a", "concept": "item"},
                                     {"id": "b", "concept": "item"}]})");
    testing::WriteText(dir + "/scores.json",
                       R"({"a": {"good": 0.7}, "b": {"good": 0.2}})");
    const Run free = Cli({"infer", "--dsl", dir + "/free.dk", "--data",
                          dir + "/items.json", "--scores",
                          dir + "/scores.json"});
    REQUIRE(free.code == kExitOk);
    CHECK(free.json()["samples"][0]["assignment"]["a"]["good"] == 1);
    CHECK(free.json()["samples"][0]["assignment"]["b"]["good"] == 0);

    testing::WriteText(dir + "/contra.dk",
                       "concept item\nconcept good : item\n"
                       "good('x')\nnotL(good('x'))\n");
    const Run contra = Cli({"infer", "--dsl", dir + "/contra.dk", "--data",
                            dir + "/items.json", "--uniform"});
    CHECK(contra.code == kExitInfeasible);
    CHECK(contra.json()["samples"][0]["status"] == "infeasible");
  }

  TEST_CASE("train and eval on the synthetic task") {
    const std::string dir = WriteEmrRun("baseline", 5);
    const Run t = Cli({"train", "--config", dir + "/config.json"});
    REQUIRE(t.code == kExitOk);
    CHECK(t.json()["stages"][0]["epochs"].size() == 6);
    const std::string params = dir + "/out/params.json";
    const Run ilp = Cli({"eval", "--config", dir + "/config.json",
                         "--params", params, "--strategy", "ilp", "--jobs", "2"});
    const Run base = Cli({"eval", "--config", dir + "/config.json",
                          "--params", params, "--strategy", "baseline"});
    REQUIRE(ilp.code == kExitOk);
    REQUIRE(base.code == kExitOk);
    for (const auto& s : ilp.json()["samples"]) CHECK(s["violations"].empty());
    const int base_violations = base.json()["violations"].get<int>();
    CHECK(ilp.json()["violations"].get<int>() == 0);
    if (base_violations > 0) CHECK(ilp.json()["violations"].get<int>() < base_violations);
    CHECK(ilp.json()["metrics"]["micro"]["f1"].get<double>() >=
          base.json()["metrics"]["micro"]["f1"].get<double>() - 0.02);
  }

  TEST_CASE("iml with inference equal to the labels has zero loss") {
    const std::string dir = testing::MakeTempDir();
    // The constraint forces every item positive, and every label is 1.
    testing::WriteText(dir + "/all.dk",
                       "concept item\nconcept good : item\ngood('x')\n");
    nlohmann::json nodes = nlohmann::json::array();
    for (int i = 0; i < 6; ++i) {
      nodes.push_back({{"id", "i" + std::to_string(i)},
                       {"concept", "item"},
                       {"features", {i * 0.5 - 1.0, 1.0}},
                       {"labels", {{"good", 1}}}});
    }
    testing::WriteText(dir + "/data.json", nlohmann::json{{"nodes", nodes}}.dump());
    testing::WriteText(dir + "/config.json",
                       R"({"dsl": "all.dk", "train": "data.json",
                           "strategy": "iml", "lambda": 1.0, "epochs": 4,
                           "lr": 0.1})");
    const Run r = Cli({"train", "--config", dir + "/config.json"});
    REQUIRE(r.code == kExitOk);
    for (const auto& e : r.json()["stages"][0]["epochs"]) {
      CHECK(e["loss"].get<double>() == 0.0);
    }
  }

  TEST_CASE("flags override the config and runs are byte-identical") {
    const std::string dir = WriteEmrRun("pd", 3);
    const std::string cfg = dir + "/config.json";
    REQUIRE(Cli({"train", "--config", cfg, "--epochs", "2", "--seed", "4",
                 "--params-out", dir + "/a.json"}).code == kExitOk);
    const std::string m1 = testing::ReadText(dir + "/out/metrics.json");
    REQUIRE(Cli({"train", "--config", cfg, "--epochs", "2", "--seed", "4",
                 "--params-out", dir + "/b.json"}).code == kExitOk);
    CHECK(testing::ReadText(dir + "/a.json") == testing::ReadText(dir + "/b.json"));
    CHECK(testing::ReadText(dir + "/out/metrics.json") == m1);
    CHECK(nlohmann::json::parse(m1)["stages"][0]["epochs"].size() == 3);
    const Run bad = Cli({"train", "--config", cfg, "--strategy", "magic"});
    CHECK(bad.code == kExitUserError);
    CHECK(bad.err.find("ConfigError") != std::string::npos);
  }
}

}  // namespace
}  // namespace declearn
