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

#include <cmath>

#include <doctest.h>

#include "declearn/error.h"
#include "declearn/ground.h"
#include "declearn/lclang.h"
#include "declearn/train.h"
#include "support/fixtures.h"
#include "support/gen.h"
#include "support/gradcheck.h"
#include "support/params.h"

namespace declearn {
namespace {

struct Fixture {
  Document doc = Parse(testing::ReadData("emr_synth.dk"));
  DataNodeGraph data = LoadData(testing::kEmrSentence, doc.graph);
  DecisionIndex index{doc.graph, data};
  std::vector<GroundedConstraint> grounded =
      Ground(doc.constraints, doc.graph, data, index);
  LabelVector labels = CollectLabels(data, index);

  ParameterStore Random(testing::Gen& gen) const {
    ParameterStore p = InitParams(
        doc.graph, doc.constraints,
        FeatureDims(doc.graph, std::span<const DataNodeGraph>(&data, 1)), 0);
    std::vector<double> flat = testing::Flatten(p);
    for (double& v : flat) v = gen.Real(-1, 1);
    p = testing::Unflatten(p, flat);
    for (auto& [id, m] : p.multipliers) m = gen.Real(0, 2);
    return p;
  }
};

LabelVector RandomLabels(testing::Gen& gen, std::size_t n) {
  LabelVector y(n);
  for (int& v : y) v = gen.Coin(0.15) ? -1 : gen.Int(0, 1);
  return y;
}

TEST_SUITE("train") {
  TEST_CASE("parameter files round trip") {
    Fixture f;
    testing::Gen gen(61);
    const ParameterStore p = f.Random(gen);
    CHECK(ParamsFromJson(nlohmann::json::parse(ParamsToJson(p).dump())) == p);
    CHECK_THROWS_AS(
        ParamsFromJson(nlohmann::json::parse(R"({"multipliers": {"lc0": -1}})")),
        Error);
  }

  TEST_CASE("prediction") {
    Fixture f;
    ParameterStore zero = InitParams(
        f.doc.graph, f.doc.constraints,
        FeatureDims(f.doc.graph, std::span<const DataNodeGraph>(&f.data, 1)), 3,
        0.0);
    const ScoreVector s = Predict(zero, f.doc.graph, f.data, f.index);
    // 2 phrases x 3 entity types + 2 pairs x work_for.
    CHECK(s.size() == 8);
    for (double p : s) CHECK(p == 0.5);
    CHECK(zero.concepts.at("work_for").weights.size() == 6);

    DataNodeGraph bare = LoadData(
        R"({"nodes": [{"id": "p1", "concept": "phrase"}]})", f.doc.graph);
    try {
      Predict(zero, f.doc.graph, bare, DecisionIndex(f.doc.graph, bare));
      FAIL("expected DimMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDimMismatch);
    }
  }

  TEST_CASE("seeded initialization is reproducible") {
    Fixture f;
    auto dims = FeatureDims(f.doc.graph, std::span<const DataNodeGraph>(&f.data, 1));
    CHECK(InitParams(f.doc.graph, f.doc.constraints, dims, 5) ==
          InitParams(f.doc.graph, f.doc.constraints, dims, 5));
    CHECK_FALSE(InitParams(f.doc.graph, f.doc.constraints, dims, 5) ==
                InitParams(f.doc.graph, f.doc.constraints, dims, 6));
  }

  TEST_CASE("negative log-likelihood values") {
    CHECK(NllLoss(std::vector<double>{0.5}, {1}).loss ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const LossGrad exact = NllLoss(std::vector<double>{1.0, 0.0}, {1, 0});
    CHECK(exact.loss < 1e-6);
    CHECK(NllLoss(std::vector<double>{0.3, 0.9}, {-1, -1}).loss == 0.0);
  }

  TEST_CASE("masked loss identities") {
    testing::Gen gen(62);
    for (int t = 0; t < 50; ++t) {
      const int n = gen.Int(1, 10);
      std::vector<double> s(n);
      for (double& v : s) v = gen.Real(0.01, 0.99);
      LabelVector y(n);
      std::vector<std::uint8_t> fy(n);
      for (int i = 0; i < n; ++i) fy[i] = static_cast<std::uint8_t>(y[i] = gen.Int(0, 1));
      // Inference equal to the labels masks every term.
      CHECK(ImlLoss(s, y, fy, 1.0).loss == 0.0);
      // Empty inference keeps exactly the positive-label NLL terms.
      const std::vector<std::uint8_t> zeros(n, 0);
      LabelVector pos_only(y);
      for (int& v : pos_only) v = v == 1 ? 1 : -1;
      CHECK(ImlLoss(s, y, zeros, 1.0).loss ==
            doctest::Approx(NllLoss(s, pos_only).loss).epsilon(1e-14));
      const double lambda0 = ImlLoss(s, y, zeros, 0.0).loss;
      CHECK(std::fabs(lambda0 - NllLoss(s, y).loss) <= 1e-12);
    }
    CHECK_THROWS_AS(ImlLoss(std::vector<double>{0.5, 0.5}, {1, 1},
                            std::vector<std::uint8_t>{1}, 0.5),
                    Error);
  }

  TEST_CASE("primal-dual loss identities") {
    Fixture f;
    testing::Gen gen(63);
    ParameterStore p = f.Random(gen);
    const ScoreVector s = Predict(p, f.doc.graph, f.data, f.index);
    std::map<std::string, double> zero;
    for (auto& [id, m] : p.multipliers) zero[id] = 0.0;
    const PdLossResult r = PdLossScores(s, f.labels, f.grounded, zero);
    const LossGrad nll = NllLoss(s, f.labels);
    CHECK(r.loss == nll.loss);
    CHECK(r.grad == nll.grad);
    CHECK(r.grad_lambda.size() == 2);
    // Boolean scores satisfying every constraint contribute no penalty.
    const ScoreVector gold(f.labels.begin(), f.labels.end());
    const PdLossResult g = PdLossScores(gold, f.labels, f.grounded, p.multipliers);
    CHECK(g.loss == NllLoss(gold, f.labels).loss);
    for (const auto& [id, v] : g.grad_lambda) CHECK(v == 0.0);
  }

  TEST_CASE("primal-dual steps") {
    Fixture f;
    testing::Gen gen(64);
    const ParameterStore p = f.Random(gen);
    ParameterStore zero_grad;
    for (const auto& [name, lp] : p.concepts) {
      zero_grad.concepts[name].weights.assign(lp.weights.size(), 0.0);
    }
    CHECK(PdStep(p, zero_grad, {{"lc0", 0.0}, {"lc1", 0.0}}, 0.1, 0.1) == p);
    const ParameterStore q = PdStep(p, {}, {{"lc0", -100.0}}, 0.1, 1.0);
    CHECK(q.multipliers.at("lc0") == 0.0);
    CHECK(q.multipliers.at("lc1") == p.multipliers.at("lc1"));
    // Multipliers stay nonnegative under any step sequence.
    ParameterStore r = p;
    for (int i = 0; i < 200; ++i) {
      r = PdStep(r, {}, {{"lc0", gen.Real(-3, 1)}, {"lc1", gen.Real(-1, 3)}},
                 0.0, gen.Real(0, 2));
      for (const auto& [id, m] : r.multipliers) CHECK(m >= 0.0);
    }
    ParameterStore g = zero_grad;
    g.concepts["people"].bias = 2.0;
    CHECK(PdStep(p, g, {}, 0.5, 0.0).concepts.at("people").bias ==
          p.concepts.at("people").bias - 1.0);
  }

  TEST_CASE("gradients w.r.t. scores match finite differences") {
    testing::Gen gen(65);
    for (int t = 0; t < 100; ++t) {
      const int n = gen.Int(1, 8);
      std::vector<double> s(n);
      for (double& v : s) v = gen.Real(0.05, 0.95);
      const LabelVector y = RandomLabels(gen, n);
      std::vector<std::uint8_t> fstar(n);
      for (auto& v : fstar) v = gen.Coin();
      const double lambda = gen.Real(0, 1);
      auto nll = [&](const std::vector<double>& x) { return NllLoss(x, y).loss; };
      CHECK(testing::CheckGradient(nll, s, NllLoss(s, y).grad).worst <
            testing::kFdRelTol);
      auto iml = [&](const std::vector<double>& x) {
        return ImlLoss(x, y, fstar, lambda).loss;
      };
      CHECK(testing::CheckGradient(iml, s, ImlLoss(s, y, fstar, lambda).grad)
                .worst < testing::kFdRelTol);
    }
  }

  TEST_CASE("parameter gradients match finite differences") {
    Fixture f;
    testing::Gen gen(66);
    int smooth = 0;
    for (int t = 0; t < 150; ++t) {
      const ParameterStore p = f.Random(gen);
      const std::vector<double> x0 = testing::Flatten(p);
      auto loss_at = [&](const std::vector<double>& x) {
        const ParameterStore q = testing::Unflatten(p, x);
        return PdLoss(q, f.doc.graph, f.data, f.index, f.labels, f.grounded)
            .loss;
      };
      const PdLossFull full =
          PdLoss(p, f.doc.graph, f.data, f.index, f.labels, f.grounded);
      const auto fd =
          testing::CheckGradient(loss_at, x0, testing::Flatten(full.grad_theta));
      if (!fd.smooth) continue;
      ++smooth;
      CHECK(fd.worst < testing::kFdRelTol);
    }
    CHECK(smooth >= 100);
  }

  TEST_CASE("precision, recall and F1") {
    DecisionIndex idx;
    {
      Document d = Parse("concept a\nconcept yes : a\n");
      DataNodeGraph g = LoadData(
          R"({"nodes": [{"id": "n1", "concept": "a"}, {"id": "n2", "concept": "a"},
                        {"id": "n3", "concept": "a"}, {"id": "n4", "concept": "a"},
                        {"id": "n5", "concept": "a"}, {"id": "n6", "concept": "a"}]})",
          d.graph);
      idx = DecisionIndex(d.graph, g);
    }
    const LabelVector y = {1, 1, 1, 1, 0, 0};
    const std::vector<std::uint8_t> perfect = {1, 1, 1, 1, 0, 0};
    const Metrics m1 = Prf1(perfect, y, idx);
    CHECK(m1.micro.precision() == 1.0);
    CHECK(m1.micro.recall() == 1.0);
    CHECK(m1.micro.f1() == 1.0);
    const Metrics m0 = Prf1(std::vector<std::uint8_t>(6, 0), y, idx);
    CHECK(m0.micro.recall() == 0.0);
    CHECK(m0.micro.f1() == 0.0);
    // tp=2, fp=1, fn=2
    const Metrics m = Prf1(std::vector<std::uint8_t>{1, 1, 0, 0, 1, 0}, y, idx);
    CHECK(m.per_concept.at("yes") == Counts{2, 1, 2});
    CHECK(m.micro.precision() == doctest::Approx(2.0 / 3));
    CHECK(m.micro.recall() == doctest::Approx(0.5));
    CHECK(m.micro.f1() == doctest::Approx(4.0 / 7));
    Metrics sum = m;
    sum += m1;
    CHECK(sum.micro == Counts{6, 1, 2});
    CHECK(Threshold(std::vector<double>{0.5, 0.51, 0.2}) ==
          std::vector<std::uint8_t>{0, 1, 0});
  }
}

}  // namespace
}  // namespace declearn
