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

#include "declearn/synth.h"

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <fmt/format.h>

namespace declearn {
namespace {

constexpr std::array<const char*, 3> kTypes = {"people", "organization",
                                               "location"};
// Cumulative type frequencies; people and organization dominate so that
// work_for positives are common.
constexpr std::array<double, 3> kTypeCdf = {0.4, 0.8, 1.0};
constexpr double kSignal = 1.5;

// Distributions are hand-rolled so output is identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Gaussian() {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * M_PI * u2);
  }

  int Type() {
    const double u = Uniform();
    for (int t = 0; t < 3; ++t) {
      if (u < kTypeCdf[t]) return t;
    }
    return 2;
  }

  int Below(int n) { return static_cast<int>(Uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::string SynthEmrDsl() {
  return R"(# Synthetic entity/relation task.
concept sentence
concept phrase
concept pair
sentence contains phrase
pair has_a (arg1=phrase, arg2=phrase)

concept people : phrase
concept organization : phrase
concept location : phrase
concept work_for : pair

disjoint(people, organization, location)
ifL(work_for('x'), andL(people(path=('x', arg1)), organization(path=('x', arg2))))
)";
}

nlohmann::json SynthEmrData(const SynthOptions& options) {
  Rng rng(options.seed);
  nlohmann::json samples = nlohmann::json::array();
  for (int s = 0; s < options.samples; ++s) {
    nlohmann::json nodes = nlohmann::json::array();
    nlohmann::json contains = nlohmann::json::array();
    nlohmann::json has_a = nlohmann::json::array();
    nodes.push_back({{"id", "s"}, {"concept", "sentence"}});
    std::vector<int> label(options.phrases);
    for (int i = 0; i < options.phrases; ++i) {
      const int truth = rng.Type();
      std::vector<double> x(3, 0.0);
      x[truth] = kSignal;
      if (rng.Uniform() < options.ambiguous) {
        const int other = (truth + 1 + rng.Below(2)) % 3;
        x[truth] = kSignal / 2;
        x[other] = kSignal / 2;
      }
      for (double& v : x) v += options.feature_noise * rng.Gaussian();
      label[i] = truth;
      if (rng.Uniform() < options.label_noise) {
        label[i] = (truth + 1 + rng.Below(2)) % 3;
      }
      nlohmann::json labels = nlohmann::json::object();
      for (int t = 0; t < 3; ++t) labels[kTypes[t]] = label[i] == t ? 1 : 0;
      const std::string id = fmt::format("p{}", i);
      nodes.push_back({{"id", id},
                       {"concept", "phrase"},
                       {"features", x},
                       {"labels", labels}});
      contains.push_back({"s", id});
    }
    for (int i = 0; i < options.phrases; ++i) {
      for (int j = 0; j < options.phrases; ++j) {
        if (i == j) continue;
        const std::string id = fmt::format("r{}{}", i, j);
        const int works = label[i] == 0 && label[j] == 1;
        nodes.push_back({{"id", id},
                         {"concept", "pair"},
                         {"labels", {{"work_for", works}}}});
        has_a.push_back({id, "arg1", fmt::format("p{}", i)});
        has_a.push_back({id, "arg2", fmt::format("p{}", j)});
      }
    }
    samples.push_back(
        {{"nodes", nodes}, {"contains", contains}, {"has_a", has_a}});
  }
  return {{"samples", samples}};
}

}  // namespace declearn
