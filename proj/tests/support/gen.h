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

// Seeded random generators shared by the property tests and the acceptance
// runner.

#ifndef DECLEARN_TESTS_SUPPORT_GEN_H_
#define DECLEARN_TESTS_SUPPORT_GEN_H_

#include <cstdint>
#include <random>
#include <vector>

#include "declearn/ground.h"
#include "declearn/ilp_model.h"

namespace declearn::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int Int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double Real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool Coin(double p = 0.5) { return Real(0, 1) < p; }

  // Expression over variables [0, num_vars) with at most `max_atoms` atom
  // occurrences. Nodes are built directly, not through the collapsing
  // factories, so every connective shape appears.
  GExpr Expr(int num_vars, int max_atoms) {
    int budget = max_atoms;
    return Node(num_vars, budget, 0);
  }

  // Scores in (0, 1); with `ties` they come from a small grid so that equal
  // objective coefficients are common.
  std::vector<double> Scores(int n, bool ties) {
    static constexpr double kGrid[] = {0.2, 0.5, 0.5, 0.8, 0.9};
    std::vector<double> out(n);
    for (double& p : out) p = ties ? kGrid[Int(0, 4)] : Real(0.02, 0.98);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  GExpr Node(int num_vars, int& budget, int depth) {
    if (budget <= 1 || depth >= 3 || Coin(0.3)) {
      --budget;
      if (Coin(0.05)) return GExpr{GKind::kConst, -1, Coin(), 0, {}};
      return GExpr{GKind::kVar, Int(0, num_vars - 1), false, 0, {}};
    }
    switch (Int(0, 4)) {
      case 0: {
        GExpr c = Node(num_vars, budget, depth + 1);
        return GExpr{GKind::kNot, -1, false, 0, {std::move(c)}};
      }
      case 1:
      case 2: {
        const GKind kind = Coin() ? GKind::kAnd : GKind::kOr;
        GExpr e{kind, -1, false, 0, {}};
        const int n = Int(2, 3);
        for (int i = 0; i < n && budget > 0; ++i) {
          e.children.push_back(Node(num_vars, budget, depth + 1));
        }
        if (e.children.size() < 2) return e.children.front();
        return e;
      }
      case 3: {
        GExpr a = Node(num_vars, budget, depth + 1);
        if (budget <= 0) return a;
        GExpr b = Node(num_vars, budget, depth + 1);
        return GExpr{GKind::kIf, -1, false, 0, {std::move(a), std::move(b)}};
      }
      default: {
        GExpr e{GKind::kAtMost, -1, false, 0, {}};
        const int n = Int(2, 4);
        for (int i = 0; i < n && budget > 0; ++i) {
          e.children.push_back(Node(num_vars, budget, depth + 1));
        }
        e.k = Int(1, static_cast<int>(e.children.size()));
        return e;
      }
    }
  }

  std::mt19937_64 rng_;
};

inline int CountAtoms(const GExpr& e) {
  if (e.kind == GKind::kVar) return 1;
  int n = 0;
  for (const GExpr& c : e.children) n += CountAtoms(c);
  return n;
}

// Reference optimum by plain enumeration: best objective, ties broken toward
// the lexicographically smallest assignment (variable 0 most significant).
struct NaiveOptimum {
  bool feasible = false;
  double objective = 0;
  std::vector<std::uint8_t> values;
};

inline NaiveOptimum EnumerateOptimum(const IlpModel& model, double tol) {
  const int n = model.num_vars();
  NaiveOptimum best;
  std::vector<std::uint8_t> x(n);
  std::vector<std::pair<double, std::vector<std::uint8_t>>> feasible;
  double max_obj = -1e300;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (int i = 0; i < n; ++i) x[i] = (m >> (n - 1 - i)) & 1;
    if (!IsFeasible(model, x)) continue;
    const double obj = ObjectiveValue(model, x);
    feasible.emplace_back(obj, x);
    max_obj = std::max(max_obj, obj);
  }
  // `m` counts up in lexicographic order, so the first near-max wins.
  for (const auto& [obj, vals] : feasible) {
    if (obj >= max_obj - tol) {
      best = {true, obj, vals};
      break;
    }
  }
  return best;
}

// Whether some setting of the auxiliary variables (index >= num_decision)
// satisfies every row once the decision variables are fixed.
inline bool HasCompletion(const IlpModel& model,
                          const std::vector<std::uint8_t>& decision) {
  const int aux = model.num_vars() - model.num_decision;
  std::vector<std::uint8_t> x(decision);
  x.resize(model.num_vars());
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << aux); ++m) {
    for (int i = 0; i < aux; ++i) x[model.num_decision + i] = (m >> i) & 1;
    if (IsFeasible(model, x)) return true;
  }
  return false;
}

inline std::vector<std::uint8_t> Bits(std::uint64_t mask, int n) {
  std::vector<std::uint8_t> out(n);
  for (int i = 0; i < n; ++i) out[i] = (mask >> i) & 1;
  return out;
}

}  // namespace declearn::testing

#endif  // DECLEARN_TESTS_SUPPORT_GEN_H_
