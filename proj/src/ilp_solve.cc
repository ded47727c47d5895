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

#include "declearn/ilp_solve.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace declearn {

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kLimitFeasible: return "limit_feasible";
    case SolveStatus::kLimitUnverified: return "limit_unverified";
  }
  return "?";
}

namespace {

constexpr double kFeasEps = 1e-9;

// Row in `sum(terms) <= rhs` form; `source` indexes model.constraints.
struct LeRow {
  std::vector<Term> terms;
  double rhs = 0;
  int source = 0;
};

std::vector<LeRow> ToLeRows(const IlpModel& model) {
  std::vector<LeRow> rows;
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const LinearConstraint& c = model.constraints[i];
    const int src = static_cast<int>(i);
    if (c.rel != Relation::kGe) rows.push_back({c.terms, c.rhs, src});
    if (c.rel != Relation::kLe) {
      LeRow neg{c.terms, -c.rhs, src};
      for (Term& t : neg.terms) t.coeff = -t.coeff;
      rows.push_back(std::move(neg));
    }
  }
  return rows;
}

std::vector<std::vector<std::pair<int, double>>> Columns(
    const std::vector<LeRow>& rows, int num_vars) {
  std::vector<std::vector<std::pair<int, double>>> cols(num_vars);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const Term& t : rows[r].terms) {
      cols[t.var].emplace_back(static_cast<int>(r), t.coeff);
    }
  }
  return cols;
}

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, const SolverConfig& config)
      : model_(model),
        config_(config),
        n_(model.num_vars()),
        rows_(ToLeRows(model)),
        cols_(Columns(rows_, n_)),
        value_(n_, -1),
        min_act_(rows_.size(), 0.0),
        queued_(rows_.size(), 0),
        start_(std::chrono::steady_clock::now()) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const Term& t : rows_[r].terms) min_act_[r] += std::min(0.0, t.coeff);
    }
    for (int v = 0; v < n_; ++v) free_pos_ += std::max(0.0, model.objective[v]);
    order_.resize(n_);
    for (int v = 0; v < n_; ++v) order_[v] = v;
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return std::fabs(model.objective[a]) > std::fabs(model.objective[b]);
    });
  }

  SolveResult Run() {
    SolveResult result;
    for (std::size_t r = 0; r < rows_.size(); ++r) Enqueue(static_cast<int>(r));
    if (!Propagate()) {
      result.status = SolveStatus::kInfeasible;
      result.infeasible_hint = hint_;
      result.nodes = nodes_;
      return result;
    }
    const std::size_t root_mark = trail_.size();
    const auto root_obj = std::make_pair(fixed_obj_, free_pos_);
    Optimize();
    if (!has_best_) {
      result.nodes = nodes_;
      if (limit_hit_) {
        result.status = SolveStatus::kLimitUnverified;
        result.assignment.values.assign(n_, 0);
        for (int v = 0; v < n_; ++v) {
          result.assignment.values[v] = model_.objective[v] > 0 ? 1 : 0;
        }
        result.assignment.objective =
            ObjectiveValue(model_, result.assignment.values);
      } else {
        result.status = SolveStatus::kInfeasible;
        result.infeasible_hint = hint_;
      }
      return result;
    }
    if (limit_hit_) {
      result.status = SolveStatus::kLimitFeasible;
      result.assignment = Assignment{best_, best_obj_};
      result.nodes = nodes_;
      return result;
    }
    Undo(root_mark, root_obj);
    target_ = best_obj_ - kTieTolerance;
    if (FindLexSmallest(0)) {
      result.status = SolveStatus::kOptimal;
      result.assignment = Assignment{lex_, ObjectiveValue(model_, lex_)};
    } else {
      result.status = SolveStatus::kLimitFeasible;
      result.assignment = Assignment{best_, best_obj_};
    }
    result.nodes = nodes_;
    return result;
  }

 private:
  bool LimitReached() {
    if (limit_hit_) return true;
    if (nodes_ >= config_.node_limit) {
      limit_hit_ = true;
    } else if ((nodes_ & 1023) == 0) {
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > config_.time_limit_seconds) limit_hit_ = true;
    }
    return limit_hit_;
  }

  void Enqueue(int r) {
    if (!queued_[r]) {
      queued_[r] = 1;
      queue_.push_back(r);
    }
  }

  void Assign(int v, int val) {
    value_[v] = static_cast<std::int8_t>(val);
    trail_.push_back(v);
    const double c = model_.objective[v];
    if (c > 0) free_pos_ -= c;
    if (val) fixed_obj_ += c;
    for (const auto& [r, a] : cols_[v]) {
      const double delta = a * val - std::min(0.0, a);
      if (delta != 0) {
        min_act_[r] += delta;
        Enqueue(r);
      }
    }
  }

  // Unit propagation to fixpoint. Returns false on conflict.
  bool Propagate() {
    bool ok = true;
    while (!queue_.empty()) {
      const int r = queue_.back();
      queue_.pop_back();
      queued_[r] = 0;
      if (!ok) continue;
      const LeRow& row = rows_[r];
      const double slack = row.rhs - min_act_[r];
      if (slack < -kFeasEps) {
        if (hint_.empty()) hint_ = model_.constraints[row.source].name;
        ok = false;
        continue;
      }
      for (const Term& t : row.terms) {
        if (value_[t.var] >= 0) continue;
        if (t.coeff > 0 && t.coeff > slack + kFeasEps) {
          Assign(t.var, 0);
        } else if (t.coeff < 0 && -t.coeff > slack + kFeasEps) {
          Assign(t.var, 1);
        }
      }
    }
    return ok;
  }

  void Undo(std::size_t mark, std::pair<double, double> saved) {
    while (trail_.size() > mark) {
      const int v = trail_.back();
      trail_.pop_back();
      const int val = value_[v];
      for (const auto& [r, a] : cols_[v]) {
        min_act_[r] -= a * val - std::min(0.0, a);
      }
      value_[v] = -1;
    }
    fixed_obj_ = saved.first;
    free_pos_ = saved.second;
  }

  std::vector<std::uint8_t> Snapshot() const {
    std::vector<std::uint8_t> out(n_);
    for (int v = 0; v < n_; ++v) out[v] = static_cast<std::uint8_t>(value_[v]);
    return out;
  }

  // Phase 1: best objective, branching on the largest |coefficient| first
  // and trying the sign-preferred value first.
  void Optimize() {
    if (LimitReached()) return;
    ++nodes_;
    if (has_best_ && fixed_obj_ + free_pos_ <= best_obj_) return;
    int v = -1;
    for (int cand : order_) {
      if (value_[cand] < 0) {
        v = cand;
        break;
      }
    }
    if (v < 0) {
      std::vector<std::uint8_t> values = Snapshot();
      const double obj = ObjectiveValue(model_, values);
      if (!has_best_ || obj > best_obj_) {
        has_best_ = true;
        best_obj_ = obj;
        best_ = std::move(values);
      }
      return;
    }
    const int preferred = model_.objective[v] > 0 ? 1 : 0;
    for (int val : {preferred, 1 - preferred}) {
      const std::size_t mark = trail_.size();
      const auto saved = std::make_pair(fixed_obj_, free_pos_);
      Assign(v, val);
      if (Propagate()) Optimize();
      Undo(mark, saved);
      if (limit_hit_) return;
    }
  }

  // Phase 2: depth-first in index order, 0 before 1, so the first leaf
  // reaching the target is the lexicographically smallest optimum.
  bool FindLexSmallest(int from) {
    if (LimitReached()) return false;
    ++nodes_;
    if (fixed_obj_ + free_pos_ < target_ - 1e-12) return false;
    int v = from;
    while (v < n_ && value_[v] >= 0) ++v;
    if (v == n_) {
      std::vector<std::uint8_t> values = Snapshot();
      if (ObjectiveValue(model_, values) < target_) return false;
      lex_ = std::move(values);
      return true;
    }
    for (int val : {0, 1}) {
      const std::size_t mark = trail_.size();
      const auto saved = std::make_pair(fixed_obj_, free_pos_);
      Assign(v, val);
      if (Propagate() && FindLexSmallest(v + 1)) return true;
      Undo(mark, saved);
      if (limit_hit_) return false;
    }
    return false;
  }

  const IlpModel& model_;
  SolverConfig config_;
  int n_;
  std::vector<LeRow> rows_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<std::int8_t> value_;
  std::vector<double> min_act_;
  std::vector<int> queue_;
  std::vector<char> queued_;
  std::vector<int> trail_;
  std::vector<int> order_;
  double fixed_obj_ = 0;
  double free_pos_ = 0;

  bool has_best_ = false;
  double best_obj_ = -std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> best_;
  double target_ = 0;
  std::vector<std::uint8_t> lex_;

  std::string hint_;
  std::int64_t nodes_ = 0;
  bool limit_hit_ = false;
  std::chrono::steady_clock::time_point start_;
};

// Incrementally maintained row activities over a full assignment.
class Enumerator {
 public:
  explicit Enumerator(const IlpModel& model)
      : rows_(ToLeRows(model)),
        cols_(Columns(rows_, model.num_vars())),
        values_(model.num_vars(), 0),
        act_(rows_.size(), 0.0) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (act_[r] > rows_[r].rhs + kFeasEps) ++violated_;
    }
  }

  void Flip(int v) {
    const double sign = values_[v] ? -1.0 : 1.0;
    values_[v] ^= 1;
    for (const auto& [r, a] : cols_[v]) {
      const bool before = act_[r] > rows_[r].rhs + kFeasEps;
      act_[r] += sign * a;
      const bool after = act_[r] > rows_[r].rhs + kFeasEps;
      violated_ += static_cast<int>(after) - static_cast<int>(before);
    }
  }

  bool feasible() const { return violated_ == 0; }
  const std::vector<std::uint8_t>& values() const { return values_; }

 private:
  std::vector<LeRow> rows_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<std::uint8_t> values_;
  std::vector<double> act_;
  int violated_ = 0;
};

}  // namespace

SolveResult Solve(const IlpModel& model, const SolverConfig& config) {
  return BranchAndBound(model, config).Run();
}

SolveResult BruteForce(const IlpModel& model) {
  const int n = model.num_vars();
  if (n > kBruteForceMaxVars) {
    throw Error(ErrorCode::kTooLarge,
                fmt::format("brute force needs <= {} variables, model has {}",
                            kBruteForceMaxVars, n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  SolveResult result;
  result.nodes = static_cast<std::int64_t>(total);

  // Pass 1, Gray-code order: the maximum objective.
  bool found = false;
  double best = -std::numeric_limits<double>::infinity();
  {
    Enumerator e(model);
    for (std::uint64_t i = 0;; ++i) {
      if (e.feasible()) {
        const double obj = ObjectiveValue(model, e.values());
        if (!found || obj > best) best = obj;
        found = true;
      }
      if (i + 1 == total) break;
      e.Flip(std::countr_zero(i + 1));
    }
  }
  if (!found) {
    result.status = SolveStatus::kInfeasible;
    std::vector<std::uint8_t> zeros(n, 0);
    IsFeasible(model, zeros, &result.infeasible_hint);
    return result;
  }
  // Pass 2, lexicographic order (x[0] is the most significant bit).
  Enumerator e(model);
  for (std::uint64_t key = 0;; ++key) {
    if (e.feasible()) {
      const double obj = ObjectiveValue(model, e.values());
      if (obj >= best - kTieTolerance) {
        result.status = SolveStatus::kOptimal;
        result.assignment = Assignment{e.values(), obj};
        return result;
      }
    }
    if (key + 1 == total) break;
    const std::uint64_t changed = key ^ (key + 1);
    for (int bit = 0; bit < n; ++bit) {
      if (changed >> bit & 1) e.Flip(n - 1 - bit);
    }
  }
  result.status = SolveStatus::kInfeasible;
  return result;
}

std::vector<ViolationRecord> Violations(
    const std::vector<GroundedConstraint>& grounded,
    std::span<const std::uint8_t> decision_values) {
  std::vector<ViolationRecord> out;
  for (const GroundedConstraint& g : grounded) {
    if (!EvalBool(g.expr, decision_values)) {
      out.push_back(ViolationRecord{g.constraint_id, g.binding});
    }
  }
  return out;
}

std::vector<ViolationRecord> Violations(const ConstraintSet& constraints,
                                        const ConceptGraph& graph,
                                        const DataNodeGraph& dng,
                                        std::span<const std::uint8_t> values) {
  DecisionIndex index(graph, dng);
  if (values.size() < index.size()) {
    throw Error(ErrorCode::kMissingAssignment,
                fmt::format("assignment covers {} of {} decision variables",
                            values.size(), index.size()));
  }
  return Violations(Ground(constraints, graph, dng, index), values);
}

}  // namespace declearn
