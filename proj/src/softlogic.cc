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

#include "declearn/softlogic.h"

#include <algorithm>

namespace declearn {
namespace {

double Sum(const GExpr& e, std::span<const double> scores) {
  double s = 0;
  for (const GExpr& c : e.children) s += SoftEval(c, scores);
  return s;
}

// Slope of min(1, s) at s.
double MinOneSlope(double s) { return s < 1 ? 1.0 : (s > 1 ? 0.0 : 0.5); }
// Slope of max(0, s) at s.
double MaxZeroSlope(double s) { return s > 0 ? 1.0 : (s < 0 ? 0.0 : 0.5); }

void Backprop(const GExpr& e, std::span<const double> scores, double adjoint,
              std::span<double> grad) {
  if (adjoint == 0) return;
  switch (e.kind) {
    case GKind::kVar:
      grad[e.var] += adjoint;
      return;
    case GKind::kConst:
      return;
    case GKind::kNot:
      Backprop(e.children[0], scores, -adjoint, grad);
      return;
    case GKind::kAnd: {
      const double s =
          Sum(e, scores) - static_cast<double>(e.children.size() - 1);
      const double d = adjoint * MaxZeroSlope(s);
      for (const GExpr& c : e.children) Backprop(c, scores, d, grad);
      return;
    }
    case GKind::kOr: {
      const double d = adjoint * MinOneSlope(Sum(e, scores));
      for (const GExpr& c : e.children) Backprop(c, scores, d, grad);
      return;
    }
    case GKind::kIf: {
      const double s = 1 - SoftEval(e.children[0], scores) +
                       SoftEval(e.children[1], scores);
      const double d = adjoint * MinOneSlope(s);
      Backprop(e.children[0], scores, -d, grad);
      Backprop(e.children[1], scores, d, grad);
      return;
    }
    case GKind::kAtMost: {
      const double s = 1 + e.k - Sum(e, scores);
      const double d = adjoint * MaxZeroSlope(s) * MinOneSlope(s);
      for (const GExpr& c : e.children) Backprop(c, scores, -d, grad);
      return;
    }
  }
}

}  // namespace

double SoftEval(const GExpr& e, std::span<const double> scores) {
  switch (e.kind) {
    case GKind::kVar: return scores[e.var];
    case GKind::kConst: return e.value ? 1.0 : 0.0;
    case GKind::kNot: return 1 - SoftEval(e.children[0], scores);
    case GKind::kAnd:
      return std::max(
          0.0, Sum(e, scores) - static_cast<double>(e.children.size() - 1));
    case GKind::kOr: return std::min(1.0, Sum(e, scores));
    case GKind::kIf:
      return std::min(1.0, 1 - SoftEval(e.children[0], scores) +
                               SoftEval(e.children[1], scores));
    case GKind::kAtMost:
      return std::clamp(1 + e.k - Sum(e, scores), 0.0, 1.0);
  }
  return 0;
}

double SoftViolation(const GExpr& expr, std::span<const double> scores,
                     std::span<double> grad, double weight) {
  const double v = 1 - SoftEval(expr, scores);
  if (!grad.empty()) Backprop(expr, scores, -weight, grad);
  return v;
}

}  // namespace declearn
