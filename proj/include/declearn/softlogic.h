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

// Lukasiewicz relaxation of grounded constraints:
//   not a = 1 - a            and(a..) = max(0, sum - (n - 1))
//   or(a..) = min(1, sum)    if(a, b) = min(1, 1 - a + b)
//   atMost(k; a..) = clip(1 + k - sum, 0, 1)
// Subgradients average the two one-sided derivatives at a kink.

#ifndef DECLEARN_SOFTLOGIC_H_
#define DECLEARN_SOFTLOGIC_H_

#include <span>

#include "declearn/ground.h"

namespace declearn {

// Relaxed truth in [0, 1]; variables read their probability from `scores`.
double SoftEval(const GExpr& expr, std::span<const double> scores);

// Violation degree 1 - SoftEval. Adds weight * d(violation)/d(scores) into
// `grad` when it is non-empty (it must then match scores in size).
double SoftViolation(const GExpr& expr, std::span<const double> scores,
                     std::span<double> grad = {}, double weight = 1.0);

}  // namespace declearn

#endif  // DECLEARN_SOFTLOGIC_H_
