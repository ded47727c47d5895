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

// Central finite differences for the gradient checks.

#ifndef DECLEARN_TESTS_SUPPORT_GRADCHECK_H_
#define DECLEARN_TESTS_SUPPORT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace declearn::testing {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;

inline double RelErr(double analytic, double numeric) {
  const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
  return std::fabs(analytic - numeric) / scale;
}

struct FdResult {
  bool smooth = true;  // false when one-sided slopes disagree (near a kink)
  double worst = 0;    // largest relative error over coordinates
};

// Compares `grad` to central differences of `f` at `x`.
inline FdResult CheckGradient(const std::function<double(const std::vector<double>&)>& f,
                              std::vector<double> x,
                              const std::vector<double>& grad) {
  FdResult r;
  const double f0 = f(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + kFdStep;
    const double fp = f(x);
    x[i] = xi - kFdStep;
    const double fm = f(x);
    x[i] = xi;
    const double fwd = (fp - f0) / kFdStep;
    const double bwd = (f0 - fm) / kFdStep;
    if (RelErr(fwd, bwd) > 1e-3) r.smooth = false;
    r.worst = std::max(r.worst, RelErr(grad[i], (fp - fm) / (2 * kFdStep)));
  }
  return r;
}

}  // namespace declearn::testing

#endif  // DECLEARN_TESTS_SUPPORT_GRADCHECK_H_
