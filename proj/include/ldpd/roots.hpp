// Copyright 2026 The ldpd Authors
//
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

#pragma once

#include <cmath>
#include <cstddef>

namespace ldpd {

struct RootSolution {
  double x;
  double residual;
  std::size_t iterations;
};

/// Bisection for a non-decreasing f on [lo, hi] with f(lo) <= target <= f(hi).
/// Stops once the bracket is narrower than width_tol.
template <class F>
RootSolution bisect_increasing(F&& f, double target, double lo, double hi,
                               double width_tol, std::size_t max_iters = 200) {
  std::size_t iters = 0;
  while (hi - lo > width_tol && iters < max_iters) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) lo = mid; else hi = mid;
    ++iters;
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x) - target, iters};
}

}  // namespace ldpd
