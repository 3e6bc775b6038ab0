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

// Upper confidence bound for the default probability of n independent
// obligors with at most k defaults: the largest p with
//   P(Bin(n, p) <= k) >= 1 - gamma,
// which is p = 1 - I^{-1}_{n-k,k+1}(1 - gamma) through the binomial/beta
// CDF identity P(Bin(n,p) <= k) = I_{1-p}(n-k, k+1).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ldpd/errors.hpp"
#include "ldpd/specfun.hpp"

namespace ldpd {

/// Request for a single PD upper bound. rho absent selects the independent
/// model; rho present selects the one-factor model.
struct BoundQuery {
  std::int64_t n = 1;
  std::int64_t k = 0;
  double gamma = 0.9;
  std::optional<double> rho;
};

struct BoundResult {
  double p_upper = 1.0;
  /// Defining equation at p_upper minus its target 1 - gamma.
  double residual = 0.0;
  std::size_t iterations = 0;
  /// Inner quantile: I^{-1}_{n-k,k+1}(1-gamma), or F^{-1}_{n-k,k+1,rho}(1-gamma)
  /// in the correlated model.
  double quantile = 0.0;
  /// k == n: every p satisfies the inequality and the bound is 1.
  bool vacuous = false;
};

inline void validate(const BoundQuery& q) {
  if (q.n < 1) throw DomainError("obligor count n must be >= 1");
  if (q.k < 0 || q.k > q.n) {
    throw DomainError("default count k must satisfy 0 <= k <= n (n=" + std::to_string(q.n) +
                      ", k=" + std::to_string(q.k) + ")");
  }
  if (!(q.gamma > 0.0 && q.gamma < 1.0)) {
    throw DomainError("confidence level gamma must lie in (0, 1), got " +
                      std::to_string(q.gamma));
  }
  if (q.rho && !(*q.rho >= 0.0 && *q.rho < 1.0)) {
    throw DomainError("asset correlation rho must lie in [0, 1), got " + std::to_string(*q.rho));
  }
}

inline double log_binomial_coefficient(std::int64_t n, std::int64_t i) {
  if (i < 0 || i > n) throw DomainError("binomial coefficient index out of range");
  if (i == 0 || i == n) return 0.0;
  const double nd = static_cast<double>(n);
  const double id = static_cast<double>(i);
  return -std::log(nd + 1.0) - detail::log_beta_unchecked(nd - id + 1.0, id + 1.0);
}

/// P(Bin(n, p) <= k), evaluated as I_{1-p}(n-k, k+1).
inline double binomial_cdf(std::int64_t n, std::int64_t k, double p) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("binomial_cdf: need 0 <= k <= n (n=" + std::to_string(n) +
                      ", k=" + std::to_string(k) + ")");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_cdf: p must lie in [0, 1]");
  if (k == n) return 1.0;
  return detail::incbeta(1.0 - p, p, static_cast<double>(n - k), static_cast<double>(k + 1));
}

/// Closed form for k = 0: 1 - (1 - gamma)^(1/n).
inline double pd_upper_bound_zero_defaults(std::int64_t n, double gamma) {
  validate(BoundQuery{n, 0, gamma, std::nullopt});
  return -std::expm1(std::log1p(-gamma) / static_cast<double>(n));
}

inline BoundResult pd_upper_bound_independent(const BoundQuery& q,
                                              double residual_tol = 1e-10) {
  validate(q);
  if (q.rho) throw DomainError("pd_upper_bound_independent: rho must be absent");
  if (q.k == q.n) return BoundResult{1.0, 0.0, 0, 0.0, true};

  // 1 - I^{-1}_{n-k,k+1}(1-gamma) == I^{-1}_{k+1,n-k}(gamma); the right-hand side
  // keeps full relative precision for small bounds.
  const auto sol = detail::beta_quantile_solve(q.gamma, static_cast<double>(q.k + 1),
                                               static_cast<double>(q.n - q.k));
  BoundResult r;
  r.p_upper = sol.x;
  r.iterations = sol.iterations;
  r.quantile = 1.0 - sol.x;
  r.residual = binomial_cdf(q.n, q.k, r.p_upper) - (1.0 - q.gamma);
  if (!(std::abs(r.residual) <= residual_tol)) {
    throw NumericError("independent bound residual " + std::to_string(r.residual) +
                       " exceeds tolerance for n=" + std::to_string(q.n) +
                       ", k=" + std::to_string(q.k));
  }
  return r;
}

}  // namespace ldpd
