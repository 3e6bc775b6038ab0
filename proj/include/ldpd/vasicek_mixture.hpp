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

// One-factor (Vasicek) default model.
//
// Obligor i defaults when sqrt(rho) S + sqrt(1 - rho) xi_i < Phi^{-1}(p), with
// S, xi_i independent standard normals. Given S = x the default probability is
//   g(x) = Phi((Phi^{-1}(p) - sqrt(rho) x) / sqrt(1 - rho))
// and defaults are conditionally Bin(n, g(x)). Integrating over S gives the
// mixture CDF P(D <= k), which equals
//   F_{n-k,k+1,rho}(y) = E I_{Phi(sqrt(rho/(1-rho)) X + y)}(n-k, k+1),  X ~ N(0,1),
// at y = -Phi^{-1}(p) / sqrt(1 - rho). The correlated PD bound is
//   p <= 1 - Phi(sqrt(1 - rho) F^{-1}_{n-k,k+1,rho}(1 - gamma)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ldpd/binomial_bound.hpp"
#include "ldpd/errors.hpp"
#include "ldpd/quadrature.hpp"
#include "ldpd/roots.hpp"
#include "ldpd/specfun.hpp"

namespace ldpd {

struct FactorModelParams {
  double p;    // unconditional default probability
  double rho;  // asset correlation
};

/// Shapes (a, b) = (n - k, k + 1) and correlation of F_{a,b,rho}. Real shapes
/// are accepted for plotting; the bound paths always pass integers.
struct MixtureShape {
  double a;
  double b;
  double rho;
};

inline void validate_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw DomainError("asset correlation rho must lie in [0, 1), got " + std::to_string(rho));
  }
}

inline void validate(const FactorModelParams& m) {
  if (!(m.p > 0.0 && m.p < 1.0)) {
    throw DomainError("default probability p must lie in (0, 1), got " + std::to_string(m.p));
  }
  validate_rho(m.rho);
}

inline void validate(const MixtureShape& s) {
  validate(ShapeParams{s.a, s.b});
  validate_rho(s.rho);
}

namespace detail {

// Conditional survival Phi(z(x)) = 1 - g(x), z(x) = slope * x + shift.
struct FactorLoadings {
  double slope;
  double shift;

  double z(double x) const noexcept { return slope * x + shift; }
};

inline FactorLoadings loadings(double rho, double shift) {
  return {std::sqrt(rho / (1.0 - rho)), shift};
}

inline FactorLoadings loadings(const FactorModelParams& m) {
  return loadings(m.rho, -std_normal_quantile(m.p) / std::sqrt(1.0 - m.rho));
}

// ln g and ln(1 - g) for g = Phi(-z), each from the better-conditioned tail.
struct LogConditional {
  double log_default;
  double log_survive;
};

inline LogConditional log_conditional(double z) noexcept {
  const double g = norm_cdf(-z);
  const double s = norm_cdf(z);
  return {g < 0.5 ? std::log(g) : std::log1p(-s), s < 0.5 ? std::log(s) : std::log1p(-g)};
}

// E h(S): quadrature for rho > 0, a single evaluation when rho == 0 since
// the integrand no longer depends on S.
template <class H>
double factor_expectation(double rho, const QuadratureSpec& q, H&& h) {
  if (rho == 0.0) return h(0.0);
  GaussianExpectation expect(q);
  return expect(h);
}

// Log-space binomial pmf term; i = 0 and i = n avoid 0 * (-inf).
inline double binomial_term(double log_choose, std::int64_t n, std::int64_t i,
                            const LogConditional& lc) noexcept {
  double l = log_choose;
  if (i > 0) l += static_cast<double>(i) * lc.log_default;
  if (n - i > 0) l += static_cast<double>(n - i) * lc.log_survive;
  return std::exp(l);
}

inline double inverse_normal_from_pair(double u, double uc) noexcept {
  return u < 0.5 ? norm_quantile_lower(u) : -norm_quantile_lower(uc);
}

}  // namespace detail

/// g(x) = P(default | S = x).
inline double conditional_pd(const FactorModelParams& m, double x) {
  validate(m);
  const auto f = detail::loadings(m);
  return detail::norm_cdf(-f.z(x));
}

/// P(g(S) <= v): the Vasicek distribution. rho == 0 is a point mass at p and
/// raises DegenerateError.
inline double vasicek_cdf(double v, const FactorModelParams& m) {
  validate(m);
  if (!(v > 0.0 && v < 1.0)) throw DomainError("vasicek_cdf: v must lie in (0, 1)");
  if (m.rho == 0.0) {
    throw DegenerateError("Vasicek distribution with rho = 0 is a point mass at p");
  }
  return detail::norm_cdf(
      (std::sqrt(1.0 - m.rho) * std_normal_quantile(v) - std_normal_quantile(m.p)) /
      std::sqrt(m.rho));
}

/// E g(S), which equals p.
inline double vasicek_mean(const FactorModelParams& m, const QuadratureSpec& q = {}) {
  validate(m);
  const auto f = detail::loadings(m);
  return detail::factor_expectation(m.rho, q, [&](double x) { return detail::norm_cdf(-f.z(x)); });
}

/// P(D <= k) as the factor-averaged binomial CDF (sum of conditional pmf terms).
inline double mixture_tail_prob(std::int64_t n, std::int64_t k, const FactorModelParams& m,
                                const QuadratureSpec& q = {}) {
  validate(BoundQuery{n, k, 0.5, std::nullopt});
  validate(m);
  if (k == n) return 1.0;
  std::vector<double> log_choose(static_cast<std::size_t>(k) + 1);
  for (std::int64_t i = 0; i <= k; ++i) log_choose[i] = log_binomial_coefficient(n, i);
  const auto f = detail::loadings(m);
  return detail::factor_expectation(m.rho, q, [&](double x) {
    const auto lc = detail::log_conditional(f.z(x));
    double sum = 0.0;
    for (std::int64_t i = 0; i <= k; ++i) sum += detail::binomial_term(log_choose[i], n, i, lc);
    return sum;
  });
}

/// P(D <= k) through the beta representation, integrated against the normal
/// density: E I_{Phi(z(X))}(n-k, k+1).
inline double mixture_tail_prob_beta_form(std::int64_t n, std::int64_t k,
                                          const FactorModelParams& m,
                                          const QuadratureSpec& q = {}) {
  validate(BoundQuery{n, k, 0.5, std::nullopt});
  validate(m);
  if (k == n) return 1.0;
  const double a = static_cast<double>(n - k);
  const double b = static_cast<double>(k + 1);
  const auto f = detail::loadings(m);
  return detail::factor_expectation(m.rho, q, [&](double x) {
    const double z = f.z(x);
    return detail::incbeta(detail::norm_cdf(z), detail::norm_cdf(-z), a, b);
  });
}

/// P(D <= k) as the integral over u in (0, 1) of I_{Phi(slope Phi^{-1}(u) + shift)},
/// evaluated with tanh-sinh quadrature directly on the unit interval.
inline double mixture_tail_prob_unit_interval(std::int64_t n, std::int64_t k,
                                              const FactorModelParams& m,
                                              double abs_tol = 1e-12) {
  validate(BoundQuery{n, k, 0.5, std::nullopt});
  validate(m);
  if (k == n) return 1.0;
  const double a = static_cast<double>(n - k);
  const double b = static_cast<double>(k + 1);
  const auto f = detail::loadings(m);
  auto integrand = [&](double u, double uc) {
    const double z = f.z(detail::inverse_normal_from_pair(u, uc));
    return detail::incbeta(detail::norm_cdf(z), detail::norm_cdf(-z), a, b);
  };
  if (m.rho == 0.0) return integrand(0.5, 0.5);
  return tanh_sinh_unit(integrand, abs_tol);
}

/// F_{a,b,rho}(y) = E I_{Phi(sqrt(rho/(1-rho)) X + y)}(a, b).
inline double f_cdf(double y, const MixtureShape& s, const QuadratureSpec& q = {}) {
  validate(s);
  if (!std::isfinite(y)) throw DomainError("f_cdf: y must be finite");
  const auto f = detail::loadings(s.rho, y);
  return detail::factor_expectation(s.rho, q, [&](double x) {
    const double z = f.z(x);
    return detail::incbeta(detail::norm_cdf(z), detail::norm_cdf(-z), s.a, s.b);
  });
}

struct QuantileSolution {
  double y;
  double residual;  // f_cdf(y) - prob
  std::size_t iterations;
};

/// Solves F_{a,b,rho}(y) = prob: bracket by doubling outward from [-2, 2]
/// (limit |y| <= 40), then bisection to width_tol.
inline QuantileSolution f_quantile_solve(double prob, const MixtureShape& s,
                                         const QuadratureSpec& q = {},
                                         double width_tol = 1e-10,
                                         double residual_tol = 1e-8) {
  validate(s);
  validate(q);
  if (!(prob > 0.0 && prob < 1.0)) {
    throw DomainError("f_quantile: probability must lie in (0, 1), got " + std::to_string(prob));
  }
  constexpr double kLimit = 40.0;

  GaussianExpectation expect(q);
  auto cdf = [&](double y) {
    const auto f = detail::loadings(s.rho, y);
    auto h = [&](double x) {
      const double z = f.z(x);
      return detail::incbeta(detail::norm_cdf(z), detail::norm_cdf(-z), s.a, s.b);
    };
    return s.rho == 0.0 ? h(0.0) : expect(h);
  };

  double lo = -2.0;
  double hi = 2.0;
  std::size_t evaluations = 0;
  while (cdf(lo) > prob) {
    ++evaluations;
    if (lo <= -kLimit) {
      throw NumericError("f_quantile: no lower bracket within |y| <= 40 for prob=" +
                         std::to_string(prob));
    }
    hi = lo;
    lo = std::max(2.0 * lo, -kLimit);
  }
  while (cdf(hi) < prob) {
    ++evaluations;
    if (hi >= kLimit) {
      throw NumericError("f_quantile: no upper bracket within |y| <= 40 for prob=" +
                         std::to_string(prob));
    }
    lo = hi;
    hi = std::min(2.0 * hi, kLimit);
  }
  auto sol = bisect_increasing(cdf, prob, lo, hi, width_tol);
  if (!(std::abs(sol.residual) <= residual_tol)) {
    throw NumericError("f_quantile: residual " + std::to_string(sol.residual) +
                       " exceeds " + std::to_string(residual_tol) + " at y=" +
                       std::to_string(sol.x));
  }
  return {sol.x, sol.residual, sol.iterations + evaluations};
}

inline double f_quantile(double prob, const MixtureShape& s, const QuadratureSpec& q = {}) {
  return f_quantile_solve(prob, s, q).y;
}

/// 1 - F_{a,b,rho}(-Phi^{-1}(p) / sqrt(1 - rho)), a CDF in p. The bound
/// condition is tilde_f_cdf(p) <= gamma.
inline double tilde_f_cdf(double p, const MixtureShape& s, const QuadratureSpec& q = {}) {
  validate(s);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("tilde_f_cdf: p must lie in (0, 1)");
  return 1.0 - f_cdf(-std_normal_quantile(p) / std::sqrt(1.0 - s.rho), s, q);
}

/// PD upper bound in the one-factor model. The residual (mixture CDF at
/// p_upper minus 1 - gamma) must be within residual_tol.
inline BoundResult pd_upper_bound_correlated(const BoundQuery& query,
                                             const QuadratureSpec& q = {},
                                             double residual_tol = 1e-6,
                                             double width_tol = 1e-10) {
  validate(query);
  if (!query.rho) throw DomainError("pd_upper_bound_correlated: rho is required");
  const double rho = *query.rho;
  if (query.k == query.n) return BoundResult{1.0, 0.0, 0, 0.0, true};

  const MixtureShape shape{static_cast<double>(query.n - query.k),
                           static_cast<double>(query.k + 1), rho};
  const auto sol = f_quantile_solve(1.0 - query.gamma, shape, q, width_tol);
  BoundResult r;
  r.quantile = sol.y;
  r.iterations = sol.iterations;
  r.p_upper = detail::norm_cdf(-std::sqrt(1.0 - rho) * sol.y);
  if (!(r.p_upper > 0.0 && r.p_upper < 1.0)) {
    throw NumericError("correlated bound underflowed to " + std::to_string(r.p_upper));
  }
  r.residual = mixture_tail_prob(query.n, query.k, {r.p_upper, rho}, q) - (1.0 - query.gamma);
  if (!(std::abs(r.residual) <= residual_tol)) {
    throw NumericError("correlated bound residual " + std::to_string(r.residual) +
                       " exceeds tolerance for n=" + std::to_string(query.n) +
                       ", k=" + std::to_string(query.k));
  }
  return r;
}

/// P(D = i) of the mixed binomial.
inline double mixture_pmf(std::int64_t n, std::int64_t i, const FactorModelParams& m,
                          const QuadratureSpec& q = {}) {
  validate(BoundQuery{n, i, 0.5, std::nullopt});
  validate(m);
  const double log_choose = log_binomial_coefficient(n, i);
  const auto f = detail::loadings(m);
  return detail::factor_expectation(m.rho, q, [&](double x) {
    return detail::binomial_term(log_choose, n, i, detail::log_conditional(f.z(x)));
  });
}

/// Moment-generating function E exp(t D) = E (1 - g(S) + g(S) e^t)^n.
inline double mixture_mgf(double t, std::int64_t n, const FactorModelParams& m,
                          const QuadratureSpec& q = {}) {
  if (!std::isfinite(t)) throw DomainError("mixture_mgf: t must be finite");
  validate(BoundQuery{n, 0, 0.5, std::nullopt});
  validate(m);
  const double et = std::exp(t);
  const auto f = detail::loadings(m);
  return detail::factor_expectation(m.rho, q, [&](double x) {
    const double z = f.z(x);
    return std::pow(detail::norm_cdf(z) + detail::norm_cdf(-z) * et, static_cast<double>(n));
  });
}

/// E Phi^n(z(X)): the equicorrelated Gaussian orthant probability
/// P(Z_1 < -Phi^{-1}(p), ..., Z_n < -Phi^{-1}(p)), corr(Z_i, Z_j) = rho.
inline double copula_diagonal(std::int64_t n, const FactorModelParams& m,
                              const QuadratureSpec& q = {}) {
  validate(BoundQuery{n, 0, 0.5, std::nullopt});
  validate(m);
  const auto f = detail::loadings(m);
  return detail::factor_expectation(m.rho, q, [&](double x) {
    return std::exp(static_cast<double>(n) * detail::log_conditional(f.z(x)).log_survive);
  });
}

/// Density of N(0, R) with R the n x n equicorrelation matrix (1 on the
/// diagonal, rho elsewhere), using |R| = (1-rho)^(n-1) (1+(n-1)rho) and the
/// closed-form inverse.
inline double equicorr_density(std::span<const double> point, double rho) {
  if (point.empty()) throw DomainError("equicorr_density: empty point");
  if (rho >= 1.0) throw DomainError("equicorr_density: rho >= 1 makes R singular");
  validate_rho(rho);
  const double n = static_cast<double>(point.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : point) {
    sum += x;
    sum_sq += x * x;
  }
  const double cross = 0.5 * (sum * sum - sum_sq);  // sum_{i<j} x_i x_j
  const double spread = 1.0 + (n - 1.0) * rho;
  const double quad = ((1.0 + (n - 2.0) * rho) * sum_sq - 2.0 * rho * cross) /
                      ((1.0 - rho) * spread);
  const double log_det = (n - 1.0) * std::log1p(-rho) + std::log(spread);
  return std::exp(-0.5 * quad - 0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det);
}

}  // namespace ldpd
