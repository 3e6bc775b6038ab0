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

// Special-function kernel: standard normal CDF and quantile, log-beta, and
// the regularized incomplete beta function with its inverse.
//
// The beta density used throughout is the standard one,
//   b(x) = x^(alpha-1) (1-x)^(beta-1) / B(alpha, beta),
// so that beta_cdf(x, {alpha, beta}) is the regularized incomplete beta
// I_x(alpha, beta).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "ldpd/errors.hpp"

namespace ldpd {

struct ShapeParams {
  double alpha;
  double beta;
};

inline void validate(const ShapeParams& s) {
  if (!(s.alpha > 0.0) || !(s.beta > 0.0) || !std::isfinite(s.alpha) ||
      !std::isfinite(s.beta)) {
    throw DomainError("beta shape parameters must be finite and positive, got (" +
                      std::to_string(s.alpha) + ", " + std::to_string(s.beta) + ")");
  }
}

namespace detail {

inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
inline constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// Phi(x) without argument validation; used inside integrands where the
// argument is always finite.
inline double norm_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x * (1.0 / std::numbers::sqrt2));
}

inline double norm_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

// Wichura's AS 241 (PPND16) for the lower tail, q in (0, 0.5].
inline double norm_quantile_as241(double q) noexcept {
  const double d = q - 0.5;
  if (std::abs(d) <= 0.425) {
    const double r = 0.180625 - d * d;
    return d *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
              0.24178072517745061177) * r + 1.27045825245236838258) * r +
            3.64784832476320460504) * r + 5.7694972214606914055) * r +
          4.6303378461565452959) * r + 1.42343711074968357734) /
        (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
              0.0151986665636164571966) * r + 0.14810397642748007459) * r +
            0.68976733498510000455) * r + 1.6763848301838038494) * r +
          2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              0.0012426609473880784386) * r + 0.026532189526576123093) * r +
            0.29656057182850489123) * r + 1.7848265399172913358) * r +
          5.4637849111641143699) * r + 6.6579046435011037772) /
        (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
              1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
            0.0148753612908506148525) * r + 0.13692988092273580531) * r +
          0.59983220655588793769) * r + 1.0);
  }
  return -x;
}

// Lower-tail quantile, q in (0, 0.5], with one Halley step against Phi.
inline double norm_quantile_lower(double q) noexcept {
  double x = norm_quantile_as241(q);
  const double e = norm_cdf(x) - q;
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace detail

/// Standard normal CDF. Throws DomainError for non-finite x.
inline double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_cdf: non-finite argument");
  return detail::norm_cdf(x);
}

inline double std_normal_pdf(double x) { return detail::norm_pdf(x); }

/// Inverse of std_normal_cdf on (0, 1).
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: probability must lie in (0, 1), got " +
                      std::to_string(p));
  }
  return p <= 0.5 ? detail::norm_quantile_lower(p) : -detail::norm_quantile_lower(1.0 - p);
}

/// Phi^-1(1 - q) computed from the upper-tail mass q without forming 1 - q.
inline double std_normal_quantile_upper(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("std_normal_quantile_upper: probability must lie in (0, 1)");
  }
  return q <= 0.5 ? -detail::norm_quantile_lower(q) : detail::norm_quantile_lower(1.0 - q);
}

namespace detail {

// glibc's lgamma writes the global signgam; lgamma_r does not.
inline double log_gamma(double x) noexcept {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// Remainder of the Stirling series, ln Gamma(x) - [(x-1/2)ln x - x + ln sqrt(2 pi)].
// Accurate to double precision for x >= 10.
inline double stirling_remainder(double x) noexcept {
  const double r = 1.0 / (x * x);
  return (1.0 / 12.0 +
          r * (-1.0 / 360.0 +
               r * (1.0 / 1260.0 +
                    r * (-1.0 / 1680.0 +
                         r * (1.0 / 1188.0 +
                              r * (-691.0 / 360360.0 +
                                   r * (1.0 / 156.0 + r * (-3617.0 / 122400.0)))))))) /
         x;
}

inline double log_beta_unchecked(double a, double b) noexcept {
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10.0) {
    const double corr = stirling_remainder(p) + stirling_remainder(q) - stirling_remainder(p + q);
    return -0.5 * std::log(q) + kLnSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = stirling_remainder(q) - stirling_remainder(p + q);
    return log_gamma(p) + corr + p - p * std::log(p + q) +
           (q - 0.5) * std::log1p(-p / (p + q));
  }
  return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
}

// Continued fraction for I_x(a, b) (modified Lentz), valid and fast for
// x below the mean; the caller applies the symmetry switch.
inline double incbeta_cf(double x, double y, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 20000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      const double log_front =
          a * std::log(x) + b * std::log(y) - log_beta_unchecked(a, b);
      return std::exp(log_front) * h / a;
    }
  }
  throw NumericError("incomplete beta continued fraction did not converge for x=" +
                     std::to_string(x) + ", a=" + std::to_string(a) +
                     ", b=" + std::to_string(b));
}

// I_x(a, b) given both x and y = 1 - x, so callers holding an accurate
// complement (e.g. Phi(-z)) do not lose it to cancellation.
inline double incbeta(double x, double y, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  if (x <= a / (a + b)) return incbeta_cf(x, y, a, b);
  return 1.0 - incbeta_cf(y, x, b, a);
}

inline double beta_log_pdf(double x, double y, double a, double b) noexcept {
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log(y) - log_beta_unchecked(a, b);
}

struct BetaQuantileSolution {
  double x;
  std::size_t iterations;
};

// Initial guess for I_x(a,b) = p (Abramowitz & Stegun 26.5.22 for a,b >= 1,
// power-tail approximation otherwise).
inline double beta_quantile_guess(double p, double a, double b) noexcept {
  if (a >= 1.0 && b >= 1.0) {
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    return a / (a + b * std::exp(2.0 * w));
  }
  const double lna = std::log(a / (a + b));
  const double lnb = std::log(b / (a + b));
  const double t = std::exp(a * lna) / a;
  const double u = std::exp(b * lnb) / b;
  const double w = t + u;
  if (p < t / w) return std::pow(a * w * p, 1.0 / a);
  return 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
}

// Newton on I_x(a,b) - p with a bisection safeguard on [0, 1].
inline BetaQuantileSolution beta_quantile_solve(double p, double a, double b) {
  constexpr int kMaxIter = 400;
  double lo = 0.0;
  double hi = 1.0;
  double x = beta_quantile_guess(p, a, b);
  if (!(x > 1e-16 && x < 1.0 - 1e-16)) x = a / (a + b);
  for (int it = 1; it <= kMaxIter; ++it) {
    const double f = incbeta(x, 1.0 - x, a, b) - p;
    if (f == 0.0) return {x, static_cast<std::size_t>(it)};
    if (f < 0.0) lo = x; else hi = x;
    const double dens = std::exp(beta_log_pdf(x, 1.0 - x, a, b));
    double next = x - f / dens;
    if (!(dens > 0.0) || !std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * next ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      return {next, static_cast<std::size_t>(it)};
    }
    x = next;
  }
  throw NumericError("beta_quantile: no convergence for p=" + std::to_string(p) +
                     ", a=" + std::to_string(a) + ", b=" + std::to_string(b));
}

}  // namespace detail

/// ln B(alpha, beta).
inline double log_beta(const ShapeParams& shape) {
  validate(shape);
  return detail::log_beta_unchecked(shape.alpha, shape.beta);
}

/// Regularized incomplete beta I_x(alpha, beta), the CDF of Beta(alpha, beta).
inline double beta_cdf(double x, const ShapeParams& shape) {
  validate(shape);
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("beta_cdf: x must lie in [0, 1], got " + std::to_string(x));
  }
  return detail::incbeta(x, 1.0 - x, shape.alpha, shape.beta);
}

inline double beta_pdf(double x, const ShapeParams& shape) {
  validate(shape);
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  return std::exp(detail::beta_log_pdf(x, 1.0 - x, shape.alpha, shape.beta));
}

/// Inverse of beta_cdf on (0, 1).
inline double beta_quantile(double p, const ShapeParams& shape) {
  validate(shape);
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("beta_quantile: probability must lie in (0, 1), got " +
                      std::to_string(p));
  }
  return detail::beta_quantile_solve(p, shape.alpha, shape.beta).x;
}

}  // namespace ldpd
