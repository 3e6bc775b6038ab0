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

// Quadrature rules for the Gaussian-weighted integrals of the factor model
// and a tanh-sinh rule for integrands on (0, 1) with endpoint singularities.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ldpd/errors.hpp"
#include "ldpd/specfun.hpp"

namespace ldpd {

struct QuadratureSpec {
  std::size_t node_count = 256;
  double truncation = 12.0;  // integrate over [-truncation, truncation]
  double abs_tol = 1e-10;
  std::size_t max_node_count = 4096;
};

inline void validate(const QuadratureSpec& q) {
  if (q.node_count < 2) throw DomainError("quadrature node_count must be >= 2");
  if (!(q.truncation > 0.0)) throw DomainError("quadrature truncation must be positive");
  if (!(q.abs_tol > 0.0)) throw DomainError("quadrature abs_tol must be positive");
}

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(std::size_t n) : nodes(n), weights(n) {
    if (n == 1) {
      nodes[0] = 0.0;
      weights[0] = 2.0;
      return;
    }
    // Legendre P_n(x) and P_n'(x) by the three-term recurrence.
    auto legendre = [n](double x) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      for (int it = 0; it < 100; ++it) {
        const auto [p, dp] = legendre(x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double dp = legendre(x).second;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
  }
};

/// Evaluates E f(X), X ~ N(0,1), by Gauss-Legendre on [-T, T] with the normal
/// density folded into the weights. Each evaluation is checked against the
/// half-size rule; on disagreement beyond abs_tol the node count doubles up to
/// max_node_count, after which NumericError is thrown.
class GaussianExpectation {
 public:
  explicit GaussianExpectation(const QuadratureSpec& spec) : spec_(spec) {
    validate(spec_);
    coarse_ = make_level(spec_.node_count / 2 == 0 ? 1 : spec_.node_count / 2);
    fine_ = make_level(spec_.node_count);
  }

  const QuadratureSpec& spec() const noexcept { return spec_; }

  template <class F>
  double operator()(F&& f) {
    double coarse = apply(coarse_, f);
    double fine = apply(fine_, f);
    while (std::abs(fine - coarse) > spec_.abs_tol) {
      const std::size_t next = fine_.x.size() * 2;
      if (next > spec_.max_node_count) {
        throw NumericError("Gaussian quadrature did not converge: |I(" +
                           std::to_string(fine_.x.size()) + ") - I(" +
                           std::to_string(coarse_.x.size()) +
                           ")| = " + std::to_string(std::abs(fine - coarse)) +
                           " > abs_tol " + std::to_string(spec_.abs_tol));
      }
      coarse_ = std::move(fine_);
      fine_ = make_level(next);
      coarse = fine;
      fine = apply(fine_, f);
    }
    return fine;
  }

 private:
  struct Level {
    std::vector<double> x;
    std::vector<double> w;
  };

  Level make_level(std::size_t n) const {
    GaussLegendreRule rule(n);
    Level level{std::vector<double>(n), std::vector<double>(n)};
    const double t = spec_.truncation;
    for (std::size_t i = 0; i < n; ++i) {
      level.x[i] = t * rule.nodes[i];
      level.w[i] = t * rule.weights[i] * detail::norm_pdf(level.x[i]);
    }
    return level;
  }

  template <class F>
  static double apply(const Level& level, F& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < level.x.size(); ++i) sum += level.w[i] * f(level.x[i]);
    return sum;
  }

  QuadratureSpec spec_;
  Level coarse_;
  Level fine_;
};

/// Tanh-sinh quadrature of f over (0, 1). f is called as f(x, 1 - x) with the
/// complement computed directly, so integrands can resolve both endpoints.
template <class F>
double tanh_sinh_unit(F&& f, double abs_tol, int max_level = 12) {
  constexpr double kTMax = 6.0;
  // x(t) = (1 + tanh((pi/2) sinh t)) / 2 = 1 / (1 + exp(-pi sinh t)).
  auto term = [&](double t) {
    const double u = std::numbers::pi * std::sinh(t);
    const double x = 1.0 / (1.0 + std::exp(-u));
    const double xc = 1.0 / (1.0 + std::exp(u));
    const double w = std::numbers::pi * std::cosh(t) * x * xc;
    if (w == 0.0 || x <= 0.0 || xc <= 0.0) return 0.0;
    return w * f(x, xc);
  };

  double h = 1.0;
  double sum = term(0.0);
  for (double t = h; t <= kTMax; t += h) sum += term(t) + term(-t);
  double estimate = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTMax; t += 2.0 * h) sum += term(t) + term(-t);
    const double next = h * sum;
    if (level >= 3 && std::abs(next - estimate) <= abs_tol) return next;
    estimate = next;
  }
  throw NumericError("tanh-sinh quadrature did not reach abs_tol " + std::to_string(abs_tol));
}

}  // namespace ldpd
