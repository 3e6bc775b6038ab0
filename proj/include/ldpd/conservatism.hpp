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

// Grade-wise PD bounds by the conservative pooling rule: grade j (counted
// from the lowest risk) is estimated from all obligors and defaults in
// grades j, j+1, ..., l. When a riskier grade still ends up with a smaller
// bound than a safer one, remediate_reversal raises its default count one at
// a time until its bound exceeds every safer grade's bound.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ldpd/errors.hpp"
#include "ldpd/numeric_config.hpp"
#include "ldpd/pd_bound.hpp"

namespace ldpd {

struct Grade {
  std::string name;
  std::int64_t n_obligors = 0;
  std::int64_t k_defaults = 0;

  bool operator==(const Grade&) const = default;
};

/// Rating grades ordered from lowest to highest risk.
class Portfolio {
 public:
  explicit Portfolio(std::vector<Grade> grades) : grades_(std::move(grades)) {
    if (grades_.empty()) throw DomainError("portfolio needs at least one grade");
    std::set<std::string> seen;
    for (const auto& g : grades_) {
      if (g.name.empty()) throw DomainError("grade name must not be empty");
      if (!seen.insert(g.name).second) throw DomainError("duplicate grade name '" + g.name + "'");
      if (g.n_obligors < 1) throw DomainError("grade '" + g.name + "' needs at least one obligor");
      if (g.k_defaults < 0 || g.k_defaults > g.n_obligors) {
        throw DomainError("grade '" + g.name + "': defaults must lie in [0, obligors]");
      }
    }
  }

  const std::vector<Grade>& grades() const noexcept { return grades_; }
  std::size_t size() const noexcept { return grades_.size(); }

  bool operator==(const Portfolio&) const = default;

 private:
  std::vector<Grade> grades_;
};

struct GradeAllocation {
  std::string name;
  std::int64_t n_used;
  std::int64_t k_used;
};

/// Suffix sums of obligors and defaults, riskiest grade last.
inline std::vector<GradeAllocation> allocate(const Portfolio& pf) {
  const auto& g = pf.grades();
  std::vector<GradeAllocation> out(g.size());
  std::int64_t n = 0;
  std::int64_t k = 0;
  for (std::size_t j = g.size(); j-- > 0;) {
    n += g[j].n_obligors;
    k += g[j].k_defaults;
    out[j] = {g[j].name, n, k};
  }
  return out;
}

struct GradeBound {
  std::string name;
  std::int64_t n_used;
  std::int64_t k_used;
  BoundResult bound;
};

/// Grade indices (safer, riskier) with bound(riskier) < bound(safer).
struct Reversal {
  std::size_t safer;
  std::size_t riskier;

  bool operator==(const Reversal&) const = default;
};

struct GradeBoundReport {
  double gamma = 0.0;
  std::optional<double> rho;
  std::vector<GradeBound> grades;
  std::vector<Reversal> reversals;
  /// Per-grade default increments applied by remediation; empty if none ran.
  std::vector<std::int64_t> adjusted_k;
  /// Remediation hit the k = n cap without restoring the ordering.
  bool unresolved = false;
};

/// Compares full-precision bounds; rounding is left to presentation.
inline std::vector<Reversal> find_reversals(const std::vector<GradeBound>& grades) {
  std::vector<Reversal> out;
  for (std::size_t j = 1; j < grades.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (grades[j].bound.p_upper < grades[i].bound.p_upper) out.push_back({i, j});
    }
  }
  return out;
}

namespace detail {

inline BoundResult grade_bound(const std::string& name, std::int64_t n, std::int64_t k,
                               double gamma, std::optional<double> rho,
                               const NumericConfig& cfg) {
  try {
    return pd_upper_bound(BoundQuery{n, k, gamma, rho}, cfg);
  } catch (const NumericError& e) {
    throw NumericError("grade '" + name + "': " + e.what());
  }
}

}  // namespace detail

inline GradeBoundReport estimate_grades(const Portfolio& pf, double gamma,
                                        std::optional<double> rho,
                                        const NumericConfig& cfg = {}) {
  GradeBoundReport report;
  report.gamma = gamma;
  report.rho = rho;
  for (const auto& a : allocate(pf)) {
    report.grades.push_back(
        {a.name, a.n_used, a.k_used, detail::grade_bound(a.name, a.n_used, a.k_used, gamma, rho, cfg)});
  }
  report.reversals = find_reversals(report.grades);
  return report;
}

/// Raises the default count of each grade whose bound falls below a safer
/// grade's bound, one default per step, until its bound is strictly greater
/// than all safer grades' bounds or k reaches n. Grades that are in order are
/// left unchanged. A report without reversals is returned unchanged.
inline GradeBoundReport remediate_reversal(const GradeBoundReport& report, const Portfolio& pf,
                                           double gamma, std::optional<double> rho,
                                           const NumericConfig& cfg = {}) {
  if (report.grades.size() != pf.size()) {
    throw DomainError("remediate_reversal: report does not match portfolio");
  }
  for (std::size_t j = 0; j < pf.size(); ++j) {
    if (report.grades[j].name != pf.grades()[j].name) {
      throw DomainError("remediate_reversal: grade order differs from portfolio");
    }
  }
  if (report.reversals.empty()) return report;

  GradeBoundReport out = report;
  out.gamma = gamma;
  out.rho = rho;
  out.adjusted_k.assign(out.grades.size(), 0);
  double safer_max = out.grades[0].bound.p_upper;
  for (std::size_t j = 1; j < out.grades.size(); ++j) {
    auto& g = out.grades[j];
    if (g.bound.p_upper < safer_max) {
      while (!(g.bound.p_upper > safer_max) && g.k_used < g.n_used) {
        ++g.k_used;
        ++out.adjusted_k[j];
        g.bound = detail::grade_bound(g.name, g.n_used, g.k_used, gamma, rho, cfg);
      }
    }
    safer_max = std::max(safer_max, g.bound.p_upper);
  }
  out.reversals = find_reversals(out.grades);
  out.unresolved = !out.reversals.empty();
  return out;
}

}  // namespace ldpd
