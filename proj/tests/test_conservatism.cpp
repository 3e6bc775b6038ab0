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

#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "ldpd/conservatism.hpp"
#include "ldpd/tables.hpp"

namespace {

using namespace ldpd;

double bound_at(std::int64_t n, std::int64_t k, double gamma, std::optional<double> rho) {
  return pd_upper_bound(BoundQuery{n, k, gamma, rho}).p_upper;
}

void expect_allocation(const Portfolio& pf,
                       const std::vector<std::pair<std::int64_t, std::int64_t>>& expected) {
  const auto a = allocate(pf);
  ASSERT_EQ(a.size(), expected.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].name, pf.grades()[j].name);
    EXPECT_EQ(a[j].n_used, expected[j].first) << a[j].name;
    EXPECT_EQ(a[j].k_used, expected[j].second) << a[j].name;
  }
}

TEST(Allocate, ThreeGradeExample) {
  expect_allocation(three_grade_example(), {{800, 3}, {700, 3}, {300, 1}});
}

TEST(Allocate, FourGradeExample) {
  expect_allocation(four_grade_example(), {{1500, 7}, {1100, 5}, {400, 4}, {150, 1}});
}

TEST(Allocate, SingleGradeIsIdentity) {
  expect_allocation(Portfolio({{"X", 42, 3}}), {{42, 3}});
}

TEST(Allocate, SuffixSums) {
  const Portfolio pf({{"a", 5, 1}, {"b", 17, 0}, {"c", 3, 3}, {"d", 90, 11}, {"e", 1, 0}});
  const auto a = allocate(pf);
  std::int64_t n = 0, k = 0;
  for (const auto& g : pf.grades()) {
    n += g.n_obligors;
    k += g.k_defaults;
  }
  EXPECT_EQ(a[0].n_used, n);
  EXPECT_EQ(a[0].k_used, k);
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    EXPECT_EQ(a[j].n_used - a[j + 1].n_used, pf.grades()[j].n_obligors);
    EXPECT_EQ(a[j].k_used - a[j + 1].k_used, pf.grades()[j].k_defaults);
  }
  EXPECT_EQ(a.back().n_used, 1);
}

TEST(PortfolioType, RejectsInvalidGrades) {
  EXPECT_THROW(Portfolio({}), DomainError);
  EXPECT_THROW(Portfolio({{"A", 10, 1}, {"A", 5, 0}}), DomainError);
  EXPECT_THROW(Portfolio({{"A", 0, 0}}), DomainError);
  EXPECT_THROW(Portfolio({{"A", 5, 6}}), DomainError);
  EXPECT_THROW(Portfolio({{"", 5, 1}}), DomainError);
}

TEST(EstimateGrades, ThreeGradeIndependent) {
  const auto rep = estimate_grades(three_grade_example(), 0.99, std::nullopt);
  ASSERT_EQ(rep.grades.size(), 3u);
  EXPECT_NEAR(100.0 * rep.grades[0].bound.p_upper, 1.25, 0.005);
  EXPECT_NEAR(100.0 * rep.grades[1].bound.p_upper, 1.43, 0.005);
  EXPECT_NEAR(100.0 * rep.grades[2].bound.p_upper, 2.19, 0.005);
  EXPECT_TRUE(rep.reversals.empty());
  EXPECT_TRUE(rep.adjusted_k.empty());
}

TEST(EstimateGrades, FlagsReversalIndependent) {
  const auto rep = estimate_grades(four_grade_example(), 0.5, std::nullopt);
  EXPECT_NEAR(100.0 * rep.grades[2].bound.p_upper, 1.17, 0.005);
  EXPECT_NEAR(100.0 * rep.grades[3].bound.p_upper, 1.12, 0.005);
  ASSERT_EQ(rep.reversals.size(), 1u);
  EXPECT_EQ(rep.reversals[0], (Reversal{2, 3}));
}

TEST(EstimateGrades, FlagsReversalCorrelated) {
  const auto rep = estimate_grades(four_grade_example(), 0.5, 0.12);
  EXPECT_NEAR(100.0 * rep.grades[2].bound.p_upper, 1.64, 0.005);
  EXPECT_NEAR(100.0 * rep.grades[3].bound.p_upper, 1.56, 0.005);
  ASSERT_EQ(rep.reversals.size(), 1u);
  EXPECT_EQ(rep.reversals[0], (Reversal{2, 3}));
}

TEST(EstimateGrades, NoReversalAtHighConfidence) {
  for (double gamma : {0.75, 0.9, 0.95, 0.99, 0.999}) {
    EXPECT_TRUE(estimate_grades(four_grade_example(), gamma, std::nullopt).reversals.empty());
  }
}

TEST(FindReversals, UsesFullPrecision) {
  auto make = [](double p) { return GradeBound{"g", 1, 0, BoundResult{p, 0, 0, 0, false}}; };
  EXPECT_EQ(find_reversals({make(0.011201), make(0.011200)}).size(), 1u);
  EXPECT_TRUE(find_reversals({make(0.0112), make(0.0112)}).empty());
  EXPECT_EQ(find_reversals({make(0.03), make(0.02), make(0.01)}).size(), 3u);
}

TEST(Remediate, IncrementsRiskierGradeUntilOrdered) {
  const auto pf = four_grade_example();
  const auto rep = estimate_grades(pf, 0.5, std::nullopt);
  const double p_c = rep.grades[2].bound.p_upper;

  std::int64_t k = 1;
  while (bound_at(150, k, 0.5, std::nullopt) <= p_c) ++k;

  const auto fixed = remediate_reversal(rep, pf, 0.5, std::nullopt);
  EXPECT_FALSE(fixed.unresolved);
  EXPECT_TRUE(fixed.reversals.empty());
  ASSERT_EQ(fixed.adjusted_k.size(), 4u);
  EXPECT_EQ(fixed.adjusted_k, (std::vector<std::int64_t>{0, 0, 0, k - 1}));
  EXPECT_EQ(fixed.grades[3].k_used, k);
  EXPECT_EQ(k, 2);
  EXPECT_GT(fixed.grades[3].bound.p_upper, p_c);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(fixed.grades[j].k_used, rep.grades[j].k_used);
    EXPECT_EQ(fixed.grades[j].bound.p_upper, rep.grades[j].bound.p_upper);
  }
}

TEST(Remediate, CorrelatedReversal) {
  const auto pf = four_grade_example();
  const auto rep = estimate_grades(pf, 0.5, 0.12);
  const auto fixed = remediate_reversal(rep, pf, 0.5, 0.12);
  EXPECT_FALSE(fixed.unresolved);
  EXPECT_TRUE(fixed.reversals.empty());
  EXPECT_GT(fixed.adjusted_k[3], 0);
}

TEST(Remediate, NoReversalIsUnchanged) {
  const auto pf = three_grade_example();
  const auto rep = estimate_grades(pf, 0.9, std::nullopt);
  const auto same = remediate_reversal(rep, pf, 0.9, std::nullopt);
  EXPECT_TRUE(same.adjusted_k.empty());
  ASSERT_EQ(same.grades.size(), rep.grades.size());
  for (std::size_t j = 0; j < rep.grades.size(); ++j) {
    EXPECT_EQ(same.grades[j].k_used, rep.grades[j].k_used);
    EXPECT_EQ(same.grades[j].bound.p_upper, rep.grades[j].bound.p_upper);
  }
}

// Searches small two-grade portfolios for reversals and checks that
// remediation restores order with the smallest possible increment.
TEST(Remediate, BruteForceTwoGradeCases) {
  int reversed_cases = 0;
  for (std::int64_t n1 = 1; n1 <= 12; ++n1) {
    for (std::int64_t k1 = 0; k1 <= n1; ++k1) {
      for (std::int64_t n2 = 1; n2 <= 12; ++n2) {
        for (std::int64_t k2 = 0; k2 < n2; ++k2) {
          const Portfolio pf({{"lo", n1, k1}, {"hi", n2, k2}});
          const auto rep = estimate_grades(pf, 0.5, std::nullopt);
          if (rep.reversals.empty()) continue;
          ++reversed_cases;
          const auto fixed = remediate_reversal(rep, pf, 0.5, std::nullopt);
          ASSERT_FALSE(fixed.unresolved);
          EXPECT_GT(fixed.grades[1].bound.p_upper, fixed.grades[0].bound.p_upper);
          const std::int64_t k_used = fixed.grades[1].k_used;
          EXPECT_EQ(k_used, k2 + fixed.adjusted_k[1]);
          EXPECT_LE(bound_at(n2, k_used - 1, 0.5, std::nullopt), fixed.grades[0].bound.p_upper);
        }
      }
    }
  }
  EXPECT_GT(reversed_cases, 0);
}

TEST(Remediate, MonotoneAfterRemediationWithSeveralReversals) {
  const Portfolio pf({{"A", 50, 5}, {"B", 400, 1}, {"C", 300, 0}, {"D", 20, 0}});
  const auto rep = estimate_grades(pf, 0.75, std::nullopt);
  ASSERT_FALSE(rep.reversals.empty());
  const auto fixed = remediate_reversal(rep, pf, 0.75, std::nullopt);
  EXPECT_FALSE(fixed.unresolved);
  for (std::size_t j = 1; j < fixed.grades.size(); ++j) {
    EXPECT_GT(fixed.grades[j].bound.p_upper, fixed.grades[j - 1].bound.p_upper);
  }
}

TEST(Remediate, RejectsMismatchedReport) {
  const auto rep = estimate_grades(four_grade_example(), 0.5, std::nullopt);
  EXPECT_THROW(remediate_reversal(rep, three_grade_example(), 0.5, std::nullopt), DomainError);
}

}  // namespace
