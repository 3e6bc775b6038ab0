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
#include <numbers>
#include <random>
#include <vector>

#include "ldpd/mc_oracle.hpp"
#include "ldpd/vasicek_mixture.hpp"
#include "oracles.hpp"

namespace {

using namespace ldpd;

double independent_bound(std::int64_t n, std::int64_t k, double gamma) {
  return pd_upper_bound_independent(BoundQuery{n, k, gamma, std::nullopt}).p_upper;
}

BoundResult correlated(std::int64_t n, std::int64_t k, double gamma, double rho) {
  return pd_upper_bound_correlated(BoundQuery{n, k, gamma, rho});
}

McConfig mc(std::uint64_t trials, std::uint64_t seed = 7) {
  McConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

TEST(ConditionalPd, KnownValues) {
  EXPECT_NEAR(conditional_pd({0.5, 0.0}, 1.7), 0.5, 1e-15);
  for (double p : {0.01, 0.1, 0.4}) {
    const double x = std_normal_quantile(p) / std::sqrt(0.5);
    EXPECT_NEAR(conditional_pd({p, 0.5}, x), 0.5, 1e-14);
  }
  for (double p : {0.02, 0.3}) EXPECT_NEAR(conditional_pd({p, 0.0}, -3.0), p, 1e-15);
}

TEST(ConditionalPd, DecreasingInFactor) {
  double prev = 1.0;
  for (double x = -6.0; x <= 6.0; x += 0.1) {
    const double v = conditional_pd({0.1, 0.12}, x);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(ConditionalPd, MatchesConditionalSimulation) {
  const FactorModelParams m{0.1, 0.12};
  const double x = -2.09;
  const auto est = simulate_conditional_default(m, x, mc(1'000'000));
  EXPECT_LE(std::abs(est.z_score(conditional_pd(m, x))), 3.0);
}

TEST(VasicekCdf, DirectSubstitution) {
  for (double p : {0.01, 0.1, 0.3}) {
    const double expected =
        std_normal_cdf(std_normal_quantile(p) * (std::sqrt(0.5) - 1.0) / std::sqrt(0.5));
    EXPECT_NEAR(vasicek_cdf(p, {p, 0.5}), expected, 1e-14);
  }
}

TEST(VasicekCdf, DegenerateWithoutCorrelation) {
  EXPECT_THROW(vasicek_cdf(0.2, {0.1, 0.0}), DegenerateError);
  EXPECT_THROW(vasicek_cdf(0.0, {0.1, 0.3}), DomainError);
}

TEST(VasicekCdf, MonotoneAndBounded) {
  double prev = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double v = vasicek_cdf(i / 1000.0, {0.1, 0.12});
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(VasicekCdf, MeanEqualsUnconditionalPd) {
  for (double p : {0.01, 0.1, 0.3}) {
    for (double rho : {0.05, 0.12, 0.5}) {
      EXPECT_NEAR(vasicek_mean({p, rho}), p, 1e-8) << p << "," << rho;
    }
  }
}

TEST(VasicekCdf, MatchesSimulatedCdf) {
  const FactorModelParams m{0.1, 0.12};
  const double median = std_normal_cdf(std_normal_quantile(0.1) / std::sqrt(1.0 - 0.12));
  EXPECT_NEAR(vasicek_cdf(median, m), 0.5, 1e-14);
  for (double v : {0.03, median, 0.2}) {
    const auto est = simulate_vasicek_cdf(v, m, mc(1'000'000));
    EXPECT_LE(std::abs(est.z_score(vasicek_cdf(v, m))), 3.0) << "v=" << v;
  }
}

TEST(MixtureTailProb, AllDefaultedIsCertain) {
  EXPECT_EQ(mixture_tail_prob(10, 10, {0.3, 0.2}), 1.0);
}

TEST(MixtureTailProb, NoCorrelationIsBinomial) {
  for (std::int64_t n : {1, 6, 50, 800}) {
    for (std::int64_t k : {0, 1, 3}) {
      if (k > n) continue;
      for (double p : {0.001, 0.0249, 0.2}) {
        EXPECT_NEAR(mixture_tail_prob(n, k, {p, 0.0}), binomial_cdf(n, k, p), 1e-12);
      }
    }
  }
}

TEST(MixtureTailProb, CorrelatedBoundCell) {
  EXPECT_NEAR(mixture_tail_prob(800, 3, {0.0249, 0.12}), 0.10, 0.002);
}

TEST(MixtureTailProb, ThreeRepresentationsAgree) {
  for (std::int64_t n : {5, 50, 800}) {
    for (std::int64_t k : {0, 1, 3}) {
      for (double p : {0.005, 0.05, 0.2}) {
        for (double rho : {0.05, 0.12, 0.5}) {
          const FactorModelParams m{p, rho};
          const double sum = mixture_tail_prob(n, k, m);
          const double beta = mixture_tail_prob_beta_form(n, k, m);
          const double unit = mixture_tail_prob_unit_interval(n, k, m);
          EXPECT_NEAR(sum, beta, 1e-8) << n << "," << k << "," << p << "," << rho;
          EXPECT_NEAR(sum, unit, 1e-8) << n << "," << k << "," << p << "," << rho;
          EXPECT_NEAR(beta, unit, 1e-8) << n << "," << k << "," << p << "," << rho;
        }
      }
    }
  }
}

TEST(MixtureTailProb, SmallExample) {
  const double v = mixture_tail_prob(6, 1, {0.1, 0.5});
  EXPECT_NEAR(v, mixture_tail_prob_unit_interval(6, 1, {0.1, 0.5}), 1e-10);
  EXPECT_NEAR(v, mixture_pmf(6, 0, {0.1, 0.5}) + mixture_pmf(6, 1, {0.1, 0.5}), 1e-12);
}

TEST(FCdf, NoCorrelationIsBetaNormal) {
  const MixtureShape s{797, 4, 0.0};
  for (double y : {-1.0, 2.0, 2.61, 3.5}) {
    EXPECT_NEAR(f_cdf(y, s), beta_cdf(std_normal_cdf(y), {797, 4}), 1e-13);
  }
}

TEST(FCdf, TableCells) {
  // 2.61 is the rounded quantile 2.6137; F' there is about 0.97
  const MixtureShape s{797, 4, 0.12};
  EXPECT_NEAR(f_cdf(2.61, s), 0.4963849163874, 1e-9);  // scipy quad + beta.cdf
  EXPECT_LT(f_cdf(2.605, s), 0.5);
  EXPECT_GT(f_cdf(2.615, s), 0.5);
  EXPECT_NEAR(f_cdf(0.91, {149, 2, 0.12}), 0.001, 0.0005);
}

TEST(FCdf, CdfAxioms) {
  for (const MixtureShape& s : {MixtureShape{797, 4, 0.12}, MixtureShape{5, 2, 0.5},
                                MixtureShape{149, 2, 0.12}}) {
    double prev = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double y = -6.0 + 12.0 * i / 199.0;
      const double v = f_cdf(y, s);
      EXPECT_GE(v, prev - 1e-15);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      prev = v;
    }
    EXPECT_LT(f_cdf(-30.0, s), 1e-12);
    EXPECT_GT(f_cdf(30.0, s), 1.0 - 1e-12);
  }
}

TEST(FQuantile, TableCells) {
  EXPECT_NEAR(f_quantile(0.5, {797, 4, 0.12}), 2.61, 0.01);
  EXPECT_NEAR(f_quantile(0.01, {396, 5, 0.12}), 1.33, 0.01);
}

TEST(FQuantile, ResidualAndNoCorrelationComposition) {
  for (double prob : {1e-4, 0.01, 0.25, 0.5, 0.9, 0.999}) {
    const MixtureShape s{149, 2, 0.12};
    const auto sol = f_quantile_solve(prob, s);
    EXPECT_LE(std::abs(sol.residual), 1e-8);
    EXPECT_NEAR(f_cdf(sol.y, s), prob, 1e-8);

    const MixtureShape flat{149, 2, 0.0};
    EXPECT_NEAR(f_quantile(prob, flat),
                std_normal_quantile(beta_quantile(prob, {149, 2})), 1e-8);
  }
}

TEST(FQuantile, RejectsBadProbability) {
  EXPECT_THROW(f_quantile(0.0, {5, 2, 0.1}), DomainError);
  EXPECT_THROW(f_quantile(1.0, {5, 2, 0.1}), DomainError);
}

TEST(CorrelatedBound, KnownValues) {
  EXPECT_NEAR(100.0 * correlated(800, 3, 0.9, 0.12).p_upper, 2.49, 0.01);
  EXPECT_NEAR(100.0 * correlated(150, 1, 0.999, 0.12).p_upper, 19.76, 0.02);
}

TEST(CorrelatedBound, NoCorrelationMatchesIndependent) {
  for (auto [n, k] : std::vector<std::pair<std::int64_t, std::int64_t>>{{800, 3}, {150, 1}, {20, 0}}) {
    for (double gamma : {0.5, 0.9, 0.999}) {
      EXPECT_NEAR(correlated(n, k, gamma, 0.0).p_upper, independent_bound(n, k, gamma), 1e-9);
    }
  }
}

TEST(CorrelatedBound, DefiningEquationOnTableCells) {
  const std::vector<std::pair<std::int64_t, std::int64_t>> cases = {
      {800, 3}, {700, 3}, {300, 1}, {1500, 7}, {1100, 5}, {400, 4}, {150, 1}};
  for (auto [n, k] : cases) {
    for (double gamma : {0.5, 0.75, 0.9, 0.95, 0.99, 0.999}) {
      const auto r = correlated(n, k, gamma, 0.12);
      EXPECT_NEAR(mixture_tail_prob(n, k, {r.p_upper, 0.12}), 1.0 - gamma, 1e-6);
      EXPECT_LE(std::abs(r.residual), 1e-6);
      EXPECT_NEAR(r.p_upper, std_normal_cdf(-std::sqrt(0.88) * r.quantile), 1e-15);
    }
  }
}

TEST(CorrelatedBound, EdgeCases) {
  const auto r = correlated(10, 10, 0.9, 0.3);
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.p_upper, 1.0);
  EXPECT_THROW(correlated(10, 1, 0.9, 1.0), DomainError);
  EXPECT_THROW(correlated(10, 1, 0.9, -0.1), DomainError);
  EXPECT_THROW(pd_upper_bound_correlated(BoundQuery{10, 1, 0.9, std::nullopt}), DomainError);
}

TEST(TildeF, LimitsAndCell) {
  const MixtureShape s{797, 4, 0.12};
  EXPECT_LT(tilde_f_cdf(1e-12, s), 1e-10);
  EXPECT_GT(tilde_f_cdf(1.0 - 1e-12, s), 1.0 - 1e-10);
  EXPECT_NEAR(tilde_f_cdf(0.0249, s), 0.90, 0.002);
}

TEST(TildeF, MonotoneAndBounded) {
  const MixtureShape s{149, 2, 0.12};
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = tilde_f_cdf(i / 201.0, s);
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(TildeF, EquivalentToBoundCondition) {
  for (double gamma : {0.5, 0.9, 0.99}) {
    const auto r = correlated(800, 3, gamma, 0.12);
    const MixtureShape s{797, 4, 0.12};
    for (int i = 0; i < 50; ++i) {
      const double p = r.p_upper * (0.5 + i / 49.0);
      if (std::abs(p - r.p_upper) < 1e-7 * r.p_upper) continue;
      EXPECT_EQ(tilde_f_cdf(p, s) <= gamma, p <= r.p_upper) << "gamma=" << gamma << " p=" << p;
    }
    EXPECT_NEAR(tilde_f_cdf(r.p_upper, s), gamma, 1e-8);
  }
}

TEST(MixturePmf, KnownValues) {
  for (double rho : {0.0, 0.2, 0.7}) EXPECT_NEAR(mixture_pmf(1, 1, {0.13, rho}), 0.13, 1e-10);
  for (std::int64_t i = 0; i <= 8; ++i) {
    EXPECT_NEAR(mixture_pmf(8, i, {0.2, 0.0}), oracle::binomial_pmf(8, i, 0.2), 1e-14);
  }
}

TEST(MixturePmf, NormalizedAndConsistentWithTail) {
  for (std::int64_t n : {6, 40}) {
    for (double rho : {0.12, 0.5}) {
      const FactorModelParams m{0.1, rho};
      double total = 0.0;
      for (std::int64_t i = 0; i <= n; ++i) {
        total += mixture_pmf(n, i, m);
        EXPECT_NEAR(total, mixture_tail_prob(n, i, m), 1e-9);
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(MixturePmf, MatchesDefaultSimulation) {
  const FactorModelParams m{0.1, 0.5};
  const auto est = simulate_default_count_pmf(6, 1, m, mc(10'000'000));
  EXPECT_LE(std::abs(est.z_score(mixture_pmf(6, 1, m))), 3.0);
}

TEST(MixtureMgf, KnownValues) {
  EXPECT_NEAR(mixture_mgf(0.0, 6, {0.1, 0.5}), 1.0, 1e-10);
  EXPECT_NEAR(mixture_mgf(0.0, 800, {0.02, 0.12}), 1.0, 1e-10);
  for (double t : {-1.0, 0.5, 2.0}) {
    EXPECT_NEAR(mixture_mgf(t, 6, {0.1, 0.0}), std::pow(0.9 + 0.1 * std::exp(t), 6), 1e-12);
  }
}

TEST(MixtureMgf, EqualsPmfWeightedSum) {
  for (double t : {-2.0, 1.0}) {
    const FactorModelParams m{0.1, 0.5};
    double sum = 0.0;
    for (std::int64_t i = 0; i <= 6; ++i) sum += std::exp(t * i) * mixture_pmf(6, i, m);
    EXPECT_NEAR(mixture_mgf(t, 6, m), sum, 1e-8);
  }
}

TEST(CopulaDiagonal, KnownValues) {
  for (double rho : {0.0, 0.3, 0.9}) EXPECT_NEAR(copula_diagonal(1, {0.1, rho}), 0.9, 1e-10);
  for (std::int64_t n : {2, 5, 30}) {
    EXPECT_NEAR(copula_diagonal(n, {0.1, 0.0}), std::pow(0.9, static_cast<double>(n)), 1e-14);
  }
}

TEST(CopulaDiagonal, EqualsZeroDefaultTail) {
  for (std::int64_t n : {1, 2, 5, 40, 800}) {
    for (double p : {0.001, 0.05, 0.3}) {
      for (double rho : {0.0, 0.12, 0.5, 0.9}) {
        const FactorModelParams m{p, rho};
        EXPECT_NEAR(copula_diagonal(n, m), mixture_tail_prob(n, 0, m), 1e-10);
      }
    }
  }
}

TEST(CopulaDiagonal, MatchesOrthantSimulation) {
  const FactorModelParams m{0.1, 0.3};
  const auto est = simulate_copula_diagonal(5, m, mc(10'000'000));
  EXPECT_LE(std::abs(est.z_score(copula_diagonal(5, m))), 3.0);
}

TEST(EquicorrDensity, KnownValues) {
  for (double x : {-1.3, 0.0, 2.2}) {
    const double pt[] = {x};
    EXPECT_NEAR(equicorr_density(pt, 0.7), std_normal_pdf(x), 1e-16);
  }
  const double origin[] = {0.0, 0.0, 0.0};
  EXPECT_NEAR(equicorr_density(origin, 0.0), std::pow(2.0 * std::numbers::pi, -1.5), 1e-16);
}

TEST(EquicorrDensity, MatchesDenseMatrixOracle) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (double rho : {0.0, 0.12, 0.5, 0.95}) {
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> pt(n);
        for (auto& x : pt) x = normal(rng);
        const double ref = oracle::mvn_density(pt, oracle::equicorrelation(n, rho));
        EXPECT_NEAR(equicorr_density(pt, rho) / ref, 1.0, 1e-10) << "n=" << n << " rho=" << rho;
      }
    }
  }
}

TEST(EquicorrDensity, RejectsSingular) {
  const double pt[] = {0.1, 0.2};
  EXPECT_THROW(equicorr_density(pt, 1.0), DomainError);
  EXPECT_THROW(equicorr_density({}, 0.2), DomainError);
}

}  // namespace
