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

// Monte-Carlo oracles for the one-factor model, the equicorrelated Gaussian
// orthant probability and the joint-distribution representations of the
// mixture CDF. They share no code path with the quadrature routines beyond
// the normal CDF/quantile kernel.
//
// Reproducibility: trials are split into chunks of McConfig::chunk_size.
// Chunk c of stream s draws from std::mt19937_64 seeded with
// std::seed_seq{seed_lo, seed_hi, s, c_lo, c_hi}; chunk results are integer
// counts combined in chunk order, so estimates are bit-identical for any
// thread count. Normal variates are Phi^{-1}(U), gamma variates use
// Marsaglia-Tsang, beta variates are gamma ratios.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "ldpd/errors.hpp"
#include "ldpd/numeric_config.hpp"
#include "ldpd/specfun.hpp"
#include "ldpd/vasicek_mixture.hpp"

namespace ldpd {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;

  static McEstimate from_count(std::uint64_t successes, std::uint64_t trials) {
    const double m = static_cast<double>(successes) / static_cast<double>(trials);
    return {m, std::sqrt(m * (1.0 - m) / static_cast<double>(trials)), trials};
  }

  /// (mean - reference) / std_error; 0 when both coincide exactly.
  double z_score(double reference) const {
    const double d = mean - reference;
    if (std_error > 0.0) return d / std_error;
    return d == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), d);
  }
};

/// Sampling routes for P(Phi(sqrt(rho) X - sqrt(1-rho) Y) > p).
enum class JointForm {
  kNormalBetaNormal,   // X ~ N(0,1), Y ~ beta-normal(n-k, k+1)
  kUniformBetaNormal,  // X = Phi^{-1}(Z), Z ~ U(0,1), Y ~ beta-normal
  kUniformBeta,        // X = Phi^{-1}(Z), Y = Phi^{-1}(W), W ~ Beta(n-k, k+1)
};

/// Chunk-local random source.
class McRng {
 public:
  McRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t chunk)
      : engine_(make_seed(seed, stream, chunk)) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

  /// Inverse-CDF normal from the AS 241 rational approximation, without the
  /// Halley polish applied by std_normal_quantile.
  double normal() {
    const double u = uniform();
    return u < 0.5 ? detail::norm_quantile_as241(u) : -detail::norm_quantile_as241(1.0 - u);
  }

  double gamma(double shape) {
    if (shape < 1.0) {
      // Gamma(a) = Gamma(a + 1) * U^(1/a)
      return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Beta(a, b) variate as (w, 1 - w), the complement formed without cancellation.
  std::pair<double, double> beta(double a, double b) {
    const double ga = gamma(a);
    const double gb = gamma(b);
    const double s = ga + gb;
    return {ga / s, gb / s};
  }

 private:
  static std::seed_seq make_seed(std::uint64_t seed, std::uint32_t stream, std::uint64_t chunk) {
    return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         stream, static_cast<std::uint32_t>(chunk),
                         static_cast<std::uint32_t>(chunk >> 32)};
  }

  // seed_seq is not copyable, so the engine is built through a reference.
  struct Engine : std::mt19937_64 {
    explicit Engine(std::seed_seq&& s) : std::mt19937_64(s) {}
  };
  Engine engine_;
};

namespace detail {

/// Runs cfg.trials Bernoulli trials in deterministic chunks across threads.
/// trial(McRng&) returns true on success.
template <class Trial>
McEstimate run_trials(const McConfig& cfg, std::uint32_t stream, const Trial& trial) {
  validate(cfg);
  const std::uint64_t chunk = std::min(cfg.chunk_size, cfg.trials);
  const std::uint64_t n_chunks = (cfg.trials + chunk - 1) / chunk;
  std::vector<std::uint64_t> successes(n_chunks, 0);

  auto run_chunk = [&](std::uint64_t c) {
    McRng rng(cfg.seed, stream, c);
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(begin + chunk, cfg.trials);
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) hits += trial(rng) ? 1 : 0;
    successes[c] = hits;
  };

  unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, n_chunks));
  if (threads == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) run_chunk(c);
      });
    }
  }

  std::uint64_t total = 0;
  for (auto s : successes) total += s;
  return McEstimate::from_count(total, cfg.trials);
}

// Stream identifiers keep the samplers' random sequences disjoint.
enum : std::uint32_t {
  kStreamDefaultTail = 1,
  kStreamDefaultPmf = 2,
  kStreamCopula = 3,
  kStreamJoint = 10,  // + form index
  kStreamConditional = 20,
  kStreamVasicek = 21,
};

}  // namespace detail

/// P(D <= k): per trial one systematic draw S, then n idiosyncratic draws,
/// each obligor defaulting when sqrt(rho) S + sqrt(1-rho) xi < Phi^{-1}(p).
inline McEstimate simulate_default_count_tail(std::int64_t n, std::int64_t k,
                                              const FactorModelParams& m,
                                              const McConfig& cfg) {
  validate(BoundQuery{n, k, 0.5, std::nullopt});
  validate(m);
  const double threshold = std_normal_quantile(m.p);
  const double a = std::sqrt(m.rho);
  const double b = std::sqrt(1.0 - m.rho);
  return detail::run_trials(cfg, detail::kStreamDefaultTail, [&](McRng& rng) {
    const double s = rng.normal();
    std::int64_t defaults = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (a * s + b * rng.normal() < threshold && ++defaults > k) return false;
    }
    return true;
  });
}

/// P(D = i) by the same default simulation.
inline McEstimate simulate_default_count_pmf(std::int64_t n, std::int64_t i,
                                             const FactorModelParams& m, const McConfig& cfg) {
  validate(BoundQuery{n, i, 0.5, std::nullopt});
  validate(m);
  const double threshold = std_normal_quantile(m.p);
  const double a = std::sqrt(m.rho);
  const double b = std::sqrt(1.0 - m.rho);
  return detail::run_trials(cfg, detail::kStreamDefaultPmf, [&](McRng& rng) {
    const double s = rng.normal();
    std::int64_t defaults = 0;
    for (std::int64_t j = 0; j < n; ++j) {
      if (a * s + b * rng.normal() < threshold && ++defaults > i) return false;
    }
    return defaults == i;
  });
}

/// Orthant probability P(Z_1 < -Phi^{-1}(p), ..., Z_n < -Phi^{-1}(p)) with
/// Z_i = sqrt(1-rho) Y_i - sqrt(rho) X.
inline McEstimate simulate_copula_diagonal(std::int64_t n, const FactorModelParams& m,
                                           const McConfig& cfg) {
  validate(BoundQuery{n, 0, 0.5, std::nullopt});
  validate(m);
  const double level = -std_normal_quantile(m.p);
  const double a = std::sqrt(m.rho);
  const double b = std::sqrt(1.0 - m.rho);
  return detail::run_trials(cfg, detail::kStreamCopula, [&](McRng& rng) {
    const double x = rng.normal();
    for (std::int64_t i = 0; i < n; ++i) {
      if (!(b * rng.normal() - a * x < level)) return false;
    }
    return true;
  });
}

/// P(Phi(sqrt(rho) X - sqrt(1-rho) Y) > p) under one of the three sampling
/// routes; each equals P(D <= k).
inline McEstimate simulate_joint_form(JointForm form, std::int64_t n, std::int64_t k,
                                      const FactorModelParams& m, const McConfig& cfg) {
  validate(BoundQuery{n, k, 0.5, std::nullopt});
  if (k == n) throw DomainError("simulate_joint_form: requires k < n");
  validate(m);
  const double a = static_cast<double>(n - k);
  const double b = static_cast<double>(k + 1);
  const double sr = std::sqrt(m.rho);
  const double sc = std::sqrt(1.0 - m.rho);
  const double p = m.p;
  auto beta_normal = [&](McRng& rng) {
    const auto [w, wc] = rng.beta(a, b);
    return w < 0.5 ? detail::norm_quantile_lower(w) : -detail::norm_quantile_lower(wc);
  };
  const auto stream = detail::kStreamJoint + static_cast<std::uint32_t>(form);
  switch (form) {
    case JointForm::kNormalBetaNormal:
      return detail::run_trials(cfg, stream, [&](McRng& rng) {
        const double x = rng.normal();
        const double y = beta_normal(rng);
        return detail::norm_cdf(sr * x - sc * y) > p;
      });
    case JointForm::kUniformBetaNormal:
      return detail::run_trials(cfg, stream, [&](McRng& rng) {
        const double z = rng.uniform();
        const double y = beta_normal(rng);
        return detail::norm_cdf(sr * detail::inverse_normal_from_pair(z, 1.0 - z) - sc * y) > p;
      });
    case JointForm::kUniformBeta:
      return detail::run_trials(cfg, stream, [&](McRng& rng) {
        const double z = rng.uniform();
        const auto [w, wc] = rng.beta(a, b);
        return detail::norm_cdf(sr * detail::inverse_normal_from_pair(z, 1.0 - z) -
                                sc * detail::inverse_normal_from_pair(w, wc)) > p;
      });
  }
  throw DomainError("simulate_joint_form: unknown form");
}

/// Default frequency of a single obligor given S = x.
inline McEstimate simulate_conditional_default(const FactorModelParams& m, double x,
                                               const McConfig& cfg) {
  validate(m);
  const double threshold = std_normal_quantile(m.p);
  const double systematic = std::sqrt(m.rho) * x;
  const double b = std::sqrt(1.0 - m.rho);
  return detail::run_trials(cfg, detail::kStreamConditional, [&](McRng& rng) {
    return systematic + b * rng.normal() < threshold;
  });
}

/// Empirical Vasicek CDF at v: frequency of g(S) <= v.
inline McEstimate simulate_vasicek_cdf(double v, const FactorModelParams& m,
                                       const McConfig& cfg) {
  validate(m);
  const double xp = std_normal_quantile(m.p);
  const double sr = std::sqrt(m.rho);
  const double sc = std::sqrt(1.0 - m.rho);
  return detail::run_trials(cfg, detail::kStreamVasicek, [&](McRng& rng) {
    return detail::norm_cdf((xp - sr * rng.normal()) / sc) <= v;
  });
}

/// count Beta(alpha, beta) variates from one chunk stream.
inline std::vector<double> sample_beta(const ShapeParams& shape, std::size_t count,
                                       std::uint64_t seed) {
  validate(shape);
  McRng rng(seed, 0, 0);
  std::vector<double> out(count);
  for (auto& w : out) w = rng.beta(shape.alpha, shape.beta).first;
  return out;
}

}  // namespace ldpd
