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

#include <cstddef>
#include <cstdint>

#include "ldpd/errors.hpp"
#include "ldpd/quadrature.hpp"

namespace ldpd {

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0x5eed'2006'0b1d'7a5cULL;
  /// Trials per independently seeded chunk. The estimate depends only on
  /// (trials, seed, chunk_size), never on the thread count.
  std::uint64_t chunk_size = 1 << 16;
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

inline void validate(const McConfig& c) {
  if (c.trials < 1) throw DomainError("Monte-Carlo trials must be >= 1");
  if (c.chunk_size < 1) throw DomainError("Monte-Carlo chunk_size must be >= 1");
}

struct NumericConfig {
  QuadratureSpec quadrature;
  double quantile_width_tol = 1e-10;
  double independent_residual_tol = 1e-10;
  double correlated_residual_tol = 1e-6;
  McConfig mc;
};

}  // namespace ldpd
