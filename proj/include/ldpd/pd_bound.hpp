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

#include "ldpd/binomial_bound.hpp"
#include "ldpd/numeric_config.hpp"
#include "ldpd/vasicek_mixture.hpp"

namespace ldpd {

/// Routes a query to the independent model (rho absent) or the one-factor
/// model (rho present).
inline BoundResult pd_upper_bound(const BoundQuery& q, const NumericConfig& cfg = {}) {
  if (q.rho) {
    return pd_upper_bound_correlated(q, cfg.quadrature, cfg.correlated_residual_tol,
                                     cfg.quantile_width_tol);
  }
  return pd_upper_bound_independent(q, cfg.independent_residual_tol);
}

}  // namespace ldpd
