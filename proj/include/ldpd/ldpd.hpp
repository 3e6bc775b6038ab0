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
#include "ldpd/conservatism.hpp"
#include "ldpd/errors.hpp"
#include "ldpd/mc_oracle.hpp"
#include "ldpd/numeric_config.hpp"
#include "ldpd/pd_bound.hpp"
#include "ldpd/portfolio_io.hpp"
#include "ldpd/quadrature.hpp"
#include "ldpd/roots.hpp"
#include "ldpd/specfun.hpp"
#include "ldpd/tables.hpp"
#include "ldpd/vasicek_mixture.hpp"
