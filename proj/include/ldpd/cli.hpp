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

// Command-line front end. run_cli() takes the arguments after the program
// name and writes to the given streams so it can be driven from tests.
//
//   bound      --n --k --gamma... [--rho]
//   portfolio  FILE --gamma... [--rho] [--remediate] | --emit-template
//   quantile   --prob --a --b --rho
//   density    --kind {f-density,tilde-f-density,vasicek} [--cdf] grid/params
//   tables     WHICH [--diff]
//   mc-check   --n --k --p --rho --trials --seed

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ldpd/conservatism.hpp"
#include "ldpd/errors.hpp"
#include "ldpd/mc_oracle.hpp"
#include "ldpd/numeric_config.hpp"
#include "ldpd/pd_bound.hpp"
#include "ldpd/portfolio_io.hpp"
#include "ldpd/tables.hpp"
#include "ldpd/vasicek_mixture.hpp"

namespace ldpd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kParse = 3,
  kNumeric = 4,
  kMcDisagreement = 5,
  kTableMismatch = 6,
};

/// Round half away from zero to the given number of decimals.
inline double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

inline std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_away(value, decimals));
  return buf;
}

inline std::string full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

/// Probability rendered as a two-decimal percentage, e.g. 0.00833 -> "0.83%".
inline std::string percent(double p) { return fixed(100.0 * p, 2) + "%"; }

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

enum class Format { kTable, kCsv };

struct CommonOptions {
  std::size_t nodes = QuadratureSpec{}.node_count;
  double tol = QuadratureSpec{}.abs_tol;
  std::string format = "table";

  NumericConfig numeric() const {
    NumericConfig cfg;
    cfg.quadrature.node_count = nodes;
    cfg.quadrature.abs_tol = tol;
    return cfg;
  }
  Format fmt() const { return format == "csv" ? Format::kCsv : Format::kTable; }
};

inline void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--nodes", o.nodes, "Gauss-Legendre node count")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
  sub->add_option("--tol", o.tol, "quadrature absolute tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "csv"}));
}

namespace detail {

inline void check_gammas(const std::vector<double>& gammas) {
  if (gammas.empty()) throw DomainError("at least one --gamma is required");
  for (double g : gammas) {
    if (!(g > 0.0 && g < 1.0)) throw DomainError("--gamma must lie in (0, 1)");
  }
}

inline void check_rho(const std::optional<double>& rho) {
  if (rho) validate_rho(*rho);
}

inline std::string rho_text(const std::optional<double>& rho) {
  return rho ? full(*rho) : std::string("none");
}

// --- bound ---------------------------------------------------------------

struct BoundArgs {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::vector<double> gammas;
  std::optional<double> rho;
  CommonOptions common;
};

inline int cmd_bound(const BoundArgs& a, std::ostream& out) {
  check_gammas(a.gammas);
  check_rho(a.rho);
  const auto cfg = a.common.numeric();
  if (a.common.fmt() == Format::kCsv) {
    out << "n,k,gamma,rho,p_upper_pct,p_upper,residual,iterations,quantile,vacuous\n";
  }
  for (double gamma : a.gammas) {
    const auto r = pd_upper_bound(BoundQuery{a.n, a.k, gamma, a.rho}, cfg);
    if (a.common.fmt() == Format::kCsv) {
      out << a.n << ',' << a.k << ',' << full(gamma) << ',' << rho_text(a.rho) << ','
          << fixed(100.0 * r.p_upper, 2) << ',' << full(r.p_upper) << ',' << full(r.residual)
          << ',' << r.iterations << ',' << full(r.quantile) << ',' << (r.vacuous ? 1 : 0)
          << '\n';
      continue;
    }
    out << "n=" << a.n << " k=" << a.k << " gamma=" << full(gamma)
        << " rho=" << rho_text(a.rho) << '\n';
    if (r.vacuous) {
      out << "  p_upper    100.00% (k = n: every p satisfies the inequality, bound is vacuous)\n";
      continue;
    }
    out << "  p_upper    " << percent(r.p_upper) << '\n'
        << "  value      " << full(r.p_upper) << '\n'
        << "  residual   " << full(r.residual) << '\n'
        << "  iterations " << r.iterations << '\n'
        << "  quantile   " << full(r.quantile) << '\n';
  }
  return kOk;
}

// --- portfolio -----------------------------------------------------------

struct PortfolioArgs {
  std::string file;
  std::vector<double> gammas;
  std::optional<double> rho;
  bool remediate = false;
  bool emit_template = false;
  CommonOptions common;
};

inline void render_report(const GradeBoundReport& rep, Format fmt, std::ostream& out) {
  auto reversed = [&](std::size_t j) {
    for (const auto& r : rep.reversals) {
      if (r.riskier == j) return true;
    }
    return false;
  };
  const bool adjusted = !rep.adjusted_k.empty();
  if (fmt == Format::kCsv) {
    for (std::size_t j = 0; j < rep.grades.size(); ++j) {
      const auto& g = rep.grades[j];
      out << full(rep.gamma) << ',' << rho_text(rep.rho) << ',' << g.name << ',' << g.n_used
          << ',' << g.k_used << ',' << fixed(100.0 * g.bound.p_upper, 2) << ','
          << full(g.bound.p_upper) << ',' << (reversed(j) ? 1 : 0) << ','
          << (adjusted ? rep.adjusted_k[j] : 0) << '\n';
    }
    return;
  }
  out << "gamma=" << full(rep.gamma) << " rho=" << rho_text(rep.rho) << '\n';
  out << "  " << pad_right("grade", 8) << pad("n", 7) << pad("k", 5) << pad("p_upper", 10)
      << (adjusted ? pad("+k", 5) : "") << '\n';
  for (std::size_t j = 0; j < rep.grades.size(); ++j) {
    const auto& g = rep.grades[j];
    out << "  " << pad_right(g.name, 8) << pad(std::to_string(g.n_used), 7)
        << pad(std::to_string(g.k_used), 5)
        << pad(percent(g.bound.p_upper) + (reversed(j) ? "*" : " "), 10)
        << (adjusted ? pad(std::to_string(rep.adjusted_k[j]), 5) : "") << '\n';
  }
  for (const auto& r : rep.reversals) {
    out << "  * reversal: " << rep.grades[r.riskier].name << " ("
        << percent(rep.grades[r.riskier].bound.p_upper) << ") below "
        << rep.grades[r.safer].name << " (" << percent(rep.grades[r.safer].bound.p_upper)
        << ")\n";
  }
  if (rep.unresolved) out << "  remediation unresolved: default cap reached\n";
}

inline int cmd_portfolio(const PortfolioArgs& a, std::ostream& out) {
  if (a.emit_template) {
    write_portfolio(out, a.file.empty() ? three_grade_example() : read_portfolio_file(a.file));
    return kOk;
  }
  if (a.file.empty()) throw DomainError("portfolio: a FILE argument is required");
  check_gammas(a.gammas);
  check_rho(a.rho);
  const auto pf = read_portfolio_file(a.file);
  const auto cfg = a.common.numeric();
  if (a.common.fmt() == Format::kCsv) {
    out << "gamma,rho,grade,n_used,k_used,p_upper_pct,p_upper,reversal,k_increment\n";
  }
  int code = kOk;
  for (double gamma : a.gammas) {
    auto rep = estimate_grades(pf, gamma, a.rho, cfg);
    if (a.remediate && !rep.reversals.empty()) {
      if (a.common.fmt() == Format::kTable) {
        render_report(rep, Format::kTable, out);
        out << "  after remediation:\n";
      }
      rep = remediate_reversal(rep, pf, gamma, a.rho, cfg);
      if (rep.unresolved) code = kNumeric;
    }
    render_report(rep, a.common.fmt(), out);
  }
  return code;
}

// --- quantile ------------------------------------------------------------

struct QuantileArgs {
  double prob = 0.0;
  double a = 0.0;
  double b = 0.0;
  double rho = 0.0;
  CommonOptions common;
};

inline int cmd_quantile(const QuantileArgs& a, std::ostream& out) {
  const auto cfg = a.common.numeric();
  const MixtureShape s{a.a, a.b, a.rho};
  const auto sol = f_quantile_solve(a.prob, s, cfg.quadrature, cfg.quantile_width_tol);
  if (a.common.fmt() == Format::kCsv) {
    out << "prob,a,b,rho,quantile_2dp,quantile,residual\n"
        << full(a.prob) << ',' << full(a.a) << ',' << full(a.b) << ',' << full(a.rho) << ','
        << fixed(sol.y, 2) << ',' << full(sol.y) << ',' << full(sol.residual) << '\n';
    return kOk;
  }
  out << "F^-1(" << full(a.prob) << "; a=" << full(a.a) << ", b=" << full(a.b)
      << ", rho=" << full(a.rho) << ") = " << fixed(sol.y, 2) << '\n'
      << "  value    " << full(sol.y) << '\n'
      << "  residual " << full(sol.residual) << '\n';
  if (a.rho == 0.0) {
    out << "  rho=0 composition Phi^-1(I^-1_{a,b}(prob)) = "
        << full(std_normal_quantile(beta_quantile(a.prob, {a.a, a.b}))) << '\n';
  }
  return kOk;
}

// --- density -------------------------------------------------------------

struct DensityArgs {
  std::string kind;
  double alpha = 5.0;
  double beta = 2.0;
  double rho = 0.5;
  double p = 0.1;
  std::optional<double> from;
  std::optional<double> to;
  double step = 0.01;
  bool cdf = false;
  CommonOptions common;
};

inline constexpr double kDensityStep = 1e-4;

inline int cmd_density(const DensityArgs& a, std::ostream& out) {
  const auto cfg = a.common.numeric();
  const bool on_unit_interval = a.kind != "f-density";
  const double from = a.from.value_or(on_unit_interval ? 0.001 : -4.0);
  const double to = a.to.value_or(on_unit_interval ? 0.999 : 4.0);
  if (!(a.step > 0.0) || !(to > from)) throw DomainError("density: need --to > --from and --step > 0");
  if (on_unit_interval && !(from > 0.0 && to < 1.0)) {
    throw DomainError("density: grid must lie inside (0, 1) for " + a.kind);
  }

  std::function<double(double)> cdf;
  if (a.kind == "f-density") {
    const MixtureShape s{a.alpha, a.beta, a.rho};
    validate(s);
    cdf = [s, q = cfg.quadrature](double y) { return f_cdf(y, s, q); };
  } else if (a.kind == "tilde-f-density") {
    const MixtureShape s{a.alpha, a.beta, a.rho};
    validate(s);
    cdf = [s, q = cfg.quadrature](double p) { return tilde_f_cdf(p, s, q); };
  } else {
    const FactorModelParams m{a.p, a.rho};
    validate(m);
    cdf = [m](double v) { return vasicek_cdf(v, m); };
  }

  out << "x," << (a.cdf ? "cdf" : "density") << '\n';
  const auto count = static_cast<std::int64_t>(std::floor((to - from) / a.step + 1e-9));
  for (std::int64_t i = 0; i <= count; ++i) {
    const double x = from + static_cast<double>(i) * a.step;
    double value;
    if (a.cdf) {
      value = cdf(x);
    } else {
      double h = kDensityStep;
      if (on_unit_interval) h = std::min({h, 0.5 * x, 0.5 * (1.0 - x)});
      // Central difference; quadrature noise can leave tiny negatives in
      // flat regions, which are clamped.
      value = std::max(0.0, (cdf(x + h) - cdf(x - h)) / (2.0 * h));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f,%.12g\n", x, value);
    out << buf;
  }
  return kOk;
}

// --- tables --------------------------------------------------------------

struct TablesArgs {
  int which = 0;
  bool diff = false;
  CommonOptions common;
};

inline int cmd_tables(const TablesArgs& a, std::ostream& out) {
  const auto r = compute_table(a.which, a.common.numeric());
  const auto& ref = *r.reference;
  const bool is_bound = ref.kind != TableKind::kQuantile;
  auto cell = [&](double v) { return is_bound ? fixed(v, 2) + "%" : fixed(v, 2); };
  auto flagged = [&](std::size_t g, std::size_t c) {
    for (const auto& rev : r.reversals[c]) {
      if (rev.riskier == g) return true;
    }
    return false;
  };

  if (a.common.fmt() == Format::kCsv) {
    out << "table,grade,n,k,gamma,value,expected,deviation,reversal\n";
    for (std::size_t g = 0; g < r.computed.size(); ++g) {
      for (std::size_t c = 0; c < kTableGammas.size(); ++c) {
        out << ref.id << ',' << r.allocation[g].name << ',' << r.allocation[g].n_used << ','
            << r.allocation[g].k_used << ',' << full(kTableGammas[c]) << ','
            << full(r.computed[g][c]) << ',' << full(ref.expected[g][c]) << ','
            << full(r.computed[g][c] - ref.expected[g][c]) << ',' << (flagged(g, c) ? 1 : 0)
            << '\n';
      }
    }
  } else {
    out << "Table " << ref.id << ": " << ref.caption << '\n';
    out << pad_right("gamma", 16);
    for (double g : kTableGammas) out << pad(full(g), 9);
    out << '\n';
    for (std::size_t g = 0; g < r.computed.size(); ++g) {
      const auto& al = r.allocation[g];
      out << pad_right(al.name + " (" + std::to_string(al.n_used - al.k_used) + "," +
                           std::to_string(al.k_used + 1) + ")",
                       16);
      for (std::size_t c = 0; c < kTableGammas.size(); ++c) {
        out << pad(cell(r.computed[g][c]) + (flagged(g, c) ? "*" : " "), 9);
      }
      out << '\n';
    }
    for (std::size_t c = 0; c < kTableGammas.size(); ++c) {
      for (const auto& rev : r.reversals[c]) {
        out << "* reversal at gamma=" << full(kTableGammas[c]) << ": "
            << r.allocation[rev.riskier].name << " below " << r.allocation[rev.safer].name
            << '\n';
      }
    }
  }
  if (!a.diff) return kOk;

  out << "max deviation " << full(r.max_deviation) << " (tolerance " << full(ref.tolerance)
      << ")\n";
  for (const auto& d : r.out_of_tolerance) {
    out << "  mismatch " << r.allocation[d.row].name << " gamma=" << full(kTableGammas[d.column])
        << ": computed " << full(d.computed) << ", expected " << full(d.expected) << '\n';
  }
  out << (r.within_tolerance() ? "all cells within tolerance\n" : "cells out of tolerance\n");
  return r.within_tolerance() ? kOk : kTableMismatch;
}

// --- mc-check ------------------------------------------------------------

struct McCheckArgs {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double p = 0.0;
  double rho = 0.0;
  McConfig mc;
  CommonOptions common;
};

inline constexpr double kMcZLimit = 4.0;

inline int cmd_mc_check(const McCheckArgs& a, std::ostream& out) {
  const auto cfg = a.common.numeric();
  const FactorModelParams m{a.p, a.rho};
  const double quad = mixture_tail_prob(a.n, a.k, m, cfg.quadrature);
  const auto est = simulate_default_count_tail(a.n, a.k, m, a.mc);
  const double z = est.z_score(quad);
  const bool agree = std::abs(z) <= kMcZLimit;
  if (a.common.fmt() == Format::kCsv) {
    out << "n,k,p,rho,trials,seed,quadrature,mc_mean,mc_std_error,z\n"
        << a.n << ',' << a.k << ',' << full(a.p) << ',' << full(a.rho) << ',' << a.mc.trials
        << ',' << a.mc.seed << ',' << full(quad) << ',' << full(est.mean) << ','
        << full(est.std_error) << ',' << fixed(z, 4) << '\n';
  } else {
    out << "P(D <= " << a.k << "), n=" << a.n << " p=" << full(a.p) << " rho=" << full(a.rho)
        << '\n'
        << "  quadrature   " << full(quad) << '\n'
        << "  monte-carlo  " << full(est.mean) << " +- " << full(est.std_error) << " ("
        << a.mc.trials << " trials, seed " << a.mc.seed << ")\n"
        << "  z-score      " << fixed(z, 4) << '\n'
        << "  " << (agree ? "agree" : "DISAGREE") << " (|z| limit " << full(kMcZLimit) << ")\n";
  }
  return agree ? kOk : kMcDisagreement;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Upper confidence bounds for default probabilities in low-default portfolios",
               "ldpd"};
  app.require_subcommand(1);

  detail::BoundArgs bound;
  auto* sb = app.add_subcommand("bound", "PD upper bound for n obligors with k defaults");
  sb->add_option("--n", bound.n, "obligor count")->required();
  sb->add_option("--k", bound.k, "default count")->required();
  sb->add_option("--gamma", bound.gammas, "confidence level (repeatable)")
      ->allow_extra_args(false)->required();
  sb->add_option("--rho", bound.rho, "asset correlation; selects the one-factor model");
  add_common(sb, bound.common);

  detail::PortfolioArgs portfolio;
  auto* sp = app.add_subcommand("portfolio", "grade-wise bounds by the conservative pooling rule");
  sp->add_option("file", portfolio.file, "portfolio CSV (grade,obligors,defaults)");
  sp->add_option("--gamma", portfolio.gammas, "confidence level (repeatable)")
      ->allow_extra_args(false);
  sp->add_option("--rho", portfolio.rho, "asset correlation; selects the one-factor model");
  sp->add_flag("--remediate", portfolio.remediate, "raise defaults of reversed grades");
  sp->add_flag("--emit-template", portfolio.emit_template,
               "write FILE (or an example portfolio) in canonical form");
  add_common(sp, portfolio.common);

  detail::QuantileArgs quantile;
  auto* sq = app.add_subcommand("quantile", "quantile of F_{a,b,rho}");
  sq->add_option("--prob", quantile.prob, "probability in (0,1)")->required();
  sq->add_option("--a", quantile.a, "first shape (n - k)")->required();
  sq->add_option("--b", quantile.b, "second shape (k + 1)")->required();
  sq->add_option("--rho", quantile.rho, "asset correlation")->required();
  add_common(sq, quantile.common);

  detail::DensityArgs density;
  auto* sd = app.add_subcommand("density", "density or CDF data on a grid");
  sd->add_option("--kind", density.kind, "f-density | tilde-f-density | vasicek")
      ->required()
      ->check(CLI::IsMember({"f-density", "tilde-f-density", "vasicek"}));
  sd->add_option("--alpha", density.alpha, "first shape of F");
  sd->add_option("--beta", density.beta, "second shape of F");
  sd->add_option("--rho", density.rho, "asset correlation");
  sd->add_option("--p", density.p, "unconditional PD (vasicek)");
  sd->add_option("--from", density.from, "grid start");
  sd->add_option("--to", density.to, "grid end");
  sd->add_option("--step", density.step, "grid step");
  sd->add_flag("--cdf", density.cdf, "emit the CDF instead of the density");
  add_common(sd, density.common);

  detail::TablesArgs tables;
  auto* st = app.add_subcommand("tables", "regenerate a reference table (1-6)");
  st->add_option("which", tables.which, "table number")->required()->check(CLI::Range(1, 6));
  st->add_flag("--diff", tables.diff, "compare against the published values");
  add_common(st, tables.common);

  detail::McCheckArgs mc;
  auto* sm = app.add_subcommand("mc-check", "Monte-Carlo check of P(D <= k)");
  sm->add_option("--n", mc.n, "obligor count")->required();
  sm->add_option("--k", mc.k, "default count")->required();
  sm->add_option("--p", mc.p, "unconditional PD")->required();
  sm->add_option("--rho", mc.rho, "asset correlation")->required();
  sm->add_option("--trials", mc.mc.trials, "trials");
  sm->add_option("--seed", mc.mc.seed, "seed");
  sm->add_option("--chunk", mc.mc.chunk_size, "trials per chunk");
  sm->add_option("--threads", mc.mc.threads, "worker threads (0 = all cores)");
  add_common(sm, mc.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sb->parsed()) return detail::cmd_bound(bound, out);
    if (sp->parsed()) return detail::cmd_portfolio(portfolio, out);
    if (sq->parsed()) return detail::cmd_quantile(quantile, out);
    if (sd->parsed()) return detail::cmd_density(density, out);
    if (st->parsed()) return detail::cmd_tables(tables, out);
    if (sm->parsed()) return detail::cmd_mc_check(mc, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}

}  // namespace ldpd::cli
