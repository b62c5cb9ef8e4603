#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubemix/distances/bounds.hpp"
#include "cubemix/distances/chi2.hpp"
#include "cubemix/distances/mixing.hpp"
#include "cubemix/distances/tv.hpp"
#include "cubemix/experiments/config.hpp"
#include "cubemix/experiments/csv.hpp"
#include "cubemix/experiments/verify.hpp"
#include "cubemix/simulate/simulate.hpp"

namespace cubemix {

struct RunContext {
  ScalarMode mode = ScalarMode::log_float();
  std::uint64_t seed = 1;
  int workers = 0;
};

struct ScenarioOutput {
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  bool failed_verification = false;
};

inline constexpr std::int64_t kExactModeMaxN = 128;

namespace detail {

inline void require_exact_capacity(const RunContext& ctx, std::int64_t n) {
  if (ctx.mode.kind == ScalarMode::Exact && n > kExactModeMaxN)
    throw CapacityError("exact mode is the reference path for N <= 128; "
                        "use --mode logfloat at this size");
}

// least-squares fit y = a + b x; returns (slope, r2)
inline std::pair<double, double> least_squares(const std::vector<double>& xs,
                                               const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double xb = 0, yb = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xb += xs[i];
    yb += ys[i];
  }
  xb /= n;
  yb /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - xb) * (ys[i] - yb);
    sxx += (xs[i] - xb) * (xs[i] - xb);
    syy += (ys[i] - yb) * (ys[i] - yb);
  }
  const double slope = sxy / sxx;
  const double r2 = (syy == 0) ? 1.0 : sxy * sxy / (sxx * syy);
  return {slope, r2};
}

inline MixingStart parse_start(const Json& params, std::int64_t n) {
  if (!params.contains("start")) return MixingStart::zeros();
  const Json& s = params.at("start");
  if (s.is_string()) {
    const std::string v = s.get<std::string>();
    if (v == "zeros") return MixingStart::zeros();
    if (v == "ones") return MixingStart::ones();
    if (v == "sup") return MixingStart::sup();
    throw ConfigError("start: expected \"zeros\", \"ones\", \"sup\", or a weight");
  }
  const std::int64_t k = json_int(s, "start");
  if (k < 0 || k > n) throw ConfigError("start: weight out of [0, N]");
  return MixingStart::of_weight(k);
}

inline Metric parse_metric(const std::string& m) {
  if (m == "chi2_full") return Metric::Chi2FullSup;
  if (m == "chi2_hamming") return Metric::Chi2Hamming;
  if (m == "tv_full") return Metric::TvFull;
  if (m == "tv_hamming") return Metric::TvHamming;
  if (m == "tv_upper_bound") return Metric::TvUpperBound;
  throw ConfigError("metric: unknown metric '" + m + "'");
}

// chi2 value of the requested flavor in (value-as-double, natural-log) form
template <class S>
std::pair<double, double> chi2_eval(const HammingSpectrum<S>& hs,
                                    const std::string& flavor, std::int64_t k,
                                    std::int64_t t) {
  S v;
  if (flavor == "full-sup") v = chi2_full_sup<S>(hs, t);
  else if (flavor == "hamming") v = chi2_hamming<S>(hs, k, t);
  else if (flavor == "full-pointwise") v = chi2_full_pointwise<S>(hs, k, t);
  else throw ConfigError("metric: expected hamming|full-sup|full-pointwise");
  return {to_double(v), ScalarOps<S>::log_abs_value(v)};
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline ScenarioOutput scenario_verify(const Json& params, const RunContext& ctx) {
  VerifyOptions opt;
  opt.workers = ctx.workers;
  opt.seed = ctx.seed;
  if (params.contains("n_max")) opt.n_max = json_int(params.at("n_max"), "n_max");
  if (params.contains("t_max")) opt.t_max = json_int(params.at("t_max"), "t_max");
  if (params.contains("orthogonality_n_max"))
    opt.orthogonality_n_max = json_int(params.at("orthogonality_n_max"), "orthogonality_n_max");
  if (params.contains("symmetric_n_max"))
    opt.symmetric_n_max = json_int(params.at("symmetric_n_max"), "symmetric_n_max");
  if (params.contains("explicit_laws"))
    opt.explicit_laws = json_int(params.at("explicit_laws"), "explicit_laws");
  if (opt.n_max > 8) throw ConfigError("n_max: the exact oracle grid tops out at 8");

  const std::vector<VerifyCheck> checks = run_verify(opt);
  ScenarioOutput out;
  out.columns = {"check", "detail", "status", "max_err"};
  for (const auto& c : checks) {
    ResultRow r;
    r.add("check", c.check).add("detail", c.detail)
        .add("status", c.pass ? "pass" : "FAIL").add("max_err", c.max_err);
    out.rows.push_back(std::move(r));
  }
  out.failed_verification = !all_passed(checks);
  return out;
}

inline ScenarioOutput scenario_kernel(const Json& params, const RunContext& ctx) {
  const ProcessSpec spec = parse_spec(params);
  const std::string kind =
      params.contains("kind") ? params.at("kind").get<std::string>() : "dense";
  const std::int64_t t = params.contains("t") ? json_int(params.at("t"), "t") : 1;
  detail::require_exact_capacity(ctx, spec.n);

  ScenarioOutput out;
  const bool exact = ctx.mode.kind == ScalarMode::Exact;
  if (kind == "hamming") {
    out.columns = {"from_weight", "to_weight", "probability"};
    if (exact) out.columns.push_back("probability_exact");
    auto emit = [&](auto kernel) {
      for (std::int64_t i = 0; i <= spec.n; ++i)
        for (std::int64_t j = 0; j <= spec.n; ++j) {
          ResultRow r;
          r.add("from_weight", i).add("to_weight", j)
              .add("probability", to_double(kernel.at(i, j)));
          if constexpr (std::is_same_v<decltype(kernel), HammingKernel<Rational>>)
            r.add("probability_exact", kernel.at(i, j).get_str());
          out.rows.push_back(std::move(r));
        }
    };
    if (exact) emit(kernel_hamming<Rational>(spec));
    else emit(kernel_hamming<SignedLog>(spec));
    return out;
  }

  out.columns = {"from", "to", "probability"};
  if (exact) out.columns.push_back("probability_exact");
  auto emit_dense = [&](const auto& kernel) {
    const std::size_t dim = std::size_t{1} << spec.n;
    for (Mask x = 0; x < dim; ++x)
      for (Mask y = 0; y < dim; ++y) {
        ResultRow r;
        r.add("from", mask_to_string(x, spec.n)).add("to", mask_to_string(y, spec.n))
            .add("probability", to_double(kernel.at(x, y)));
        if constexpr (std::is_same_v<std::decay_t<decltype(kernel)>, DenseKernel<Rational>>)
          r.add("probability_exact", kernel.at(x, y).get_str());
        out.rows.push_back(std::move(r));
      }
  };
  if (kind == "dense") {
    if (exact) emit_dense(kernel_spectral<Rational>(spec, t));
    else emit_dense(kernel_spectral<SignedLog>(spec, t));
  } else if (kind == "bruteforce") {
    if (exact) emit_dense(kernel_bruteforce<Rational>(spec));
    else emit_dense(kernel_bruteforce<SignedLog>(spec));
  } else {
    throw ConfigError("kind: expected dense|bruteforce|hamming");
  }
  return out;
}

inline ScenarioOutput scenario_spectrum(const Json& params, const RunContext& ctx) {
  const ProcessSpec spec = parse_spec(params);
  detail::require_exact_capacity(ctx, spec.n);
  ScenarioOutput out;
  out.columns = {"n", "rho", "h"};
  const bool exact = ctx.mode.kind == ScalarMode::Exact;
  if (exact) out.columns.push_back("rho_exact");
  auto emit = [&](const auto& hs) {
    for (std::int64_t n = 0; n <= spec.n; ++n) {
      ResultRow r;
      r.add("n", n).add("rho", to_double(hs.rho[static_cast<std::size_t>(n)]))
          .add("h", to_double(hs.basis.h_weight(n)));
      if constexpr (std::is_same_v<std::decay_t<decltype(hs)>, HammingSpectrum<Rational>>)
        r.add("rho_exact", hs.rho[static_cast<std::size_t>(n)].get_str());
      out.rows.push_back(std::move(r));
    }
  };
  if (exact) emit(eigenvalues_hamming<Rational>(spec));
  else emit(eigenvalues_hamming<SignedLog>(spec));
  return out;
}

inline ScenarioOutput scenario_chi2_curve(const Json& params, const RunContext& ctx) {
  const ProcessSpec spec = parse_spec(params);
  detail::require_exact_capacity(ctx, spec.n);
  const std::string flavor =
      params.contains("metric") ? params.at("metric").get<std::string>() : "full-sup";
  const std::int64_t k = params.contains("start_weight")
                             ? json_int(params.at("start_weight"), "start_weight")
                             : 0;
  if (!params.contains("t_grid")) throw ConfigError("t_grid: required");

  ScenarioOutput out;
  out.columns = {"t", "chi2", "log_chi2", "formula"};
  for (const auto& tj : params.at("t_grid")) {
    const std::int64_t t = json_int(tj, "t_grid[]");
    double v, lv;
    if (ctx.mode.kind == ScalarMode::Exact) {
      const auto hs = eigenvalues_hamming<Rational>(spec);
      std::tie(v, lv) = detail::chi2_eval<Rational>(hs, flavor, k, t);
    } else {
      const auto hs = eigenvalues_hamming<SignedLog>(spec);
      std::tie(v, lv) = detail::chi2_eval<SignedLog>(hs, flavor, k, t);
    }
    ResultRow r;
    r.add("t", t).add("chi2", v).add("log_chi2", lv).add("formula", "spectral-sum");
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline ScenarioOutput scenario_tv_curve(const Json& params, const RunContext& ctx) {
  const ProcessSpec spec = parse_spec(params);
  const std::string path =
      params.contains("path") ? params.at("path").get<std::string>() : "hamming";
  const MixingStart start = detail::parse_start(params, spec.n);
  if (!params.contains("t_grid")) throw ConfigError("t_grid: required");

  ScenarioOutput out;
  out.columns = {"t", "tv", "formula"};
  std::optional<HammingSpectrum<SignedLog>> hs;
  if (path == "hamming") hs.emplace(eigenvalues_hamming<SignedLog>(spec));
  for (const auto& tj : params.at("t_grid")) {
    const std::int64_t t = json_int(tj, "t_grid[]");
    double v;
    std::string formula;
    const std::int64_t k = start.kind == MixingStart::Ones ? spec.n
                           : start.kind == MixingStart::Weight ? start.weight
                                                               : 0;
    if (path == "hamming") {
      v = tv_hamming(*hs, k, t);
      formula = "hamming-spectral";
    } else if (path == "dense") {
      if (start.kind == MixingStart::Sup) v = tv_dense_sup<SignedLog>(spec, t);
      else {
        Mask x = 0;
        for (std::int64_t j = 1; j <= k; ++j) x |= Mask{1} << coord_bit(spec.n, j);
        v = tv_dense<SignedLog>(spec, x, t);
      }
      formula = "dense-spectral";
    } else if (path == "chi2-bound") {
      const auto hs2 = eigenvalues_hamming<SignedLog>(spec);
      v = tv_upper_from_chi2(chi2_full_pointwise<SignedLog>(hs2, k, t)).to_double();
      formula = "tv-from-chi2";
    } else {
      throw ConfigError("path: expected hamming|dense|chi2-bound");
    }
    ResultRow r;
    r.add("t", t).add("tv", v).add("formula", formula);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline ScenarioOutput scenario_mixing_time(const Json& params, const RunContext& ctx) {
  const std::vector<std::int64_t> grid = parse_n_grid(params);
  if (!params.contains("p")) throw ConfigError("p: required");
  const Rational p = json_rational(params.at("p"), "p");
  const double eps = params.contains("eps") ? json_double(params.at("eps"), "eps") : 0.25;
  const Metric metric = detail::parse_metric(
      params.contains("metric") ? params.at("metric").get<std::string>() : "chi2_full");
  std::optional<ZRule> z_rule;
  if (params.contains("z_rule")) z_rule = parse_z_rule(params.at("z_rule"));

  ScenarioOutput out;
  out.columns = {"n", "z", "eps", "metric", "t_mix", "status"};
  std::vector<ResultRow> rows(grid.size());
  parallel_for(static_cast<std::int64_t>(grid.size()), ctx.workers, [&](std::int64_t i) {
    const std::int64_t n = grid[static_cast<std::size_t>(i)];
    ProcessSpec spec;
    std::int64_t z = -1;
    if (z_rule) {
      z = z_rule->resolve(n, p);
      spec = {n, p, SubsetUniform{z}};
    } else {
      Json sub = params;
      sub["n"] = n;
      spec = parse_spec(sub);
      if (const auto* su = std::get_if<SubsetUniform>(&spec.law)) z = su->z;
    }
    const MixingStart start = detail::parse_start(params, n);
    ResultRow r;
    r.add("n", n).add("z", z).add("eps", eps).add("metric", metric_name(metric));
    try {
      r.add("t_mix", mixing_time(spec, eps, metric, start)).add("status", "ok");
    } catch (const DivergenceError&) {
      r.add("t_mix", "").add("status", "periodic");
    }
    rows[static_cast<std::size_t>(i)] = std::move(r);
  });
  out.rows = std::move(rows);
  return out;
}

inline ScenarioOutput scenario_cutoff_scan(const Json& params, const RunContext& ctx) {
  if (!params.contains("n") || !params.contains("p") || !params.contains("z"))
    throw ConfigError("cutoff-scan: needs n, p, z");
  ProcessSpec spec{json_int(params.at("n"), "n"), json_rational(params.at("p"), "p"),
                   SubsetUniform{json_int(params.at("z"), "z")}};
  detail::require_exact_capacity(ctx, spec.n);
  std::vector<double> c_grid;
  if (params.contains("c_grid"))
    for (const auto& c : params.at("c_grid")) c_grid.push_back(json_double(c, "c_grid[]"));
  else c_grid = {-2, 0, 2, 4};

  const CutoffReport rep = cutoff_window(spec, c_grid);
  ScenarioOutput out;
  out.columns = {"c", "valid", "t_c", "chi2", "log_chi2", "lower_bound",
                 "upper_bound", "lower_ok", "upper_ok_1p1"};
  for (const auto& e : rep.entries) {
    ResultRow r;
    r.add("c", e.c).add("valid", e.valid);
    if (e.valid) {
      r.add("t_c", e.t_c).add("chi2", e.chi2).add("log_chi2", e.log_chi2)
          .add("lower_bound", e.lower_bound).add("upper_bound", e.upper_bound)
          .add("lower_ok", e.log_chi2 >= std::log(e.lower_bound))
          .add("upper_ok_1p1", e.log_chi2 <= std::log(1.1 * e.upper_bound));
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline ScenarioOutput scenario_almost_perfect(const Json& params, const RunContext& ctx) {
  if (!params.contains("p")) throw ConfigError("p: required");
  const Rational p = json_rational(params.at("p"), "p");
  const std::vector<std::int64_t> grid = parse_n_grid(params);
  ZRule rule;
  rule.kind = ZRule::RoundPnPlusVSqrt;
  rule.v = 0;
  if (params.contains("z_rule")) rule = parse_z_rule(params.at("z_rule"));
  std::vector<std::int64_t> t_list = {1, 2, 3};
  if (params.contains("t_list")) {
    t_list.clear();
    for (const auto& t : params.at("t_list")) t_list.push_back(json_int(t, "t_list[]"));
  }

  ScenarioOutput out;
  out.columns = {"row_kind", "n", "z", "t", "chi2", "tv_bound", "log_tv_bound",
                 "slope_vs_n", "r2_vs_n", "slope_vs_ln_n", "r2_vs_ln_n"};
  std::map<std::int64_t, std::vector<double>> log_bounds;  // t -> per-N
  std::vector<std::vector<ResultRow>> data(grid.size());
  parallel_for(static_cast<std::int64_t>(grid.size()), ctx.workers, [&](std::int64_t i) {
    const std::int64_t n = grid[static_cast<std::size_t>(i)];
    const std::int64_t z = rule.resolve(n, p);
    const ProcessSpec spec{n, p, SubsetUniform{z}};
    const auto hs = eigenvalues_hamming<SignedLog>(spec);
    for (const std::int64_t t : t_list) {
      const SignedLog chi2 = chi2_full_sup<SignedLog>(hs, t);
      const SignedLog bound = tv_upper_from_chi2(chi2);
      ResultRow r;
      r.add("row_kind", "data").add("n", n).add("z", z).add("t", t)
          .add("chi2", chi2.to_double()).add("tv_bound", bound.to_double())
          .add("log_tv_bound", bound.log_mag());
      data[static_cast<std::size_t>(i)].push_back(std::move(r));
    }
  });
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (auto& r : data[i]) out.rows.push_back(std::move(r));
  // refill the per-t series in grid order for the fits
  for (const std::int64_t t : t_list) log_bounds[t] = {};
  for (const auto& r : out.rows) {
    std::int64_t t = 0;
    double lb = 0;
    for (const auto& [c, v] : r.cells()) {
      if (c == "t") t = std::stoll(v);
      if (c == "log_tv_bound") lb = std::stod(v);
    }
    log_bounds[t].push_back(lb);
  }
  std::vector<double> xs, lxs;
  for (const std::int64_t n : grid) {
    xs.push_back(static_cast<double>(n));
    lxs.push_back(std::log(n));
  }
  for (const std::int64_t t : t_list) {
    if (log_bounds[t].size() < 2) continue;
    const auto [s_n, r2_n] = detail::least_squares(xs, log_bounds[t]);
    const auto [s_ln, r2_ln] = detail::least_squares(lxs, log_bounds[t]);
    ResultRow r;
    r.add("row_kind", "fit").add("t", t).add("slope_vs_n", s_n).add("r2_vs_n", r2_n)
        .add("slope_vs_ln_n", s_ln).add("r2_vs_ln_n", r2_ln);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline ScenarioOutput scenario_critical_start(const Json& params, const RunContext& ctx) {
  if (!params.contains("p")) throw ConfigError("p: required");
  const Rational p = json_rational(params.at("p"), "p");
  const double w = params.contains("w") ? json_double(params.at("w"), "w") : 0.3;
  const double eps = params.contains("eps") ? json_double(params.at("eps"), "eps") : 0.1;
  const std::int64_t t_max =
      params.contains("t_max") ? json_int(params.at("t_max"), "t_max") : 30;
  const std::vector<std::int64_t> grid = parse_n_grid(params);

  ScenarioOutput out;
  out.columns = {"row_kind", "n", "z", "start_weight", "t", "chi2_hamming",
                 "bound", "holds", "t_circ", "t2_mix"};
  const double pd = to_double(p);
  for (const std::int64_t n : grid) {
    const auto z = static_cast<std::int64_t>(std::floor(w * static_cast<double>(n) + 0.5));
    const auto k = static_cast<std::int64_t>(std::floor(pd * static_cast<double>(n) + 0.5));
    const ProcessSpec spec{n, p, SubsetUniform{z}};
    const auto hs = eigenvalues_hamming<SignedLog>(spec);
    std::optional<std::int64_t> t_circ;
    for (std::int64_t t = 0; t <= t_max; ++t) {
      const double chi2 = to_double(chi2_hamming<SignedLog>(hs, k, t));
      const double bound = 0.5 * std::pow(1.0 - w / pd, 2.0 * static_cast<double>(t)) *
                           pd / (1.0 - pd);
      const bool holds = chi2 < bound;
      if (holds && !t_circ) t_circ = t;
      if (!holds) t_circ.reset();
      ResultRow r;
      r.add("row_kind", "data").add("n", n).add("z", z).add("start_weight", k)
          .add("t", t).add("chi2_hamming", chi2).add("bound", bound).add("holds", holds);
      out.rows.push_back(std::move(r));
    }
    const std::int64_t t2mix =
        mixing_time(spec, eps, Metric::Chi2Hamming, MixingStart::of_weight(k));
    ResultRow r;
    r.add("row_kind", "summary").add("n", n).add("z", z).add("start_weight", k)
        .add("t_circ", t_circ ? std::to_string(*t_circ) : std::string("none"))
        .add("t2_mix", t2mix);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline ScenarioOutput scenario_definetti_slow(const Json& params, const RunContext& ctx) {
  if (!params.contains("p")) throw ConfigError("p: required");
  const Rational p = json_rational(params.at("p"), "p");
  const double a = params.contains("a") ? json_double(params.at("a"), "a") : 0.2;
  const std::vector<std::int64_t> grid = parse_n_grid(params);

  ScenarioOutput out;
  out.columns = {"row_kind", "n", "t", "log_chi2", "log_floor", "holds",
                 "slope_vs_n", "slope_target", "within_20pct"};
  std::vector<double> xs, ys;
  for (const std::int64_t n : grid) {
    const ProcessSpec spec{n, p, DeFinettiLebesgue{}};
    const DefinettiFloor f = definetti_floor(spec, a);
    xs.push_back(static_cast<double>(n));
    ys.push_back(f.chi2.log_mag());
    ResultRow r;
    r.add("row_kind", "data").add("n", n).add("t", f.t).add("log_chi2", f.chi2.log_mag())
        .add("log_floor", f.paper_floor.log_mag()).add("holds", f.holds);
    out.rows.push_back(std::move(r));
  }
  if (grid.size() >= 2) {
    const auto [slope, r2] = detail::least_squares(xs, ys);
    (void)r2;
    const double target = -std::log(1.0 - to_double(p)) - 2.0 * a;
    ResultRow r;
    r.add("row_kind", "fit").add("slope_vs_n", slope).add("slope_target", target)
        .add("within_20pct", std::fabs(slope / target - 1.0) <= 0.2);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline ScenarioOutput scenario_contingency(const Json& params, const RunContext& ctx) {
  if (!params.contains("n") || !params.contains("p") || !params.contains("rho"))
    throw ConfigError("contingency: needs n, p, rho");
  const std::int64_t n = json_int(params.at("n"), "n");
  const Rational p = json_rational(params.at("p"), "p");
  const Rational rho = json_rational(params.at("rho"), "rho");
  const double eps = params.contains("eps") ? json_double(params.at("eps"), "eps") : 0.25;
  if (rho <= 0 || rho >= 1) throw ConfigError("rho: must lie in (0, 1)");

  // correlation rho corresponds to iid updates at rate alpha = p (1 - rho)
  const Rational alpha = p * (1 - rho);
  const ProcessSpec spec{n, p, IidBernoulli{alpha}};
  const std::int64_t measured =
      mixing_time(spec, eps, Metric::Chi2FullSup, MixingStart::zeros());

  const double pd = to_double(p), rd = to_double(rho);
  // exact crossing of the closed form (1 + (p/q) rho^{2t})^N = 1 + eps
  const double predicted =
      (std::log(std::expm1(std::log1p(eps) / static_cast<double>(n))) -
       std::log(pd / (1 - pd))) /
      (2.0 * std::log(rd));
  // the paper-style window center with C* solving exp(e^{-C}) - 1 = eps
  const double c_star = -std::log(std::log1p(eps));
  const double window_center =
      (std::log(n) + std::log(pd / (1 - pd)) + c_star) / (-2.0 * std::log(rd));

  ScenarioOutput out;
  out.columns = {"n", "rho", "alpha", "eps", "measured_t", "closed_form_t",
                 "window_center_t", "within_one"};
  ResultRow r;
  r.add("n", n).add("rho", rd).add("alpha", to_double(alpha)).add("eps", eps)
      .add("measured_t", measured).add("closed_form_t", predicted)
      .add("window_center_t", window_center)
      .add("within_one", std::fabs(static_cast<double>(measured) - predicted) <= 1.0);
  out.rows.push_back(std::move(r));
  return out;
}

inline ScenarioOutput scenario_simulate(const Json& params, const RunContext& ctx) {
  SimConfig cfg;
  cfg.spec = parse_spec(params);
  cfg.horizon = params.contains("horizon") ? json_int(params.at("horizon"), "horizon") : 1;
  cfg.n_trajectories = params.contains("trajectories")
                           ? json_int(params.at("trajectories"), "trajectories")
                           : 100000;
  cfg.seed = ctx.seed;
  cfg.workers = ctx.workers;
  const std::string start =
      params.contains("start") ? params.at("start").get<std::string>() : "zeros";
  std::int64_t start_weight = 0;
  if (start == "zeros") cfg.start = SimStart::zeros();
  else if (start == "ones") {
    cfg.start = SimStart::ones();
    start_weight = cfg.spec.n;
  } else if (start == "stationary") cfg.start = SimStart::stationary();
  else {
    try {
      start_weight = std::stoll(start);
    } catch (...) {
      throw ConfigError("start: expected zeros|ones|stationary|<weight>");
    }
    cfg.start = SimStart::of_weight(start_weight);
  }

  const EmpiricalHamming emp = run(cfg);

  // exact reference: spectral Hamming power row (stationary start: binomial)
  std::vector<double> exact(static_cast<std::size_t>(cfg.spec.n) + 1, 0.0);
  bool have_exact = false;
  if (is_exchangeable(cfg.spec.law)) {
    have_exact = true;
    if (cfg.start.kind == SimStart::Stationary || cfg.horizon == 0) {
      const auto binom = stationary_hamming<SignedLog>(cfg.spec);
      for (std::size_t k = 0; k < exact.size(); ++k) exact[k] = to_double(binom[k]);
      if (cfg.horizon == 0 && cfg.start.kind != SimStart::Stationary) {
        std::fill(exact.begin(), exact.end(), 0.0);
        exact[static_cast<std::size_t>(start_weight)] = 1.0;
      }
    } else {
      const auto row = hamming_power_row<SignedLog>(cfg.spec, start_weight, cfg.horizon);
      for (std::size_t k = 0; k < exact.size(); ++k) exact[k] = to_double(row[k]);
    }
  }

  ScenarioOutput out;
  out.columns = {"row_kind", "weight", "count", "empirical", "exact",
                 "tv", "threshold", "pass"};
  for (std::size_t k = 0; k < emp.counts.size(); ++k) {
    ResultRow r;
    r.add("row_kind", "data").add("weight", static_cast<std::int64_t>(k))
        .add("count", emp.counts[k])
        .add("empirical", static_cast<double>(emp.counts[k]) /
                              static_cast<double>(emp.n));
    if (have_exact) r.add("exact", exact[k]);
    out.rows.push_back(std::move(r));
  }
  if (have_exact) {
    const CompareResult cmp = compare_exact(emp, exact);
    ResultRow r;
    r.add("row_kind", "summary").add("tv", cmp.tv).add("threshold", cmp.threshold)
        .add("pass", cmp.pass);
    out.rows.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> scenario_names() {
  return {"verify",       "kernel",        "spectrum",      "chi2-curve",
          "tv-curve",     "mixing-time",   "cutoff-scan",   "almost-perfect",
          "critical-start", "definetti-slow", "contingency", "simulate"};
}

inline ScenarioOutput run_scenario(const std::string& name, const Json& params,
                                   const RunContext& ctx) {
  if (name == "verify") return scenario_verify(params, ctx);
  if (name == "kernel") return scenario_kernel(params, ctx);
  if (name == "spectrum") return scenario_spectrum(params, ctx);
  if (name == "chi2-curve") return scenario_chi2_curve(params, ctx);
  if (name == "tv-curve") return scenario_tv_curve(params, ctx);
  if (name == "mixing-time") return scenario_mixing_time(params, ctx);
  if (name == "cutoff-scan") return scenario_cutoff_scan(params, ctx);
  if (name == "almost-perfect") return scenario_almost_perfect(params, ctx);
  if (name == "critical-start") return scenario_critical_start(params, ctx);
  if (name == "definetti-slow") return scenario_definetti_slow(params, ctx);
  if (name == "contingency") return scenario_contingency(params, ctx);
  if (name == "simulate") return scenario_simulate(params, ctx);
  throw ConfigError("scenario: unknown scenario '" + name + "'");
}

}  // namespace cubemix
