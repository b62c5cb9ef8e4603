// cube-mixer: scenario runner for hypercube random-walk spectral analysis.
// Reads a JSON config, writes CSV results plus a JSON sidecar carrying the
// fully-resolved configuration.  Exit codes: 0 ok, 2 config error,
// 3 verification failure, 4 capacity error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cubemix/experiments/scenarios.hpp"

namespace {

constexpr const char* kVersion = "cube-mixer 1.0.0";

const char* describe_text() {
  return
      "scenarios and CSV columns\n"
      "\n"
      "verify          check,detail,status,max_err\n"
      "    Exact oracle suite: spectral kernel vs brute-force kernel (t = 1 and\n"
      "    matrix powers), row sums, detailed balance, coordinate-restriction\n"
      "    marginals, lumpability onto the Hamming chain, random-walk\n"
      "    representation sign, Krawtchouk orthogonality and symmetric\n"
      "    representation, hypergeometric eigenvalues.  Nonzero exit on any\n"
      "    failure.  params: n_max<=8, t_max, orthogonality_n_max,\n"
      "    symmetric_n_max, explicit_laws.\n"
      "kernel          from,to,probability[,probability_exact]\n"
      "    Transition matrices: kind=dense|bruteforce|hamming; params n,p,law,t.\n"
      "    Dense states print as bit strings, coordinate 1 first.\n"
      "spectrum        n,rho,h[,rho_exact]\n"
      "    Eigenvalues rho_n = E[Q_n(||Z||)] and weights h_n (exchangeable laws).\n"
      "chi2-curve      t,chi2,log_chi2,formula\n"
      "    chi-squared distance curve; metric=hamming|full-sup|full-pointwise,\n"
      "    start_weight, t_grid.\n"
      "tv-curve        t,tv,formula\n"
      "    Total-variation curve; path=hamming|dense|chi2-bound, start, t_grid.\n"
      "mixing-time     n,z,eps,metric,t_mix,status\n"
      "    Smallest t with distance <= eps per grid cell; status=periodic when\n"
      "    the curve never crosses.  params: n_grid (or n), p, law or z_rule,\n"
      "    metric, eps, start.\n"
      "cutoff-scan     c,valid,t_c,chi2,log_chi2,lower_bound,upper_bound,\n"
      "                lower_ok,upper_ok_1p1\n"
      "    chi-squared at t_C = round((Np/2z)(ln N + C)) against the window\n"
      "    bounds e^{-C} p/q and exp(e^{-C} p/q) - 1.  params: n,p,z,c_grid.\n"
      "almost-perfect  row_kind,n,z,t,chi2,tv_bound,log_tv_bound,slope_vs_n,\n"
      "                r2_vs_n,slope_vs_ln_n,r2_vs_ln_n\n"
      "    Fixed-step TV bounds over an N grid with z from z_rule (default\n"
      "    round(pN)); fit rows carry least-squares slopes of the log bound.\n"
      "critical-start  row_kind,n,z,start_weight,t,chi2_hamming,bound,holds,\n"
      "                t_circ,t2_mix\n"
      "    Hamming chi-squared from start weight round(pN) with z = round(wN),\n"
      "    against (1/2)(1 - w/p)^{2t} p/q.  params: p,w,n_grid,t_max,eps.\n"
      "definetti-slow  row_kind,n,t,log_chi2,log_floor,holds,slope_vs_n,\n"
      "                slope_target,within_20pct\n"
      "    Lebesgue-mixture chain at t = floor(aN/ln N): chi-squared against\n"
      "    its single-term floor; fit row checks the linear-in-N growth.\n"
      "contingency     n,rho,alpha,eps,measured_t,closed_form_t,window_center_t,\n"
      "                within_one\n"
      "    Correlation-rho chain (iid updates at alpha = p(1-rho)): measured\n"
      "    chi-squared mixing time vs the closed-form crossing.\n"
      "simulate        row_kind,weight,count,empirical,exact,tv,threshold,pass\n"
      "    Monte Carlo trajectories of the acceptance/rejection step; terminal\n"
      "    Hamming histogram vs the exact spectral power row.  params:\n"
      "    n,p,law,start,horizon,trajectories.\n"
      "\n"
      "common flags: --config FILE (json; authoritative for science params),\n"
      "--out PATH (csv; sidecar PATH.meta.json), --mode exact|logfloat,\n"
      "--workers K, --seed U64.  Env overrides: CUBE_MIXER_WORKERS,\n"
      "CUBE_MIXER_MODE (these two only).\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral analysis and simulation of reversible hypercube walks"};
  app.set_version_flag("--version", kVersion);

  std::string scenario;
  std::string config_path;
  std::string out_path;
  std::string mode_str;
  int workers = 0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool describe = false;

  app.add_option("scenario", scenario, "one of: verify kernel spectrum chi2-curve "
                                       "tv-curve mixing-time cutoff-scan almost-perfect "
                                       "critical-start definetti-slow contingency simulate");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output CSV path (default: <scenario>.csv)");
  app.add_option("--mode", mode_str, "scalar backend: exact | logfloat");
  app.add_option("--workers", workers, "worker pool size (0 = hardware)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG master seed");
  app.add_flag("--describe", describe, "print per-scenario column documentation");

  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0;

  if (describe) {
    std::cout << describe_text();
    return 0;
  }

  try {
    if (scenario.empty())
      throw cubemix::ConfigError("scenario: required (see --describe)");
    const auto names = cubemix::scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end())
      throw cubemix::ConfigError("scenario: unknown scenario '" + scenario + "'");

    cubemix::Json config = cubemix::Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw cubemix::ConfigError("config: cannot open '" + config_path + "'");
      try {
        in >> config;
      } catch (const std::exception& e) {
        throw cubemix::ConfigError(std::string("config: invalid JSON: ") + e.what());
      }
    }
    if (config.contains("scenario") &&
        config.at("scenario").get<std::string>() != scenario)
      throw cubemix::ConfigError("scenario: config file names a different scenario");

    cubemix::Json params =
        config.contains("params") ? config.at("params") : cubemix::Json::object();

    cubemix::RunContext ctx;
    if (config.contains("mode"))
      ctx.mode = cubemix::parse_mode(config.at("mode").get<std::string>());
    if (config.contains("workers"))
      ctx.workers = static_cast<int>(cubemix::json_int(config.at("workers"), "workers"));
    if (config.contains("seed"))
      ctx.seed = static_cast<std::uint64_t>(
          cubemix::json_int(config.at("seed"), "seed"));
    // CLI flags override the config; env vars override workers and mode only.
    if (!mode_str.empty()) ctx.mode = cubemix::parse_mode(mode_str);
    if (workers > 0) ctx.workers = workers;
    if (have_seed) ctx.seed = seed;
    if (const char* env = std::getenv("CUBE_MIXER_WORKERS")) ctx.workers = std::atoi(env);
    if (const char* env = std::getenv("CUBE_MIXER_MODE"))
      ctx.mode = cubemix::parse_mode(env);

    const cubemix::ScenarioOutput result = cubemix::run_scenario(scenario, params, ctx);

    if (out_path.empty()) out_path = scenario + ".csv";
    {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw cubemix::ConfigError("out: cannot write '" + out_path + "'");
      cubemix::write_csv(out, result.columns, result.rows);
    }
    {
      cubemix::Json sidecar;
      sidecar["tool"] = kVersion;
      sidecar["scenario"] = scenario;
      sidecar["mode"] = ctx.mode.name();
      sidecar["seed"] = ctx.seed;
      sidecar["workers"] = ctx.workers;
      sidecar["params"] = params;
      sidecar["columns"] = result.columns;
      sidecar["rows"] = result.rows.size();
      std::ofstream meta(out_path + ".meta.json", std::ios::binary);
      meta << sidecar.dump(2) << "\n";
    }
    std::cerr << scenario << ": wrote " << result.rows.size() << " rows to "
              << out_path << "\n";

    if (result.failed_verification) {
      std::cerr << "verification FAILED (see " << out_path << ")\n";
      return 3;
    }
    return 0;
  } catch (const cubemix::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cubemix::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
