#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cubemix/experiments/scenarios.hpp"

using namespace cubemix;

namespace {

std::string render(const ScenarioOutput& out) {
  std::ostringstream os;
  write_csv(os, out.columns, out.rows);
  return os.str();
}

}  // namespace

TEST_CASE("csv quoting follows RFC 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("config errors name the offending field") {
  const RunContext ctx;
  CHECK_THROWS_WITH(run_scenario("kernel", Json::object(), ctx),
                    Catch::Matchers::ContainsSubstring("n:"));
  Json p = {{"n", 4}, {"p", "0.6"}};
  CHECK_THROWS_WITH(run_scenario("kernel", p, ctx),
                    Catch::Matchers::ContainsSubstring("law"));
  p["law"] = {{"type", "subset-uniform"}, {"z", 9}};
  CHECK_THROWS_WITH(run_scenario("kernel", p, ctx),
                    Catch::Matchers::ContainsSubstring("law.z"));
  p["law"] = {{"type", "no-such-law"}};
  CHECK_THROWS_AS(run_scenario("kernel", p, ctx), ConfigError);
  CHECK_THROWS_AS(run_scenario("no-such-scenario", Json::object(), ctx), ConfigError);
  // p outside [1/2, 1)
  Json bad = {{"n", 4}, {"p", "0.3"}, {"law", {{"type", "subset-uniform"}, {"z", 1}}}};
  CHECK_THROWS_WITH(run_scenario("kernel", bad, ctx),
                    Catch::Matchers::ContainsSubstring("spec.p"));
}

TEST_CASE("capacity errors surface for oversized exact-mode runs") {
  RunContext ctx;
  ctx.mode = ScalarMode::exact();
  const Json p = {{"n", 4096}, {"p", "0.6"}, {"z", 1}};
  CHECK_THROWS_AS(run_scenario("cutoff-scan", p, ctx), CapacityError);
}

TEST_CASE("z-rule menu") {
  const Rational p(3, 5);
  ZRule c = parse_z_rule({{"rule", "const"}, {"k", 7}});
  CHECK(c.resolve(100, p) == 7);
  ZRule a = parse_z_rule({{"rule", "round-alpha-n"}, {"alpha", 0.3}});
  CHECK(a.resolve(100, p) == 30);
  CHECK(a.resolve(101, p) == 30);  // round(30.3)
  ZRule v = parse_z_rule({{"rule", "round-pn-plus-v-sqrt"}, {"v", 0.0}});
  CHECK(v.resolve(1024, p) == 614);  // round(614.4)
  ZRule v1 = parse_z_rule({{"rule", "round-pn-plus-v-sqrt"}, {"v", 1.0}});
  CHECK(v1.resolve(1024, p) == 630);  // round(614.4 + 15.68)
  CHECK_THROWS_AS(parse_z_rule({{"rule", "cubic"}}), ConfigError);
}

TEST_CASE("scenario outputs are deterministic across reruns") {
  const Json params = {{"n", 64},
                       {"p", "0.6"},
                       {"law", {{"type", "subset-uniform"}, {"z", 2}}},
                       {"metric", "hamming"},
                       {"start_weight", 5},
                       {"t_grid", {1, 2, 4, 8, 16}}};
  const RunContext ctx;
  const std::string a = render(run_scenario("chi2-curve", params, ctx));
  const std::string b = render(run_scenario("chi2-curve", params, ctx));
  CHECK(a == b);
  CHECK(a.find("spectral-sum") != std::string::npos);
}

TEST_CASE("verify scenario passes on a small grid and reports rows") {
  const Json params = {{"n_max", 3}, {"t_max", 2}, {"orthogonality_n_max", 6},
                       {"symmetric_n_max", 4}, {"explicit_laws", 2}};
  RunContext ctx;
  ctx.workers = 2;
  const ScenarioOutput out = run_scenario("verify", params, ctx);
  CHECK_FALSE(out.failed_verification);
  CHECK(out.rows.size() > 50);
  const std::string csv = render(out);
  CHECK(csv.find("FAIL") == std::string::npos);
  CHECK(csv.find("kernel-equivalence-exact") != std::string::npos);
  CHECK(csv.find("rw-plus-form-differs") != std::string::npos);
}

TEST_CASE("cutoff scenario emits the sandwich verdicts") {
  const Json params = {{"n", 512}, {"p", "0.6"}, {"z", 1}, {"c_grid", {0.0, 2.0}}};
  const ScenarioOutput out = run_scenario("cutoff-scan", params, RunContext{});
  REQUIRE(out.rows.size() == 2);
  const std::string csv = render(out);
  CHECK(out.columns.front() == "c");
}

TEST_CASE("almost-perfect scenario carries data and fit rows") {
  const Json params = {{"p", "0.6"}, {"n_grid", {16, 32, 64}}, {"t_list", {2}}};
  const ScenarioOutput out = run_scenario("almost-perfect", params, RunContext{});
  REQUIRE(out.rows.size() == 4);  // 3 data + 1 fit
  bool found_fit = false;
  for (const auto& r : out.rows)
    for (const auto& [c, v] : r.cells())
      if (c == "row_kind" && v == "fit") found_fit = true;
  CHECK(found_fit);
}

TEST_CASE("mixing-time scenario reports periodic configurations") {
  const Json params = {{"n_grid", {4, 6}},
                       {"p", "0.5"},
                       {"law", {{"type", "subset-uniform"}, {"z", 4}}},
                       {"metric", "chi2_full"}};
  // z = 4 with p = 1/2: periodic at N = 4; at N = 6 the chain still has
  // |rho_4| < 1... both entries must come back labeled rather than hang
  ScenarioOutput out = run_scenario("mixing-time", params, RunContext{});
  REQUIRE(out.rows.size() == 2);
  const std::string csv = render(out);
  CHECK(csv.find("periodic") != std::string::npos);
}

TEST_CASE("simulate scenario compares against the exact row") {
  const Json params = {{"n", 20},
                       {"p", "0.6"},
                       {"law", {{"type", "subset-uniform"}, {"z", 2}}},
                       {"start", "zeros"},
                       {"horizon", 5},
                       {"trajectories", 5000}};
  RunContext ctx;
  ctx.seed = 424242;
  const ScenarioOutput out = run_scenario("simulate", params, ctx);
  bool pass_row = false;
  for (const auto& r : out.rows)
    for (const auto& [c, v] : r.cells())
      if (c == "row_kind" && v == "summary") {
        for (const auto& [c2, v2] : r.cells())
          if (c2 == "pass") pass_row = (v2 == "1");
      }
  CHECK(pass_row);
}

TEST_CASE("contingency scenario nails the closed-form crossing") {
  const Json params = {{"n", 512}, {"p", "0.6"}, {"rho", "0.5"}};
  const ScenarioOutput out = run_scenario("contingency", params, RunContext{});
  REQUIRE(out.rows.size() == 1);
  std::map<std::string, std::string> row;
  for (const auto& [c, v] : out.rows[0].cells()) row[c] = v;
  CHECK(row.at("within_one") == "1");
}
