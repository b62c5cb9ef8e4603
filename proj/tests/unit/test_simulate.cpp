#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cubemix/process/kernels.hpp"
#include "cubemix/simulate/simulate.hpp"

using namespace cubemix;

TEST_CASE("zero horizon keeps all mass at the start weight") {
  SimConfig cfg;
  cfg.spec = {20, Rational(3, 5), SubsetUniform{4}};
  cfg.start = SimStart::of_weight(7);
  cfg.horizon = 0;
  cfg.n_trajectories = 500;
  cfg.seed = 9;
  const EmpiricalHamming emp = run(cfg);
  CHECK(emp.counts[7] == 500);
  std::int64_t total = 0;
  for (const auto c : emp.counts) total += c;
  CHECK(total == emp.n);
}

TEST_CASE("identical configs are bit-identical regardless of worker count") {
  SimConfig cfg;
  cfg.spec = {40, Rational(3, 5), SubsetUniform{6}};
  cfg.start = SimStart::zeros();
  cfg.horizon = 12;
  cfg.n_trajectories = 4000;
  cfg.seed = 1234;
  cfg.workers = 1;
  const EmpiricalHamming a = run(cfg);
  cfg.workers = 2;
  const EmpiricalHamming b = run(cfg);
  cfg.workers = 7;
  const EmpiricalHamming c = run(cfg);
  CHECK(a.counts == b.counts);
  CHECK(a.counts == c.counts);
}

TEST_CASE("different seeds decorrelate") {
  SimConfig cfg;
  cfg.spec = {30, Rational(3, 5), SubsetUniform{3}};
  cfg.horizon = 5;
  cfg.n_trajectories = 2000;
  cfg.seed = 1;
  const EmpiricalHamming a = run(cfg);
  cfg.seed = 2;
  const EmpiricalHamming b = run(cfg);
  CHECK(a.counts != b.counts);
}

TEST_CASE("compare_exact basics") {
  EmpiricalHamming emp;
  emp.n = 1000;
  emp.counts = {250, 500, 250};
  const std::vector<double> exact = {0.25, 0.5, 0.25};
  const CompareResult r = compare_exact(emp, exact);
  CHECK(r.tv == 0.0);
  CHECK(r.pass);

  // all mass at 0 against Binomial(10, 0.6): tv = 1 - 0.4^10, a clear fail
  EmpiricalHamming bad;
  bad.n = 1000;
  bad.counts.assign(11, 0);
  bad.counts[0] = 1000;
  const ProcessSpec spec{10, Rational(3, 5), SubsetUniform{1}};
  const auto binom = stationary_hamming<Rational>(spec);
  std::vector<double> exact10(11);
  for (int k = 0; k <= 10; ++k) exact10[static_cast<std::size_t>(k)] = to_double(binom[static_cast<std::size_t>(k)]);
  const CompareResult rb = compare_exact(bad, exact10);
  CHECK(rb.tv == Catch::Approx(1.0 - std::pow(0.4, 10)).epsilon(1e-9));
  CHECK_FALSE(rb.pass);

  // threshold formula at n = 1e5, N = 100
  EmpiricalHamming t;
  t.n = 100000;
  t.counts.assign(101, 0);
  t.counts[0] = 100000;
  std::vector<double> unit(101, 0.0);
  unit[0] = 1.0;
  CHECK(compare_exact(t, unit).threshold == Catch::Approx(0.0476707).margin(1e-6));
}

TEST_CASE("one-step independence chain lands on the binomial law") {
  SimConfig cfg;
  cfg.spec = {50, Rational(3, 5), IidBernoulli{Rational(3, 5)}};
  cfg.start = SimStart::zeros();
  cfg.horizon = 1;
  cfg.n_trajectories = 20000;
  cfg.seed = 77;
  const EmpiricalHamming emp = run(cfg);
  const auto binom = stationary_hamming<Rational>(cfg.spec);
  std::vector<double> exact(51);
  for (int k = 0; k <= 50; ++k) exact[static_cast<std::size_t>(k)] = to_double(binom[static_cast<std::size_t>(k)]);
  const CompareResult r = compare_exact(emp, exact);
  CHECK(r.pass);
}

TEST_CASE("stationary starts stay stationary") {
  SimConfig cfg;
  cfg.spec = {30, Rational(3, 4), SubsetUniform{5}};
  cfg.start = SimStart::stationary();
  cfg.horizon = 3;
  cfg.n_trajectories = 20000;
  cfg.seed = 31337;
  const EmpiricalHamming emp = run(cfg);
  const auto binom = stationary_hamming<Rational>(cfg.spec);
  std::vector<double> exact(31);
  for (int k = 0; k <= 30; ++k) exact[static_cast<std::size_t>(k)] = to_double(binom[static_cast<std::size_t>(k)]);
  CHECK(compare_exact(emp, exact).pass);
}

TEST_CASE("simulated weight histogram tracks the exact hamming power row") {
  SimConfig cfg;
  cfg.spec = {60, Rational(3, 5), SubsetUniform{6}};
  cfg.start = SimStart::zeros();
  cfg.horizon = 10;
  cfg.n_trajectories = 20000;
  cfg.seed = 555;
  const EmpiricalHamming emp = run(cfg);
  const auto row = hamming_power_row<SignedLog>(cfg.spec, 0, cfg.horizon);
  std::vector<double> exact(61);
  for (int k = 0; k <= 60; ++k) exact[static_cast<std::size_t>(k)] = to_double(row[static_cast<std::size_t>(k)]);
  const CompareResult r = compare_exact(emp, exact);
  CHECK(r.pass);
  CHECK(r.tv < 0.02);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.spec = {10, Rational(3, 5), SubsetUniform{1}};
  cfg.n_trajectories = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg.n_trajectories = 1;
  cfg.start = SimStart::of_weight(11);
  CHECK_THROWS_AS(run(cfg), ConfigError);
}
