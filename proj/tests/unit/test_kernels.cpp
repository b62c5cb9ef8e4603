#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cubemix/experiments/verify.hpp"
#include "cubemix/process/kernels.hpp"
#include "cubemix/process/step.hpp"

using namespace cubemix;

TEST_CASE("one-coordinate chain by hand") {
  // N = 1, z = 1, p = 3/5: from 0 the coordinate is forced to 1; from 1 it
  // flips back with probability q/p = 2/3.
  const ProcessSpec spec{1, Rational(3, 5), SubsetUniform{1}};
  const auto bf = kernel_bruteforce<Rational>(spec);
  CHECK(bf.at(0, 0) == 0);
  CHECK(bf.at(0, 1) == 1);
  CHECK(bf.at(1, 0) == Rational(2, 3));
  CHECK(bf.at(1, 1) == Rational(1, 3));

  const auto sp = kernel_spectral<Rational>(spec, 1);
  CHECK(sp.a == bf.a);

  const auto hk = kernel_hamming<Rational>(spec);
  CHECK(hk.at(0, 1) == 1);
  CHECK(hk.at(1, 0) == Rational(2, 3));
}

TEST_CASE("independence chain mixes in exactly one step") {
  const ProcessSpec spec{5, Rational(3, 5), IidBernoulli{Rational(3, 5)}};
  const auto sp = kernel_spectral<Rational>(spec, 1);
  const auto pi = stationary_dense<Rational>(spec);
  for (Mask x = 0; x < 32; ++x)
    for (Mask y = 0; y < 32; ++y) CHECK(sp.at(x, y) == pi[y]);
}

TEST_CASE("spectral kernels decay to stationarity when the spectrum is strictly inside the disk") {
  const ProcessSpec spec{4, Rational(3, 5), SubsetUniform{1}};
  const auto k = kernel_spectral<SignedLog>(spec, 400);
  const auto pi = stationary_dense<Rational>(spec);
  for (Mask x = 0; x < 16; ++x)
    for (Mask y = 0; y < 16; ++y)
      CHECK(to_double(k.at(x, y)) == Catch::Approx(to_double(pi[y])).margin(1e-12));
}

TEST_CASE("full flip at p = 1/2, z = N sends weight 0 to weight N") {
  const ProcessSpec spec{4, Rational(1, 2), SubsetUniform{4}};
  const auto hk = kernel_hamming<Rational>(spec);
  for (std::int64_t j = 0; j < 4; ++j) CHECK(hk.at(0, j) == 0);
  CHECK(hk.at(0, 4) == 1);
}

TEST_CASE("hamming kernel is the weight-class aggregation of the dense kernel") {
  for (const auto& spec :
       {ProcessSpec{6, Rational(3, 5), SubsetUniform{2}},
        ProcessSpec{5, Rational(3, 4), IidBernoulli{Rational(3, 10)}},
        ProcessSpec{6, Rational(1, 2), DeFinettiLebesgue{}}}) {
    const auto bf = kernel_bruteforce<Rational>(spec);
    CHECK(lumping_matches(spec, bf));
  }
}

TEST_CASE("spectral equals brute force across a small grid") {
  for (const auto& spec : oracle_grid(5, 4, 31)) {
    const auto bf = kernel_bruteforce<Rational>(spec);
    CHECK(spectral_equals_bruteforce_exact(spec, bf));
    CHECK(spectral_logfloat_error(spec, bf) <= 1e-12);
    CHECK(spectral_power_matches(spec, bf, 3));
  }
}

TEST_CASE("oracle kernels are reversible, stochastic, and restriction-consistent") {
  const ProcessSpec spec{5, Rational(3, 5), BlockUpdate{1}};
  const auto bf = kernel_bruteforce<Rational>(spec);
  const auto rep = structural_checks_exact(spec, bf, true);
  CHECK(rep.rows_sum_to_one);
  CHECK(rep.detailed_balance);
  CHECK(rep.condition2);
}

TEST_CASE("random-walk representation: sign resolution against the oracle") {
  // the forced-flip start: x = 0, Z = all-ones, p = 1/2 leaves no mass at 0,
  // which only the minus form reproduces
  const ProcessSpec flip{3, Rational(1, 2), SubsetUniform{3}};
  const auto bf = kernel_bruteforce<Rational>(flip);
  CHECK(bf.at(0, 0) == 0);
  const auto minus = kernel_rw_representation<Rational>(flip, 0, 1);
  CHECK(minus.pmf[0] == 0);
  CHECK(minus.exact);
  const auto plus = kernel_rw_representation_with_sign<Rational>(flip, 0, 1, +1);
  CHECK(plus.pmf[0] != 0);

  CHECK(rw_minus_matches_oracle(flip, bf));
  const ProcessSpec generic{3, Rational(3, 5), SubsetUniform{1}};
  CHECK(rw_plus_form_differs(generic, kernel_bruteforce<Rational>(generic)));
}

TEST_CASE("random-walk representation rows agree with spectral rows for t <= 3") {
  const ProcessSpec spec{4, Rational(3, 5), SubsetUniform{2}};
  for (std::int64_t t = 1; t <= 3; ++t) {
    const auto sp = kernel_spectral<Rational>(spec, t);
    for (Mask x = 0; x < 16; ++x) {
      const auto rw = kernel_rw_representation<Rational>(spec, x, t);
      Rational total(0);
      for (Mask y = 0; y < 16; ++y) {
        CHECK(rw.pmf[y] == sp.at(x, y));
        total += rw.pmf[y];
      }
      CHECK(total == 1);
    }
  }
}

TEST_CASE("random-walk representation budget and Monte Carlo fallback") {
  const ProcessSpec spec{4, Rational(3, 5), IidBernoulli{Rational(3, 10)}};
  RwOptions tight;
  tight.budget = 4;  // 16 Z-values > 4
  CHECK_THROWS_AS(kernel_rw_representation<Rational>(spec, 0, 1, tight), CapacityError);
  tight.allow_monte_carlo = true;
  tight.mc_samples = 40000;
  const auto mc = kernel_rw_representation_with_sign<SignedLog>(spec, 0, 1, -1, tight);
  CHECK_FALSE(mc.exact);
  CHECK(mc.max_std_error > 0);
  const auto exact_row = kernel_spectral_row<Rational>(spec, 0, 1);
  for (Mask y = 0; y < 16; ++y)
    CHECK(to_double(mc.pmf[y]) ==
          Catch::Approx(to_double(exact_row[y])).margin(6 * mc.max_std_error + 1e-6));
}

TEST_CASE("spectral row extraction matches the full kernel") {
  const ProcessSpec spec{6, Rational(3, 5), BlockUpdate{2}};
  const auto full = kernel_spectral<Rational>(spec, 2);
  for (const Mask x : {Mask{0}, Mask{5}, Mask{63}}) {
    const auto row = kernel_spectral_row<Rational>(spec, x, 2);
    for (Mask y = 0; y < 64; ++y) CHECK(row[y] == full.at(x, y));
  }
}

TEST_CASE("hamming power rows match iterated hamming kernels") {
  const ProcessSpec spec{7, Rational(3, 5), SubsetUniform{2}};
  const auto hk = kernel_hamming<Rational>(spec);
  // square the kernel by hand
  std::vector<Rational> p2(8 * 8, Rational(0));
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      for (int j = 0; j < 8; ++j)
        p2[static_cast<std::size_t>(i * 8 + j)] += hk.at(i, k) * hk.at(k, j);
  const auto row = hamming_power_row<Rational>(spec, 3, 2);
  for (int j = 0; j < 8; ++j)
    CHECK(row[static_cast<std::size_t>(j)] == p2[static_cast<std::size_t>(3 * 8 + j)]);
}

TEST_CASE("capacity guards") {
  const ProcessSpec spec{15, Rational(3, 5), SubsetUniform{1}};
  CHECK_THROWS_AS(kernel_spectral<SignedLog>(spec, 1), CapacityError);
  const ProcessSpec spec13{13, Rational(3, 5), SubsetUniform{1}};
  CHECK_THROWS_AS(kernel_bruteforce<SignedLog>(spec13), CapacityError);
}

TEST_CASE("step sampler honors the acceptance/rejection rules") {
  PhiloxStream rng(5, 77);
  // Z == 0 never happens for subset laws, but x = 0 must map into weight <= z
  const ProcessSpec spec{8, Rational(3, 5), SubsetUniform{3}};
  for (int i = 0; i < 200; ++i) {
    const Mask y = step_sample(spec, 0, rng);
    CHECK(mask_weight(y) == 3);  // from the zero vector every pick turns on
  }
  // p = 1/2: picked ones flip back with probability 1
  const ProcessSpec flip{6, Rational(1, 2), SubsetUniform{6}};
  const Mask ones = (Mask{1} << 6) - 1;
  for (int i = 0; i < 50; ++i) CHECK(step_sample(flip, ones, rng) == 0);
  // the identity law never moves
  ExplicitLaw lazy;
  lazy.pmf.assign(16, Rational(0));
  lazy.pmf[0] = 1;
  const ProcessSpec idle{4, Rational(3, 5), lazy};
  for (int i = 0; i < 50; ++i) CHECK(step_sample(idle, 5, rng) == 5);
}

TEST_CASE("empirical one-step distribution matches the kernel row") {
  const ProcessSpec spec{5, Rational(3, 5), BlockUpdate{1}};
  const auto bf = kernel_bruteforce<Rational>(spec);
  const Mask x0 = 11;
  std::vector<std::int64_t> counts(32, 0);
  const int n = 200000;
  PhiloxStream rng(1234, 0);
  for (int i = 0; i < n; ++i) ++counts[step_sample(spec, x0, rng)];
  double tv = 0;
  for (Mask y = 0; y < 32; ++y)
    tv += std::fabs(static_cast<double>(counts[y]) / n - to_double(bf.at(x0, y)));
  CHECK(0.5 * tv < 0.01);
}
