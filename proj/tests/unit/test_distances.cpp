#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cubemix/distances/chi2.hpp"
#include "cubemix/distances/mixing.hpp"
#include "cubemix/distances/tv.hpp"
#include "cubemix/process/kernels.hpp"

using namespace cubemix;

TEST_CASE("chi2 vanishes for the one-step independence chain") {
  const ProcessSpec spec{6, Rational(3, 5), IidBernoulli{Rational(3, 5)}};
  const auto hs = eigenvalues_hamming<Rational>(spec);
  for (std::int64_t k = 0; k <= 6; ++k)
    CHECK(chi2_hamming<Rational>(hs, k, 1) == 0);
}

TEST_CASE("iid chain from the zero start matches its closed form") {
  // N=2, p=3/5, alpha=3/10, t=1: (1 + 1.5 * 0.25)^2 - 1 = 0.890625
  const ProcessSpec spec{2, Rational(3, 5), IidBernoulli{Rational(3, 10)}};
  const Rational v = chi2_hamming<Rational>(spec, 0, 1);
  CHECK(v == Rational(57, 64));
  CHECK(to_double(v) == Catch::Approx(0.890625));
  const SignedLog closed =
      chi2_iid_closed_form(2, Rational(3, 5), 1 - Rational(3, 10) / Rational(3, 5), 1);
  CHECK(to_double(closed) == Catch::Approx(0.890625).epsilon(1e-12));
}

TEST_CASE("full-flip law: sup chi2 equals (1 + (p/q)(q/p)^{2t})^N - 1") {
  // z = N is the alpha = 1 iid law: rho_n = (-q/p)^n, so the zero-start
  // chi2 is the geometric closed form with the h_n weight (p/q)^n intact.
  const ProcessSpec spec{5, Rational(3, 4), SubsetUniform{5}};
  const auto hs = eigenvalues_hamming<Rational>(spec);
  for (std::int64_t t = 1; t <= 3; ++t) {
    const Rational want =
        pow_int(1 + Rational(3) * pow_int(Rational(1, 3), 2 * t), 5) - 1;
    CHECK(chi2_full_sup<Rational>(hs, t) == want);
  }
}

TEST_CASE("full-flip law from the critical start: log-scale limit") {
  // pointwise chi2 at ||x|| = Np tends to (1 + (q/p)^{2t})^N - 1 on the
  // logarithmic scale (the h_n weight cancels against the start factor)
  const std::int64_t n = 200;
  const ProcessSpec spec{n, Rational(3, 5), SubsetUniform{n}};
  const auto hs = eigenvalues_hamming<SignedLog>(spec);
  for (std::int64_t t = 2; t <= 3; ++t) {
    const double log_chi = chi2_full_pointwise<SignedLog>(hs, 120, t).log_mag();
    const double log_lim =
        std::log(std::expm1(n * std::log1p(std::pow(2.0 / 3.0, 2.0 * t))));
    CHECK(std::fabs(log_chi / log_lim - 1.0) < 0.02);
  }
}

TEST_CASE("hypergeometric example: chi2 = 5/3 at one step") {
  const ProcessSpec spec{4, Rational(1, 2), SubsetUniform{2}};
  const auto hs = eigenvalues_hamming<Rational>(spec);
  CHECK(chi2_full_sup<Rational>(hs, 1) == Rational(5, 3));
  // cross-check against the dense kernel
  const auto sp = kernel_spectral<Rational>(spec, 1);
  const auto pi = stationary_dense<Rational>(spec);
  std::vector<Rational> row(sp.a.begin(), sp.a.begin() + 16);
  CHECK(chi2_from_dense_row<Rational>(row, pi) == Rational(5, 3));
}

TEST_CASE("pointwise chi2 equals the sup at the zero start and dominates the Hamming one") {
  const ProcessSpec spec{8, Rational(3, 5), SubsetUniform{3}};
  const auto hs = eigenvalues_hamming<Rational>(spec);
  for (std::int64_t t = 1; t <= 3; ++t) {
    CHECK(chi2_full_pointwise<Rational>(hs, 0, t) == chi2_full_sup<Rational>(hs, t));
    for (std::int64_t k = 0; k <= 8; ++k)
      CHECK(chi2_full_pointwise<Rational>(hs, k, t) >= chi2_hamming<Rational>(hs, k, t));
  }
}

TEST_CASE("pointwise chi2 agrees with the brute-force kernel chi2") {
  const ProcessSpec spec{2, Rational(1, 2), SubsetUniform{2}};
  const auto hs = eigenvalues_hamming<Rational>(spec);
  const auto bf = kernel_bruteforce<Rational>(spec);
  const auto pi = stationary_dense<Rational>(spec);
  // x = (1,0) has weight 1
  const Mask x = Mask{1} << coord_bit(2, 1);
  std::vector<Rational> row(bf.a.begin() + x * 4, bf.a.begin() + (x + 1) * 4);
  CHECK(chi2_full_pointwise<Rational>(hs, 1, 1) == chi2_from_dense_row<Rational>(row, pi));
}

TEST_CASE("chi2 curves are nonincreasing in t") {
  for (const auto& spec :
       {ProcessSpec{7, Rational(3, 5), SubsetUniform{2}},
        ProcessSpec{7, Rational(3, 4), IidBernoulli{Rational(3, 10)}},
        ProcessSpec{7, Rational(3, 5), DeFinettiLebesgue{}}}) {
    const auto hs = eigenvalues_hamming<Rational>(spec);
    for (std::int64_t k = 0; k <= 7; ++k) {
      Rational prev = chi2_hamming<Rational>(hs, k, 0);
      for (std::int64_t t = 1; t <= 6; ++t) {
        const Rational cur = chi2_hamming<Rational>(hs, k, t);
        CHECK(cur <= prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("tv at time zero from the zero start is 1 - q^N") {
  const ProcessSpec spec{6, Rational(3, 5), SubsetUniform{1}};
  // time 0 is a point mass; compare against the stationary weight directly
  const auto pi = stationary_hamming<Rational>(spec);
  const double want = 1.0 - to_double(pi[0]);
  CHECK(want == Catch::Approx(1.0 - std::pow(0.4, 6)).epsilon(1e-12));
}

TEST_CASE("tv of the independence chain is zero after one step") {
  const ProcessSpec spec{6, Rational(3, 5), IidBernoulli{Rational(3, 5)}};
  const auto hs = eigenvalues_hamming<SignedLog>(spec);
  CHECK(tv_hamming(hs, 0, 1) == Catch::Approx(0.0).margin(1e-14));
  CHECK(tv_dense<SignedLog>(spec, 0, 1) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("hamming tv from symmetric starts equals dense tv") {
  for (const auto& spec :
       {ProcessSpec{6, Rational(3, 5), SubsetUniform{2}},
        ProcessSpec{8, Rational(3, 4), IidBernoulli{Rational(3, 10)}}}) {
    const auto hs = eigenvalues_hamming<SignedLog>(spec);
    for (std::int64_t t = 1; t <= 4; ++t) {
      CHECK(tv_hamming(hs, 0, t) ==
            Catch::Approx(tv_dense<SignedLog>(spec, 0, t)).margin(1e-12));
      const Mask ones = (Mask{1} << spec.n) - 1;
      CHECK(tv_hamming(hs, spec.n, t) ==
            Catch::Approx(tv_dense<SignedLog>(spec, ones, t)).margin(1e-12));
    }
  }
}

TEST_CASE("tv upper bound from chi2") {
  CHECK(tv_upper_from_chi2(0.0) == 0.0);
  CHECK(tv_upper_from_chi2(1.0) == 0.5);
  CHECK(to_double(tv_upper_from_chi2(SignedLog::from_double(4.0))) ==
        Catch::Approx(1.0).epsilon(1e-12));
  // 4 tv^2 <= chi2 on a small grid
  const ProcessSpec spec{6, Rational(3, 5), SubsetUniform{2}};
  const auto hs = eigenvalues_hamming<Rational>(spec);
  for (std::int64_t t = 1; t <= 5; ++t) {
    for (std::int64_t k = 0; k <= 6; ++k) {
      Mask x = 0;
      for (std::int64_t j = 1; j <= k; ++j) x |= Mask{1} << coord_bit(6, j);
      const double tv = tv_dense<SignedLog>(spec, x, t);
      const double chi2 = to_double(chi2_full_pointwise<Rational>(hs, k, t));
      CHECK(4.0 * tv * tv <= chi2 * (1 + 1e-9) + 1e-15);
    }
  }
}

TEST_CASE("mixing time of the independence chain is one") {
  const ProcessSpec spec{64, Rational(3, 5), IidBernoulli{Rational(3, 5)}};
  CHECK(mixing_time(spec, 0.25, Metric::Chi2FullSup) == 1);
  CHECK(mixing_time(spec, 1e-6, Metric::Chi2Hamming, MixingStart::of_weight(10)) == 1);
}

TEST_CASE("periodic configuration raises a divergence error") {
  const ProcessSpec spec{6, Rational(1, 2), SubsetUniform{6}};
  CHECK_THROWS_AS(mixing_time(spec, 0.25, Metric::Chi2FullSup), DivergenceError);
  CHECK_THROWS_AS(mixing_time(spec, 0.25, Metric::TvHamming), DivergenceError);
}

TEST_CASE("chi2 mixing time of the sparse subset chain at N = 1024") {
  // Frozen from the spectral curve itself: the crossing of 0.25 sits at 2712
  // steps, about 1.27x the bare (Np/2) ln N = 2129.3 (the window constant
  // C* ~ 1.9 is still a quarter of ln N at this size).
  const ProcessSpec spec{1024, Rational(3, 5), SubsetUniform{1}};
  const std::int64_t t = mixing_time(spec, 0.25, Metric::Chi2FullSup);
  CHECK(t == 2712);
  // independent verification of the crossing by direct evaluation
  const auto hs = eigenvalues_hamming<SignedLog>(spec);
  CHECK(to_double(chi2_full_sup<SignedLog>(hs, t - 1)) > 0.25);
  CHECK(to_double(chi2_full_sup<SignedLog>(hs, t)) <= 0.25);
  const double ratio = static_cast<double>(t) / (1024 * 0.6 / 2.0 * std::log(1024.0));
  CHECK(ratio == Catch::Approx(1.2736).margin(0.001));
}

TEST_CASE("tv mixing consistency: t_mix(eps) <= t2_mix(4 eps^2)") {
  // from 4 tv^2 <= chi2: if chi2 <= 4 eps^2 then tv <= eps
  for (const auto& spec :
       {ProcessSpec{6, Rational(3, 5), SubsetUniform{1}},
        ProcessSpec{8, Rational(3, 4), SubsetUniform{2}}}) {
    const double eps = 0.25;
    const std::int64_t t_tv = mixing_time(spec, eps, Metric::TvFull, MixingStart::sup());
    const std::int64_t t_chi =
        mixing_time(spec, 4 * eps * eps, Metric::Chi2FullSup);
    CHECK(t_tv <= t_chi);
  }
}

TEST_CASE("closed forms match the spectral sums across the grid") {
  // iid/contingency chains: spectral sum vs (1 + (p/q) rho^{2t})^N - 1
  for (const std::int64_t n : {std::int64_t{16}, std::int64_t{256}, std::int64_t{1024}}) {
    for (const auto& alpha : {Rational(3, 10), Rational(3, 5), Rational(1)}) {
      const ProcessSpec spec{n, Rational(3, 5), IidBernoulli{alpha}};
      const auto hs = eigenvalues_hamming<SignedLog>(spec);
      for (const std::int64_t t : {std::int64_t{1}, std::int64_t{5}, std::int64_t{40}}) {
        const SignedLog spectral = chi2_full_sup<SignedLog>(hs, t);
        const SignedLog closed =
            chi2_iid_closed_form(n, Rational(3, 5), 1 - alpha / Rational(3, 5), t);
        if (closed.is_zero()) {
          CHECK(spectral.is_zero());
        } else {
          CHECK(spectral.log_mag() == Catch::Approx(closed.log_mag()).margin(1e-10));
        }
      }
    }
  }
}
