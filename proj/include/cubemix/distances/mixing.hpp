#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cubemix/distances/chi2.hpp"
#include "cubemix/distances/tv.hpp"
#include "cubemix/errors.hpp"

namespace cubemix {

enum class Metric { Chi2FullSup, Chi2Hamming, TvFull, TvHamming, TvUpperBound };

inline const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Chi2FullSup: return "chi2_full";
    case Metric::Chi2Hamming: return "chi2_hamming";
    case Metric::TvFull: return "tv_full";
    case Metric::TvHamming: return "tv_hamming";
    case Metric::TvUpperBound: return "tv_upper_bound";
  }
  return "?";
}

struct MixingStart {
  enum Kind { Zeros, Ones, Weight, Sup } kind = Zeros;
  std::int64_t weight = 0;

  static MixingStart zeros() { return {Zeros, 0}; }
  static MixingStart ones() { return {Ones, 0}; }
  static MixingStart of_weight(std::int64_t k) { return {Weight, k}; }
  static MixingStart sup() { return {Sup, 0}; }
};

inline constexpr std::int64_t kMixingSearchCeiling = 1'000'000'000;

// Log-domain distance curve t -> log(distance); built once, evaluated many
// times during the doubling/bisection search.
class DistanceEvaluator {
 public:
  DistanceEvaluator(const ProcessSpec& spec, Metric metric, MixingStart start)
      : spec_(spec), metric_(metric), start_(start) {
    validate(spec);
    switch (metric) {
      case Metric::Chi2FullSup:
        prepare_chi2_terms(0, /*pointwise=*/false);
        break;
      case Metric::Chi2Hamming:
        prepare_chi2_terms(resolve_weight(), /*pointwise=*/false);
        break;
      case Metric::TvUpperBound:
        prepare_chi2_terms(resolve_weight(), /*pointwise=*/true);
        break;
      case Metric::TvHamming:
        hs_.emplace(eigenvalues_hamming<SignedLog>(spec));
        break;
      case Metric::TvFull:
        if (spec.n > kDenseBruteforceMaxN)
          throw CapacityError("mixing_time: full-state TV needs N <= 12 "
                              "(use tv_upper_bound or the Hamming metric)");
        break;
    }
  }

  double log_distance(std::int64_t t) const {
    switch (metric_) {
      case Metric::Chi2FullSup:
      case Metric::Chi2Hamming:
      case Metric::TvUpperBound: {
        std::vector<SignedLog> terms;
        terms.reserve(log_coeff_.size());
        for (std::size_t i = 0; i < log_coeff_.size(); ++i)
          terms.push_back(SignedLog::from_log(
              +1, log_coeff_[i] + 2.0 * static_cast<double>(t) * log_rho_[i]));
        const SignedLog chi2 = stable_sum(terms);
        if (metric_ == Metric::TvUpperBound) return tv_upper_from_chi2(chi2).log_mag();
        return chi2.log_mag();
      }
      case Metric::TvHamming: {
        const std::int64_t k = start_.kind == MixingStart::Ones ? spec_.n
                               : start_.kind == MixingStart::Weight ? start_.weight
                                                                    : 0;
        return std::log(tv_hamming(*hs_, k, t));
      }
      case Metric::TvFull: {
        double v;
        if (start_.kind == MixingStart::Sup) {
          v = tv_dense_sup<SignedLog>(spec_, t);
        } else {
          Mask x = 0;
          const std::int64_t k = start_.kind == MixingStart::Ones ? spec_.n
                                 : start_.kind == MixingStart::Weight ? start_.weight
                                                                      : 0;
          for (std::int64_t j = 1; j <= k; ++j) x |= Mask{1} << coord_bit(spec_.n, j);
          v = tv_dense<SignedLog>(spec_, x, t);
        }
        return std::log(v);
      }
    }
    return 0;
  }

 private:
  std::int64_t resolve_weight() const {
    switch (start_.kind) {
      case MixingStart::Zeros: return 0;
      case MixingStart::Ones: return spec_.n;
      case MixingStart::Weight: return start_.weight;
      case MixingStart::Sup: return 0;  // sup is attained at the zero vector
    }
    return 0;
  }

  void prepare_chi2_terms(std::int64_t k, bool pointwise) {
    const HammingSpectrum<SignedLog> hs = eigenvalues_hamming<SignedLog>(spec_);
    const std::vector<SignedLog> qk = hs.basis.row(k);
    const SignedLog g2 = ScalarOps<SignedLog>::from_mpq(
        (hs.basis.q() / hs.basis.p()) * (hs.basis.q() / hs.basis.p()));
    for (std::int64_t n = 1; n <= spec_.n; ++n) {
      const SignedLog rho = hs.rho[static_cast<std::size_t>(n)];
      if (rho.is_zero()) continue;
      SignedLog coeff;
      if (pointwise) {
        std::vector<SignedLog> inner;
        const std::int64_t klo = std::max<std::int64_t>(0, n - (spec_.n - k));
        const std::int64_t khi = std::min(n, k);
        for (std::int64_t j = klo; j <= khi; ++j)
          inner.push_back(ScalarOps<SignedLog>::binomial(k, j) * pow_int(g2, j) *
                          ScalarOps<SignedLog>::binomial(spec_.n - k, n - j));
        coeff = hs.basis.h_weight(n) * stable_sum(inner) /
                ScalarOps<SignedLog>::binomial(spec_.n, n);
      } else {
        const SignedLog q = qk[static_cast<std::size_t>(n)];
        coeff = hs.basis.h_weight(n) * q * q;
      }
      if (coeff.is_zero()) continue;
      log_coeff_.push_back(coeff.log_mag());
      log_rho_.push_back(rho.abs().log_mag());
    }
  }

  ProcessSpec spec_;
  Metric metric_;
  MixingStart start_;
  std::vector<double> log_coeff_, log_rho_;   // chi2 family
  std::optional<HammingSpectrum<SignedLog>> hs_;  // tv_hamming
};

// Smallest t with distance <= eps, by doubling probes then bisection on the
// nonincreasing curve.  Throws DivergenceError past the search ceiling
// (periodic or reducible configurations keep the distance bounded away
// from zero; p = 1/2 with z = N is the canonical case).
inline std::int64_t mixing_time(const ProcessSpec& spec, double eps, Metric metric,
                                MixingStart start = MixingStart::sup(),
                                std::int64_t ceiling = kMixingSearchCeiling) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("mixing_time: eps must lie in (0, 1)");
  const DistanceEvaluator eval(spec, metric, start);
  const double target = std::log(eps);

  if (eval.log_distance(1) <= target) return 1;
  std::int64_t lo = 1, hi = 2;
  while (eval.log_distance(hi) > target) {
    lo = hi;
    if (hi > ceiling)
      throw DivergenceError("mixing_time: distance stayed above eps up to the "
                            "search ceiling (periodic/reducible configuration?)");
    hi *= 2;
  }
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (eval.log_distance(mid) > target) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace cubemix
