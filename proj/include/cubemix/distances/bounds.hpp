#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cubemix/distances/chi2.hpp"
#include "cubemix/distances/mixing.hpp"
#include "cubemix/errors.hpp"

namespace cubemix {

// --- Cutoff window -----------------------------------------------------

// One scan entry: t_C = round((Np/2z)(ln N + C)), the chi^2 value there, and
// the window bounds e^{-C} p/q (below) and exp{e^{-C} p/q} - 1 (above).
struct CutoffEntry {
  double c = 0;
  bool valid = false;          // false when t_C < 1 (C too negative for N)
  std::int64_t t_c = 0;
  double log_chi2 = 0;         // natural log of chi2_full_sup(t_C)
  double chi2 = 0;             // exp of the above (may overflow to inf)
  double lower_bound = 0;      // e^{-C} (p/q)
  double upper_bound = 0;      // exp{e^{-C} (p/q)} - 1
};

struct CutoffReport {
  std::int64_t n = 0;
  double p = 0;
  std::int64_t z = 0;
  std::vector<CutoffEntry> entries;
};

inline CutoffReport cutoff_window(const ProcessSpec& spec,
                                  const std::vector<double>& c_grid) {
  validate(spec);
  const auto* su = std::get_if<SubsetUniform>(&spec.law);
  if (su == nullptr)
    throw RegimeError("cutoff_window: defined for the subset-uniform law");
  const double p = to_double(spec.p);
  const double q = 1.0 - p;
  const double np = static_cast<double>(spec.n) * p;

  const HammingSpectrum<SignedLog> hs = eigenvalues_hamming<SignedLog>(spec);
  CutoffReport rep;
  rep.n = spec.n;
  rep.p = p;
  rep.z = su->z;
  for (const double c : c_grid) {
    CutoffEntry e;
    e.c = c;
    const double t_real =
        np / (2.0 * static_cast<double>(su->z)) * (std::log(spec.n) + c);
    const std::int64_t t = static_cast<std::int64_t>(std::floor(t_real + 0.5));
    if (t < 1) {
      e.valid = false;
      rep.entries.push_back(e);
      continue;
    }
    e.valid = true;
    e.t_c = t;
    const SignedLog chi2 = chi2_full_sup<SignedLog>(hs, t);
    e.log_chi2 = chi2.log_mag();
    e.chi2 = chi2.to_double();
    e.lower_bound = std::exp(-c) * p / q;
    e.upper_bound = std::expm1(std::exp(-c) * p / q);
    rep.entries.push_back(e);
  }
  return rep;
}

// --- Wilson eigenfunction lower bound ----------------------------------

// Phi(x) = ||x|| - Np with eigenvalue lambda = 1 - z/(Np).  The default
// displacement bound R = z^2 holds for every start (at most z coordinates
// move per step); the variant R = (1 - 1/N) z^2 + z is the stationary-start
// second moment and is reported alongside for comparison.
struct WilsonBound {
  double lambda = 0;
  double r_default = 0;
  double r_paper_variant = 0;
  double bound = 0;                // with r_default; valid for all starts
  double bound_paper_variant = 0;  // with the second-moment R
};

inline WilsonBound wilson_lower_bound(const ProcessSpec& spec, double eps) {
  validate(spec);
  const auto* su = std::get_if<SubsetUniform>(&spec.law);
  if (su == nullptr)
    throw RegimeError("wilson_lower_bound: defined for the subset-uniform law");
  if (eps <= 0 || eps >= 1) throw std::domain_error("wilson_lower_bound: eps in (0,1)");
  const double n = static_cast<double>(spec.n);
  const double p = to_double(spec.p);
  const double z = static_cast<double>(su->z);
  const double np = n * p;

  WilsonBound w;
  w.lambda = 1.0 - z / np;
  if (!(0.5 < w.lambda && w.lambda < 1.0))
    throw RegimeError("wilson_lower_bound: needs 1/2 < 1 - z/(Np) < 1, i.e. z/N < p/2");
  w.r_default = z * z;
  w.r_paper_variant = (1.0 - 1.0 / n) * z * z + z;
  const double phi0_sq = np * np;
  const auto bound_for = [&](double r) {
    return 1.0 / (2.0 * std::log(1.0 / w.lambda)) *
           (std::log((1.0 - w.lambda) * phi0_sq / (2.0 * r)) +
            std::log((1.0 - eps) / eps));
  };
  w.bound = bound_for(w.r_default);
  w.bound_paper_variant = bound_for(w.r_paper_variant);
  return w;
}

// --- General theta lower bound ------------------------------------------

// theta_N = min_j P(Z[j] = 1).  With a the largest constant satisfying
// (1 - theta)^(a/theta) > 1 - p/2, the chain is at TV distance above p/2
// for all t <= a/theta, so t_mix(eps) >= a/theta = ln(1 - p/2)/ln(1 - theta)
// whenever eps <= 1/4 <= p/2.  theta = 0 means reducible: infinity.
inline double theta_lower_bound(const ProcessSpec& spec, double eps) {
  validate(spec);
  if (eps <= 0 || eps > 0.25)
    throw RegimeError("theta_lower_bound: certified for eps <= 1/4 only");
  const Rational theta = theta_parameter(spec);
  if (theta == 0) return std::numeric_limits<double>::infinity();
  if (theta == 1) return 0.0;
  const double p = to_double(spec.p);
  return std::log(1.0 - p / 2.0) / std::log(1.0 - to_double(theta));
}

// --- De Finetti slow-mixing floor ----------------------------------------

// At t = floor(aN/ln N), the Lebesgue-mixture chain's Hamming chi^2 from the
// zero start dominates its own n = floor(pN) spectral term, whose log grows
// like (-ln q - 2a) N.  Requires p > 1/2 and a < -(ln q)/2.
struct DefinettiFloor {
  std::int64_t t = 0;
  SignedLog chi2;
  SignedLog paper_floor;
  bool holds = false;  // chi2 >= paper_floor (up to log-float rounding)
};

inline DefinettiFloor definetti_floor(const ProcessSpec& spec, double a) {
  validate(spec);
  if (!std::holds_alternative<DeFinettiLebesgue>(spec.law))
    throw RegimeError("definetti_floor: defined for the definetti-lebesgue law");
  const double p = to_double(spec.p);
  const double q = 1.0 - p;
  if (!(p > 0.5)) throw RegimeError("definetti_floor: needs p > 1/2");
  if (!(a > 0 && a < -std::log(q) / 2.0))
    throw RegimeError("definetti_floor: needs 0 < a < -(ln q)/2");

  DefinettiFloor out;
  out.t = static_cast<std::int64_t>(
      std::floor(a * static_cast<double>(spec.n) / std::log(spec.n)));
  if (out.t < 1) throw RegimeError("definetti_floor: aN/ln N below one step");

  const HammingSpectrum<SignedLog> hs = eigenvalues_hamming<SignedLog>(spec);
  out.chi2 = chi2_hamming<SignedLog>(hs, 0, out.t);

  const std::int64_t n0 = static_cast<std::int64_t>(
      std::floor(to_double(spec.p) * static_cast<double>(spec.n)));
  const double tt = 2.0 * static_cast<double>(out.t);
  const double log_floor =
      log_binomial(spec.n, n0) + static_cast<double>(n0) * std::log(p / q) +
      tt * std::log(p / static_cast<double>(n0 + 1)) +
      tt * std::log1p(-std::pow(-q / p, static_cast<double>(n0 + 1)));
  out.paper_floor = SignedLog::from_log(+1, log_floor);
  out.holds = out.chi2.log_mag() >= log_floor - 1e-9 * std::fabs(log_floor);
  return out;
}

}  // namespace cubemix
