#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "cubemix/distances/chi2.hpp"
#include "cubemix/process/kernels.hpp"

namespace cubemix {

// 1/2 sum |P - pi| over dense states for a start mask; any law, N <= 12..14.
template <class S>
double tv_dense(const ProcessSpec& spec, Mask x, std::int64_t t) {
  const std::vector<S> row = kernel_spectral_row<S>(spec, x, t);
  const std::vector<S> pi = stationary_dense<S>(spec);
  double acc = 0;
  for (std::size_t y = 0; y < row.size(); ++y)
    acc += std::fabs(to_double(row[y]) - to_double(pi[y]));
  return 0.5 * acc;
}

// Representative starts for a worst-start scan.  Exchangeable laws need one
// mask per weight class; block updates one mask per multiset of per-block
// weights; anything else scans the whole cube.
inline std::vector<Mask> tv_sup_representatives(const ProcessSpec& spec) {
  std::vector<Mask> reps;
  if (is_exchangeable(spec.law)) {
    for (std::int64_t k = 0; k <= spec.n; ++k) {
      Mask x = 0;
      for (std::int64_t j = 1; j <= k; ++j) x |= Mask{1} << coord_bit(spec.n, j);
      reps.push_back(x);
    }
    return reps;
  }
  if (const auto* bu = std::get_if<BlockUpdate>(&spec.law)) {
    const std::int64_t nb = spec.n / bu->beta;
    std::set<std::vector<std::int64_t>> seen;
    for (Mask x = 0; x < (Mask{1} << spec.n); ++x) {
      std::vector<std::int64_t> sig(static_cast<std::size_t>(nb), 0);
      for (std::int64_t j = 1; j <= spec.n; ++j)
        if (mask_get(x, spec.n, j)) ++sig[static_cast<std::size_t>((j - 1) / bu->beta)];
      std::sort(sig.begin(), sig.end());
      if (seen.insert(std::move(sig)).second) reps.push_back(x);
    }
    return reps;
  }
  for (Mask x = 0; x < (Mask{1} << spec.n); ++x) reps.push_back(x);
  return reps;
}

// Worst-start dense TV over the representative starts.
template <class S>
double tv_dense_sup(const ProcessSpec& spec, std::int64_t t) {
  double best = 0;
  for (const Mask x : tv_sup_representatives(spec))
    best = std::max(best, tv_dense<S>(spec, x, t));
  return best;
}

// TV of the Hamming projection from a weight-class start.  For starts 0 and
// N the full-cube TV equals this projection TV: the conditional law given
// those starts is uniform inside each weight class.
template <class S>
double tv_hamming(const HammingSpectrum<S>& hs, std::int64_t start_weight,
                  std::int64_t t) {
  const std::int64_t n = hs.basis.dim();
  if (start_weight < 0 || start_weight > n)
    throw std::domain_error("tv_hamming: start weight out of [0, N]");
  const std::vector<S> qi = hs.basis.row(start_weight);
  std::vector<S> h(static_cast<std::size_t>(n) + 1);
  for (std::int64_t m = 0; m <= n; ++m) h[static_cast<std::size_t>(m)] = hs.basis.h_weight(m);

  double acc = 0;
  std::vector<S> terms;
  for (std::int64_t j = 0; j <= n; ++j) {
    const std::vector<S> qj = hs.basis.row(j);
    terms.clear();
    for (std::int64_t m = 1; m <= n; ++m)
      terms.push_back(pow_int(hs.rho[static_cast<std::size_t>(m)], t) *
                      h[static_cast<std::size_t>(m)] * qi[static_cast<std::size_t>(m)] *
                      qj[static_cast<std::size_t>(m)]);
    const S dev = ScalarOps<S>::sum(terms);  // P_t(j|i)/B_j - 1
    const S bj = ScalarOps<S>::from_mpq(binomial_rational(n, j) *
                                        pow_int(hs.basis.p(), j) *
                                        pow_int(hs.basis.q(), n - j));
    acc += std::fabs(to_double(bj * dev));
  }
  return 0.5 * acc;
}

// TV upper bound from chi^2: 4 TV^2 <= chi2, i.e. TV <= sqrt(chi2)/2.
inline double tv_upper_from_chi2(double chi2_value) {
  if (chi2_value < 0) throw std::domain_error("tv_upper_from_chi2: chi2 must be >= 0");
  return 0.5 * std::sqrt(chi2_value);
}

inline SignedLog tv_upper_from_chi2(const SignedLog& chi2_value) {
  if (chi2_value.sign() < 0) throw std::domain_error("tv_upper_from_chi2: chi2 must be >= 0");
  if (chi2_value.is_zero()) return SignedLog::zero();
  return SignedLog::from_log(+1, 0.5 * chi2_value.log_mag() - 0.6931471805599453);
}

}  // namespace cubemix
