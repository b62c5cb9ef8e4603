#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubemix/errors.hpp"
#include "cubemix/process/kernels.hpp"
#include "cubemix/process/spectrum.hpp"

namespace cubemix {

// chi^2 of the Hamming projection after t steps from start weight k:
//   chi2_H(k, t) = sum_{n>=1} h_n rho_n^{2t} Q_n(k)^2.
// All terms are nonnegative, so log-float accumulation is well conditioned.
template <class S>
S chi2_hamming(const HammingSpectrum<S>& hs, std::int64_t k, std::int64_t t) {
  const std::int64_t n_dim = hs.basis.dim();
  if (k < 0 || k > n_dim) throw std::domain_error("chi2_hamming: start weight out of [0, N]");
  const std::vector<S> qk = hs.basis.row(k);
  std::vector<S> terms;
  terms.reserve(static_cast<std::size_t>(n_dim));
  for (std::int64_t n = 1; n <= n_dim; ++n) {
    const S q = qk[static_cast<std::size_t>(n)];
    terms.push_back(hs.basis.h_weight(n) * pow_int(hs.rho[static_cast<std::size_t>(n)], 2 * t) *
                    q * q);
  }
  return ScalarOps<S>::sum(terms);
}

template <class S>
S chi2_hamming(const ProcessSpec& spec, std::int64_t k, std::int64_t t) {
  return chi2_hamming(eigenvalues_hamming<S>(spec), k, t);
}

// Worst start: sup_x chi2(x, t) = chi2(0, t) = sum_n h_n rho_n^{2t},
// which coincides with chi2_hamming at k = 0 since Q_n(0) = 1.
template <class S>
S chi2_full_sup(const HammingSpectrum<S>& hs, std::int64_t t) {
  const std::int64_t n_dim = hs.basis.dim();
  std::vector<S> terms;
  terms.reserve(static_cast<std::size_t>(n_dim));
  for (std::int64_t n = 1; n <= n_dim; ++n)
    terms.push_back(hs.basis.h_weight(n) *
                    pow_int(hs.rho[static_cast<std::size_t>(n)], 2 * t));
  return ScalarOps<S>::sum(terms);
}

template <class S>
S chi2_full_sup(const ProcessSpec& spec, std::int64_t t) {
  return chi2_full_sup(eigenvalues_hamming<S>(spec), t);
}

// Full-cube chi^2 from a fixed start x, exchangeable law:
//   chi2(x, t) = sum_n h_n rho_n^{2t} C(N,n)^{-1} W_n(||x||),
// where W_n(h) = sum_{|A|=n} prod_{j in A} (1 - x[j]/p)^2 is the coefficient
// of s^n in (1 + (q/p)^2 s)^h (1 + s)^(N-h) (all terms positive).
template <class S>
S chi2_full_pointwise(const HammingSpectrum<S>& hs, std::int64_t weight_of_x,
                      std::int64_t t) {
  const std::int64_t n_dim = hs.basis.dim();
  const std::int64_t h = weight_of_x;
  if (h < 0 || h > n_dim)
    throw std::domain_error("chi2_full_pointwise: start weight out of [0, N]");
  const S g2 = ScalarOps<S>::from_mpq((hs.basis.q() / hs.basis.p()) *
                                      (hs.basis.q() / hs.basis.p()));
  std::vector<S> outer;
  outer.reserve(static_cast<std::size_t>(n_dim));
  std::vector<S> inner;
  for (std::int64_t n = 1; n <= n_dim; ++n) {
    inner.clear();
    const std::int64_t klo = std::max<std::int64_t>(0, n - (n_dim - h));
    const std::int64_t khi = std::min(n, h);
    for (std::int64_t k = klo; k <= khi; ++k)
      inner.push_back(ScalarOps<S>::binomial(h, k) * pow_int(g2, k) *
                      ScalarOps<S>::binomial(n_dim - h, n - k));
    outer.push_back(hs.basis.h_weight(n) *
                    pow_int(hs.rho[static_cast<std::size_t>(n)], 2 * t) *
                    ScalarOps<S>::sum(inner) / ScalarOps<S>::binomial(n_dim, n));
  }
  return ScalarOps<S>::sum(outer);
}

template <class S>
S chi2_full_pointwise(const ProcessSpec& spec, std::int64_t weight_of_x, std::int64_t t) {
  return chi2_full_pointwise(eigenvalues_hamming<S>(spec), weight_of_x, t);
}

// chi^2 straight from a dense kernel row: sum_y (P(y) - pi(y))^2 / pi(y).
// Works for any law at oracle scale; used as the cross-check path.
template <class S>
S chi2_from_dense_row(std::span<const S> row, std::span<const S> pi) {
  std::vector<S> terms;
  terms.reserve(row.size());
  for (std::size_t y = 0; y < row.size(); ++y) {
    const S d = row[y] - pi[y];
    terms.push_back(d * d / pi[y]);
  }
  return ScalarOps<S>::sum(terms);
}

// Closed form for geometric spectra rho_n = rho^n (iid updates and the
// contingency-table chain): chi2_H(0, t) = (1 + (p/q) rho^{2t})^N - 1.
// Returned in log-float form to survive the large-|C| ends of the window.
inline SignedLog chi2_iid_closed_form(std::int64_t n_dim, const Rational& p,
                                      const Rational& rho, std::int64_t t) {
  const auto [rs, lr] = log_abs(rho);
  if (rs == 0) return SignedLog::zero();
  const auto [ps, lpq] = log_abs(p / (1 - p));
  const double log_x = lpq + 2.0 * static_cast<double>(t) * lr;  // x = (p/q) rho^2t
  // log((1+x)^N - 1) via N log1p(x), stable for tiny and huge x alike
  const double n_log1p = (log_x > 500.0)
                             ? static_cast<double>(n_dim) * log_x
                             : static_cast<double>(n_dim) * std::log1p(std::exp(log_x));
  double out;
  if (n_log1p > 36.0) {
    out = n_log1p;  // e^u - 1 ~ e^u
  } else if (n_log1p > 1e-8) {
    out = std::log(std::expm1(n_log1p));
  } else {
    out = std::log(n_log1p) + n_log1p / 2.0;  // expm1(u) ~ u (1 + u/2)
  }
  return SignedLog::from_log(+1, out);
}

}  // namespace cubemix
