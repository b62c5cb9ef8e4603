#pragma once

#include <cstdint>
#include <vector>

#include "cubemix/errors.hpp"
#include "cubemix/orthopoly/krawtchouk.hpp"
#include "cubemix/process/law.hpp"

namespace cubemix {

// Degree-indexed spectrum of an exchangeable chain: rho[n] = E[Q_n(||Z||)],
// rho[0] = 1.  Every |rho_n| <= 1.
template <class S>
struct HammingSpectrum {
  KrawtchoukBasis<S> basis;
  std::vector<S> rho;  // size N+1
};

template <class S>
HammingSpectrum<S> eigenvalues_hamming(const ProcessSpec& spec) {
  if (!is_exchangeable(spec.law))
    throw NotExchangeableError(std::string("eigenvalues_hamming: law '") +
                               law_name(spec.law) +
                               "' is not exchangeable; use eigenvalues_general");
  KrawtchoukBasis<S> basis(spec.n, spec.p);
  std::vector<S> rho(static_cast<std::size_t>(spec.n) + 1);
  rho[0] = ScalarOps<S>::one();

  if (const auto* su = std::get_if<SubsetUniform>(&spec.law)) {
    // ||Z|| = z deterministically: rho_n = Q_n(z)
    rho = basis.row(su->z);
  } else if (const auto* ib = std::get_if<IidBernoulli>(&spec.law)) {
    const S base = ScalarOps<S>::from_mpq(1 - ib->alpha / spec.p);
    for (std::int64_t n = 1; n <= spec.n; ++n)
      rho[static_cast<std::size_t>(n)] = pow_int(base, n);
  } else if (const auto* dd = std::get_if<DeFinettiDiscrete>(&spec.law)) {
    for (std::int64_t n = 1; n <= spec.n; ++n) {
      std::vector<S> terms;
      terms.reserve(dd->atoms.size());
      for (const auto& a : dd->atoms)
        terms.push_back(ScalarOps<S>::from_mpq(a.weight) *
                        pow_int(ScalarOps<S>::from_mpq(1 - a.alpha / spec.p), n));
      rho[static_cast<std::size_t>(n)] = ScalarOps<S>::sum(terms);
    }
  } else {
    // Lebesgue mixing: rho_n = (p/(n+1)) (1 - (-q/p)^(n+1))
    const Rational q = 1 - spec.p;
    for (std::int64_t n = 1; n <= spec.n; ++n) {
      const Rational v = spec.p / Rational(static_cast<long>(n + 1)) *
                         (1 - pow_int(-(q / spec.p), n + 1));
      rho[static_cast<std::size_t>(n)] = ScalarOps<S>::from_mpq(v);
    }
  }
  return {std::move(basis), std::move(rho)};
}

// rho_A = E[prod_{j in A} (1 - Z[j]/p)] for an arbitrary coordinate set A
// (as a mask).  Empty A returns 1.  Exchangeable laws route through the
// degree-indexed closed forms.
template <class S>
S eigenvalues_general(const ProcessSpec& spec, Mask a_mask) {
  if (a_mask == 0) return ScalarOps<S>::one();
  const Rational g = -(1 - spec.p) / spec.p;  // value of (1 - u/p) at u = 1

  if (const auto* bu = std::get_if<BlockUpdate>(&spec.law)) {
    // one block picked uniformly: rho_A = (beta/N) sum_blocks (-q/p)^(|A n b|)
    const std::int64_t nb = spec.n / bu->beta;
    std::vector<S> terms;
    terms.reserve(static_cast<std::size_t>(nb));
    for (std::int64_t b = 0; b < nb; ++b) {
      Mask bm = 0;
      for (std::int64_t j = b * bu->beta + 1; j <= (b + 1) * bu->beta; ++j)
        bm |= Mask{1} << coord_bit(spec.n, j);
      terms.push_back(pow_int(ScalarOps<S>::from_mpq(g), mask_weight(a_mask & bm)));
    }
    return ScalarOps<S>::from_mpq(make_ratio(bu->beta, spec.n)) *
           ScalarOps<S>::sum(terms);
  }
  if (const auto* ex = std::get_if<ExplicitLaw>(&spec.law)) {
    std::vector<S> terms;
    for (Mask m = 0; m < (Mask{1} << spec.n); ++m)
      if (ex->pmf[m] != 0)
        terms.push_back(ScalarOps<S>::from_mpq(ex->pmf[m]) *
                        pow_int(ScalarOps<S>::from_mpq(g), mask_weight(m & a_mask)));
    return ScalarOps<S>::sum(terms);
  }
  const HammingSpectrum<S> spec_h = eigenvalues_hamming<S>(spec);
  return spec_h.rho[static_cast<std::size_t>(mask_weight(a_mask))];
}

}  // namespace cubemix
