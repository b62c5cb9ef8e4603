#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cubemix/errors.hpp"
#include "cubemix/numerics/philox.hpp"
#include "cubemix/process/law.hpp"
#include "cubemix/process/spectrum.hpp"

namespace cubemix {

inline constexpr std::int64_t kDenseSpectralMaxN = 14;
inline constexpr std::int64_t kDenseBruteforceMaxN = 12;

// Full transition matrix over the 2^N states, row = from-state.
template <class S>
struct DenseKernel {
  std::int64_t n = 0;
  std::vector<S> a;  // row-major, dim x dim

  std::size_t dim() const { return std::size_t{1} << n; }
  S& at(Mask x, Mask y) { return a[static_cast<std::size_t>(x) * dim() + y]; }
  const S& at(Mask x, Mask y) const { return a[static_cast<std::size_t>(x) * dim() + y]; }
};

// Transition matrix of the Hamming-weight projection, (N+1) x (N+1).
template <class S>
struct HammingKernel {
  std::int64_t n = 0;
  std::vector<S> a;

  S& at(std::int64_t i, std::int64_t j) {
    return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) +
             static_cast<std::size_t>(j)];
  }
  const S& at(std::int64_t i, std::int64_t j) const {
    return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) +
             static_cast<std::size_t>(j)];
  }
};

// pi(y, p) = p^||y|| q^(N-||y||) over masks.
template <class S>
std::vector<S> stationary_dense(const ProcessSpec& spec) {
  const std::size_t dim = std::size_t{1} << spec.n;
  const Rational q = 1 - spec.p;
  std::vector<S> pw(static_cast<std::size_t>(spec.n) + 1),
      qw(static_cast<std::size_t>(spec.n) + 1);
  for (std::int64_t k = 0; k <= spec.n; ++k) {
    pw[static_cast<std::size_t>(k)] = ScalarOps<S>::from_mpq(pow_int(spec.p, k));
    qw[static_cast<std::size_t>(k)] = ScalarOps<S>::from_mpq(pow_int(q, k));
  }
  std::vector<S> pi(dim);
  for (Mask y = 0; y < dim; ++y) {
    const std::int64_t w = mask_weight(y);
    pi[y] = pw[static_cast<std::size_t>(w)] * qw[static_cast<std::size_t>(spec.n - w)];
  }
  return pi;
}

// Binomial(N, p) weights over Hamming classes.
template <class S>
std::vector<S> stationary_hamming(const ProcessSpec& spec) {
  const Rational q = 1 - spec.p;
  std::vector<S> out(static_cast<std::size_t>(spec.n) + 1);
  for (std::int64_t k = 0; k <= spec.n; ++k)
    out[static_cast<std::size_t>(k)] = ScalarOps<S>::from_mpq(
        binomial_rational(spec.n, k) * pow_int(spec.p, k) * pow_int(q, spec.n - k));
  return out;
}

// In-place tensor transform by the symmetric 2x2 stage [[1, 1], [1, g]]
// applied at every bit; g = -q/p recovers sum_A phi_A expansions.
template <class S>
void phi_transform_vector(std::vector<S>& v, const S& g) {
  const std::size_t dim = v.size();
  for (std::size_t stride = 1; stride < dim; stride <<= 1) {
    for (std::size_t base = 0; base < dim; base += stride << 1) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const S u = v[i];
        const S w = v[i + stride];
        v[i] = u + w;
        v[i + stride] = u + g * w;
      }
    }
  }
}

template <class S>
void phi_transform_rows(std::vector<S>& m, std::size_t dim, const S& g) {
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t stride = 1; stride < dim; stride <<= 1) {
      for (std::size_t base = 0; base < dim; base += stride << 1) {
        for (std::size_t i = base; i < base + stride; ++i) {
          S& u = m[r * dim + i];
          S& w = m[r * dim + i + stride];
          const S uu = u;
          u = uu + w;
          w = uu + g * w;
        }
      }
    }
  }
}

template <class S>
void phi_transform_cols(std::vector<S>& m, std::size_t dim, const S& g) {
  for (std::size_t stride = 1; stride < dim; stride <<= 1) {
    for (std::size_t base = 0; base < dim; base += stride << 1) {
      for (std::size_t i = base; i < base + stride; ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
          S& u = m[i * dim + c];
          S& w = m[(i + stride) * dim + c];
          const S uu = u;
          u = uu + w;
          w = uu + g * w;
        }
      }
    }
  }
}

// rho_A for every subset mask, in mask order.
template <class S>
std::vector<S> subset_eigenvalues(const ProcessSpec& spec) {
  const std::size_t dim = std::size_t{1} << spec.n;
  std::vector<S> rho(dim);
  if (is_exchangeable(spec.law)) {
    const HammingSpectrum<S> hs = eigenvalues_hamming<S>(spec);
    for (Mask a = 0; a < dim; ++a)
      rho[a] = hs.rho[static_cast<std::size_t>(mask_weight(a))];
    return rho;
  }
  if (const auto* ex = std::get_if<ExplicitLaw>(&spec.law)) {
    for (Mask z = 0; z < dim; ++z) rho[z] = ScalarOps<S>::from_mpq(ex->pmf[z]);
    phi_transform_vector(rho, ScalarOps<S>::from_mpq(-(1 - spec.p) / spec.p));
    return rho;
  }
  for (Mask a = 0; a < dim; ++a) rho[a] = eigenvalues_general<S>(spec, a);
  return rho;
}

// t-step kernel from the subset spectral representation:
//   P_t(y|x) = pi(y) { 1 + sum_{A != 0} rho_A^t (p/q)^|A| phi_A(x) phi_A(y) }.
// Exact for time-homogeneous laws at every t, periodic or not.
template <class S>
DenseKernel<S> kernel_spectral(const ProcessSpec& spec, std::int64_t t) {
  validate(spec);
  if (spec.n > kDenseSpectralMaxN)
    throw CapacityError("kernel_spectral: N > 14 exceeds dense-state capacity");
  if (t < 1) throw std::domain_error("kernel_spectral: t must be >= 1");
  const std::size_t dim = std::size_t{1} << spec.n;
  const S pq = ScalarOps<S>::from_mpq(spec.p / (1 - spec.p));
  const S g = ScalarOps<S>::from_mpq(-(1 - spec.p) / spec.p);

  std::vector<S> w = subset_eigenvalues<S>(spec);
  for (Mask a = 0; a < dim; ++a)
    w[a] = pow_int(w[a], t) * pow_int(pq, mask_weight(a));

  DenseKernel<S> k;
  k.n = spec.n;
  k.a.assign(dim * dim, ScalarOps<S>::zero());
  for (std::size_t a = 0; a < dim; ++a) k.a[a * dim + a] = w[a];
  phi_transform_cols(k.a, dim, g);
  phi_transform_rows(k.a, dim, g);

  const std::vector<S> pi = stationary_dense<S>(spec);
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) k.a[x * dim + y] *= pi[y];
  return k;
}

// Single row of the t-step spectral kernel; O(N 2^N) instead of O(N 4^N).
template <class S>
std::vector<S> kernel_spectral_row(const ProcessSpec& spec, Mask x, std::int64_t t) {
  validate(spec);
  if (spec.n > kDenseSpectralMaxN)
    throw CapacityError("kernel_spectral_row: N > 14 exceeds dense-state capacity");
  const std::size_t dim = std::size_t{1} << spec.n;
  const S pq = ScalarOps<S>::from_mpq(spec.p / (1 - spec.p));
  const S g = ScalarOps<S>::from_mpq(-(1 - spec.p) / spec.p);

  std::vector<S> v = subset_eigenvalues<S>(spec);
  // v[A] = rho_A^t (p/q)^|A| phi_A(x)
  for (Mask a = 0; a < dim; ++a) {
    v[a] = pow_int(v[a], t) * pow_int(pq, mask_weight(a)) *
           pow_int(g, mask_weight(a & x));
  }
  phi_transform_vector(v, g);
  const std::vector<S> pi = stationary_dense<S>(spec);
  for (std::size_t y = 0; y < dim; ++y) v[y] *= pi[y];
  return v;
}

// One-step kernel assembled directly from the acceptance/rejection rules,
// summing over the whole support of Z; never touches the spectral formula.
// This is the oracle the spectral paths are tested against.
template <class S>
DenseKernel<S> kernel_bruteforce(const ProcessSpec& spec) {
  validate(spec);
  if (spec.n > kDenseBruteforceMaxN)
    throw CapacityError("kernel_bruteforce: N > 12 exceeds oracle capacity");
  const std::size_t dim = std::size_t{1} << spec.n;
  const Rational qp = (1 - spec.p) / spec.p;  // flip-back probability
  const S flip = ScalarOps<S>::from_mpq(qp);
  const S stay = ScalarOps<S>::from_mpq(1 - qp);
  const S one = ScalarOps<S>::one();
  const S zero = ScalarOps<S>::zero();

  const auto support = z_support(spec);
  DenseKernel<S> k;
  k.n = spec.n;
  k.a.assign(dim * dim, ScalarOps<S>::zero());

  std::vector<S> buf, next;
  buf.reserve(dim);
  next.reserve(dim);
  for (Mask x = 0; x < dim; ++x) {
    S* row = &k.a[static_cast<std::size_t>(x) * dim];
    for (const auto& [zmask, weight] : support) {
      buf.assign(1, ScalarOps<S>::from_mpq(weight));
      for (std::int64_t j = 1; j <= spec.n; ++j) {
        const bool xj = mask_get(x, spec.n, j);
        const bool zj = mask_get(zmask, spec.n, j);
        // conditional law of y_j: rules of the acceptance/rejection step
        S p0 = zero, p1 = zero;
        if (!zj) {
          (xj ? p1 : p0) = one;
        } else if (!xj) {
          p1 = one;
        } else {
          p0 = flip;
          p1 = stay;
        }
        next.assign(buf.size() * 2, ScalarOps<S>::zero());
        for (std::size_t i = 0; i < buf.size(); ++i) {
          next[2 * i] = buf[i] * p0;
          next[2 * i + 1] = buf[i] * p1;
        }
        buf.swap(next);
      }
      for (std::size_t y = 0; y < dim; ++y) row[y] += buf[y];
    }
  }
  return k;
}

// t-step transition row in random-walk-representation form:
//   P_t(y|x) = pi(y) E[ prod_j (1 - (-q/p)^(S_t[x,y,j])) ],
//   S_t[x,y,j] = x[j] + y[j] - 1 + sum_k Z_k[j].
// The minus sign inside the product is the build-time constant resolved
// against kernel_bruteforce (see rw_representation_sign).
inline constexpr int rw_representation_sign = -1;

template <class S>
struct RwRow {
  std::vector<S> pmf;
  bool exact = true;
  double max_std_error = 0.0;  // Monte Carlo path only
};

struct RwOptions {
  std::int64_t budget = 1 << 21;  // max exact tuples of (Z_1..Z_t)
  bool allow_monte_carlo = false;
  std::int64_t mc_samples = 200000;
  std::uint64_t seed = 1;
};

// Sign-parameterized core; the public entry point pins the sign to the
// oracle-resolved constant, and the verify suite exercises both settings to
// demonstrate the resolution.
template <class S>
RwRow<S> kernel_rw_representation_with_sign(const ProcessSpec& spec, Mask x,
                                            std::int64_t t, int sign,
                                            const RwOptions& opt = {}) {
  validate(spec);
  if (spec.n > kDenseSpectralMaxN)
    throw CapacityError("kernel_rw_representation: N > 14 exceeds capacity");
  if (t < 1 || t > 4)
    throw std::domain_error("kernel_rw_representation: t must lie in [1, 4]");
  const std::size_t dim = std::size_t{1} << spec.n;
  const auto support = z_support(spec);

  double tuples = 1;
  for (std::int64_t k = 0; k < t; ++k) tuples *= static_cast<double>(support.size());

  const std::vector<S> pi = stationary_dense<S>(spec);
  // powers of (-q/p) for exponents -1 .. t+1
  const Rational g = -(1 - spec.p) / spec.p;
  std::vector<S> gp;  // gp[e+1] = g^e
  for (std::int64_t e = -1; e <= t + 1; ++e)
    gp.push_back(ScalarOps<S>::from_mpq(pow_int(g, e)));
  const S sgn = ScalarOps<S>::from_long(sign);

  RwRow<S> out;
  out.pmf.assign(dim, ScalarOps<S>::zero());

  auto accumulate_tuple = [&](const std::vector<Mask>& zs, const S& weight) {
    // per-coordinate pick counts
    std::vector<S> buf(1, weight), next;
    for (std::int64_t j = 1; j <= spec.n; ++j) {
      std::int64_t w_j = 0;
      for (Mask zm : zs) w_j += mask_get(zm, spec.n, j) ? 1 : 0;
      const std::int64_t base = (mask_get(x, spec.n, j) ? 1 : 0) - 1 + w_j;
      const S f0 = ScalarOps<S>::one() + sgn * gp[static_cast<std::size_t>(base + 1)];
      const S f1 = ScalarOps<S>::one() + sgn * gp[static_cast<std::size_t>(base + 2)];
      next.assign(buf.size() * 2, ScalarOps<S>::zero());
      for (std::size_t i = 0; i < buf.size(); ++i) {
        next[2 * i] = buf[i] * f0;
        next[2 * i + 1] = buf[i] * f1;
      }
      buf.swap(next);
    }
    for (std::size_t y = 0; y < dim; ++y) out.pmf[y] += buf[y];
  };

  if (tuples <= static_cast<double>(opt.budget)) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(t), 0);
    std::vector<Mask> zs(static_cast<std::size_t>(t));
    while (true) {
      S weight = ScalarOps<S>::one();
      for (std::int64_t k = 0; k < t; ++k) {
        zs[static_cast<std::size_t>(k)] = support[idx[static_cast<std::size_t>(k)]].first;
        weight = weight * ScalarOps<S>::from_mpq(support[idx[static_cast<std::size_t>(k)]].second);
      }
      accumulate_tuple(zs, weight);
      std::int64_t pos = t - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == support.size()) {
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    if (!opt.allow_monte_carlo)
      throw CapacityError("kernel_rw_representation: Z-tuple support exceeds budget "
                          "(enable the Monte Carlo fallback)");
    if constexpr (ScalarOps<S>::exact)
      throw CapacityError("kernel_rw_representation: Monte Carlo fallback is "
                          "log-float only");
    out.exact = false;
    // sample tuples by the categorical law of Z; estimate E[prod] per y
    std::vector<double> cdf(support.size());
    double acc = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      acc += to_double(support[i].second);
      cdf[i] = acc;
    }
    PhiloxStream rng(opt.seed, 0x52574d43u);  // dedicated stream
    std::vector<double> mean(dim, 0.0), m2(dim, 0.0), prod(dim);
    std::vector<Mask> zs(static_cast<std::size_t>(t));
    for (std::int64_t s = 0; s < opt.mc_samples; ++s) {
      for (std::int64_t k = 0; k < t; ++k) {
        const double u = rng.next_unit() * acc;
        const std::size_t i = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        zs[static_cast<std::size_t>(k)] = support[std::min(i, support.size() - 1)].first;
      }
      // per-sample product vector, tensor-expanded
      std::vector<double> buf(1, 1.0), next;
      for (std::int64_t j = 1; j <= spec.n; ++j) {
        std::int64_t w_j = 0;
        for (Mask zm : zs) w_j += mask_get(zm, spec.n, j) ? 1 : 0;
        const std::int64_t base = (mask_get(x, spec.n, j) ? 1 : 0) - 1 + w_j;
        const double gd = to_double(ScalarOps<S>::from_mpq(g));
        const double f0 = 1.0 + sign * std::pow(gd, static_cast<double>(base));
        const double f1 = 1.0 + sign * std::pow(gd, static_cast<double>(base + 1));
        next.assign(buf.size() * 2, 0.0);
        for (std::size_t i = 0; i < buf.size(); ++i) {
          next[2 * i] = buf[i] * f0;
          next[2 * i + 1] = buf[i] * f1;
        }
        buf.swap(next);
      }
      const double w = static_cast<double>(s);
      for (std::size_t y = 0; y < dim; ++y) {
        const double d = buf[y] - mean[y];
        mean[y] += d / (w + 1.0);
        m2[y] += d * (buf[y] - mean[y]);
      }
    }
    double max_se = 0.0;
    for (std::size_t y = 0; y < dim; ++y) {
      const double var = m2[y] / std::max<double>(1, opt.mc_samples - 1);
      max_se = std::max(max_se, std::sqrt(var / static_cast<double>(opt.mc_samples)) *
                                    to_double(pi[y]));
      if constexpr (!ScalarOps<S>::exact)
        out.pmf[y] = SignedLog::from_double(mean[y] * to_double(pi[y]));
    }
    out.max_std_error = max_se;
    return out;
  }

  for (std::size_t y = 0; y < dim; ++y) out.pmf[y] *= pi[y];
  return out;
}

template <class S>
RwRow<S> kernel_rw_representation(const ProcessSpec& spec, Mask x, std::int64_t t,
                                  const RwOptions& opt = {}) {
  return kernel_rw_representation_with_sign<S>(spec, x, t, rw_representation_sign, opt);
}

// Hamming-projection kernel for exchangeable laws:
//   P(j | i) = Binom(j) { 1 + sum_n rho_n h_n Q_n(i) Q_n(j) }.
template <class S>
HammingKernel<S> kernel_hamming(const ProcessSpec& spec) {
  validate(spec);
  if (!is_exchangeable(spec.law))
    throw NotExchangeableError("kernel_hamming: law is not exchangeable");
  const std::int64_t n = spec.n;
  const HammingSpectrum<S> hs = eigenvalues_hamming<S>(spec);

  std::vector<std::vector<S>> q_rows(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i)
    q_rows[static_cast<std::size_t>(i)] = hs.basis.row(i);
  std::vector<S> h(static_cast<std::size_t>(n) + 1);
  for (std::int64_t m = 0; m <= n; ++m)
    h[static_cast<std::size_t>(m)] = hs.basis.h_weight(m);
  const std::vector<S> binom = stationary_hamming<S>(spec);

  HammingKernel<S> k;
  k.n = n;
  k.a.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1),
             ScalarOps<S>::zero());
  std::vector<S> terms;
  for (std::int64_t i = 0; i <= n; ++i) {
    for (std::int64_t j = 0; j <= n; ++j) {
      terms.clear();
      terms.push_back(ScalarOps<S>::one());
      for (std::int64_t m = 1; m <= n; ++m)
        terms.push_back(hs.rho[static_cast<std::size_t>(m)] *
                        h[static_cast<std::size_t>(m)] *
                        q_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] *
                        q_rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)]);
      k.at(i, j) = binom[static_cast<std::size_t>(j)] * ScalarOps<S>::sum(terms);
    }
  }
  return k;
}

// t-step Hamming row from the same spectrum (the projection shares the
// Krawtchouk eigenstructure, so powers are closed-form).
template <class S>
std::vector<S> hamming_power_row(const ProcessSpec& spec, std::int64_t start_weight,
                                 std::int64_t t) {
  if (!is_exchangeable(spec.law))
    throw NotExchangeableError("hamming_power_row: law is not exchangeable");
  if (start_weight < 0 || start_weight > spec.n)
    throw std::domain_error("hamming_power_row: start weight out of [0, N]");
  const std::int64_t n = spec.n;
  const HammingSpectrum<S> hs = eigenvalues_hamming<S>(spec);
  const std::vector<S> qi = hs.basis.row(start_weight);
  const std::vector<S> binom = stationary_hamming<S>(spec);

  std::vector<S> out(static_cast<std::size_t>(n) + 1);
  std::vector<S> terms;
  for (std::int64_t j = 0; j <= n; ++j) {
    const std::vector<S> qj = hs.basis.row(j);
    terms.clear();
    terms.push_back(ScalarOps<S>::one());
    for (std::int64_t m = 1; m <= n; ++m)
      terms.push_back(pow_int(hs.rho[static_cast<std::size_t>(m)], t) *
                      hs.basis.h_weight(m) * qi[static_cast<std::size_t>(m)] *
                      qj[static_cast<std::size_t>(m)]);
    out[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(j)] *
                                       ScalarOps<S>::sum(terms);
  }
  return out;
}

}  // namespace cubemix
