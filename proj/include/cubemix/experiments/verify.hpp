#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "cubemix/distances/chi2.hpp"
#include "cubemix/numerics/philox.hpp"
#include "cubemix/process/kernels.hpp"

namespace cubemix {

// Runs f(0..count-1) on a small pool; results must be written to
// caller-owned slots indexed by i so ordering never depends on scheduling.
template <class F>
void parallel_for(std::int64_t count, int workers, F&& f) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers == 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto drain = [&] {
    for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) f(i);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

// --- Exact matrix helpers ------------------------------------------------

// Stochastic matrix held as integer numerators over one common denominator;
// powers stay exact and avoid per-entry rational canonicalization.
struct ScaledMatrix {
  std::size_t dim = 0;
  mpz_class den = 1;
  std::vector<mpz_class> a;
};

inline ScaledMatrix scaled_from(const DenseKernel<Rational>& k) {
  ScaledMatrix m;
  m.dim = k.dim();
  m.a.resize(m.dim * m.dim);
  for (const Rational& v : k.a) mpz_lcm(m.den.get_mpz_t(), m.den.get_mpz_t(),
                                        v.get_den().get_mpz_t());
  for (std::size_t i = 0; i < k.a.size(); ++i)
    m.a[i] = k.a[i].get_num() * (m.den / k.a[i].get_den());
  return m;
}

inline ScaledMatrix matmul(const ScaledMatrix& x, const ScaledMatrix& y) {
  ScaledMatrix r;
  r.dim = x.dim;
  r.den = x.den * y.den;
  r.a.assign(r.dim * r.dim, mpz_class(0));
  for (std::size_t i = 0; i < r.dim; ++i) {
    for (std::size_t k = 0; k < r.dim; ++k) {
      const mpz_class& xik = x.a[i * r.dim + k];
      if (xik == 0) continue;
      const mpz_class* yr = &y.a[k * r.dim];
      mpz_class* rr = &r.a[i * r.dim];
      for (std::size_t j = 0; j < r.dim; ++j)
        mpz_addmul(rr[j].get_mpz_t(), xik.get_mpz_t(), yr[j].get_mpz_t());
    }
  }
  return r;
}

inline bool equals_kernel(const ScaledMatrix& m, const DenseKernel<Rational>& k) {
  for (std::size_t i = 0; i < m.a.size(); ++i) {
    Rational q(m.a[i], m.den);
    q.canonicalize();
    if (q != k.a[i]) return false;
  }
  return true;
}

// --- Oracle grid ----------------------------------------------------------

// The standing small-N grid: three p values; subset-uniform at every z; iid
// rates {0.3, 0.6, 1}; block updates at every divisor; plus seeded random
// explicit laws spread over the dimensions.
inline std::vector<ProcessSpec> oracle_grid(std::int64_t n_max,
                                            std::int64_t explicit_laws,
                                            std::uint64_t seed) {
  const std::vector<Rational> ps = {Rational(1, 2), Rational(3, 5), Rational(3, 4)};
  std::vector<ProcessSpec> grid;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    for (const Rational& p : ps) {
      for (std::int64_t z = 1; z <= n; ++z)
        grid.push_back({n, p, SubsetUniform{z}});
      grid.push_back({n, p, IidBernoulli{Rational(3, 10)}});
      grid.push_back({n, p, IidBernoulli{Rational(3, 5)}});
      grid.push_back({n, p, IidBernoulli{Rational(1)}});
      for (std::int64_t beta = 1; beta <= n; ++beta)
        if (n % beta == 0) grid.push_back({n, p, BlockUpdate{beta}});
    }
  }
  PhiloxStream rng(seed, 0xE091u);
  for (std::int64_t i = 0; n_max >= 2 && i < explicit_laws; ++i) {
    const std::int64_t n =
        2 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n_max - 1)));
    const Rational p = ps[rng.below(3)];
    ExplicitLaw law;
    law.pmf.resize(std::size_t{1} << n);
    std::int64_t total = 0;
    std::vector<std::int64_t> raw(law.pmf.size());
    for (auto& v : raw) {
      v = static_cast<std::int64_t>(rng.below(100));
      total += v;
    }
    if (total == 0) {
      raw[0] = 1;
      total = 1;
    }
    for (std::size_t m = 0; m < raw.size(); ++m)
      law.pmf[m] = make_ratio(raw[m], total);
    grid.push_back({n, p, law});
  }
  return grid;
}

inline std::string spec_label(const ProcessSpec& spec) {
  std::string s = "N=" + std::to_string(spec.n) + " p=" + spec.p.get_str() + " " +
                  law_name(spec.law);
  if (const auto* su = std::get_if<SubsetUniform>(&spec.law))
    s += " z=" + std::to_string(su->z);
  else if (const auto* ib = std::get_if<IidBernoulli>(&spec.law))
    s += " alpha=" + ib->alpha.get_str();
  else if (const auto* bu = std::get_if<BlockUpdate>(&spec.law))
    s += " beta=" + std::to_string(bu->beta);
  return s;
}

// --- Individual exact checks ----------------------------------------------

inline bool spectral_equals_bruteforce_exact(const ProcessSpec& spec,
                                             const DenseKernel<Rational>& bf) {
  const DenseKernel<Rational> sp = kernel_spectral<Rational>(spec, 1);
  for (std::size_t i = 0; i < sp.a.size(); ++i)
    if (sp.a[i] != bf.a[i]) return false;
  return true;
}

inline double spectral_logfloat_error(const ProcessSpec& spec,
                                      const DenseKernel<Rational>& bf) {
  const DenseKernel<SignedLog> sp = kernel_spectral<SignedLog>(spec, 1);
  double err = 0;
  for (std::size_t i = 0; i < sp.a.size(); ++i)
    err = std::max(err, std::fabs(to_double(sp.a[i]) - to_double(bf.a[i])));
  return err;
}

inline bool spectral_power_matches(const ProcessSpec& spec,
                                   const DenseKernel<Rational>& bf,
                                   std::int64_t t_max) {
  const ScaledMatrix base = scaled_from(bf);
  ScaledMatrix power = base;
  for (std::int64_t t = 2; t <= t_max; ++t) {
    power = matmul(power, base);
    if (!equals_kernel(power, kernel_spectral<Rational>(spec, t))) return false;
  }
  return true;
}

struct StructuralReport {
  bool rows_sum_to_one = false;
  bool detailed_balance = false;
  bool condition2 = false;
};

inline StructuralReport structural_checks_exact(const ProcessSpec& spec,
                                                const DenseKernel<Rational>& k,
                                                bool check_condition2) {
  const std::size_t dim = k.dim();
  const std::vector<Rational> pi = stationary_dense<Rational>(spec);
  StructuralReport rep;

  rep.rows_sum_to_one = true;
  for (std::size_t x = 0; x < dim && rep.rows_sum_to_one; ++x) {
    Rational s(0);
    for (std::size_t y = 0; y < dim; ++y) s += k.a[x * dim + y];
    rep.rows_sum_to_one = (s == 1);
  }

  rep.detailed_balance = true;
  for (std::size_t x = 0; x < dim && rep.detailed_balance; ++x)
    for (std::size_t y = x + 1; y < dim; ++y)
      if (pi[x] * k.a[x * dim + y] != pi[y] * k.a[y * dim + x]) {
        rep.detailed_balance = false;
        break;
      }

  rep.condition2 = true;
  if (check_condition2) {
    // marginal of X_1(B) given X_0 = x must depend on x through x(B) only
    std::vector<std::size_t> ycomp(dim);
    for (Mask b = 1; b < dim && rep.condition2; ++b) {
      const std::int64_t nb = mask_weight(b);
      const std::size_t classes = std::size_t{1} << nb;
      for (std::size_t y = 0; y < dim; ++y) {
        std::size_t c = 0, bit = 0;
        for (std::int64_t j = 0; j < spec.n; ++j)
          if ((b >> j) & 1u) {
            if ((y >> j) & 1u) c |= std::size_t{1} << bit;
            ++bit;
          }
        ycomp[y] = c;
      }
      std::map<std::size_t, std::vector<Rational>> rep_marginal;
      std::vector<Rational> marginal(classes);
      for (std::size_t x = 0; x < dim && rep.condition2; ++x) {
        std::fill(marginal.begin(), marginal.end(), Rational(0));
        for (std::size_t y = 0; y < dim; ++y) marginal[ycomp[y]] += k.a[x * dim + y];
        const auto [it, inserted] = rep_marginal.try_emplace(ycomp[x], marginal);
        if (!inserted && it->second != marginal) rep.condition2 = false;
      }
    }
  }
  return rep;
}

inline bool lumping_matches(const ProcessSpec& spec, const DenseKernel<Rational>& bf) {
  if (!is_exchangeable(spec.law)) return true;
  const HammingKernel<Rational> hk = kernel_hamming<Rational>(spec);
  const std::size_t dim = bf.dim();
  for (std::size_t x = 0; x < dim; ++x) {
    std::vector<Rational> agg(static_cast<std::size_t>(spec.n) + 1, Rational(0));
    for (std::size_t y = 0; y < dim; ++y)
      agg[static_cast<std::size_t>(mask_weight(static_cast<Mask>(y)))] += bf.a[x * dim + y];
    const std::int64_t i = mask_weight(static_cast<Mask>(x));
    for (std::int64_t j = 0; j <= spec.n; ++j)
      if (agg[static_cast<std::size_t>(j)] != hk.at(i, j)) return false;
  }
  return true;
}

// The resolved (minus) form must reproduce the oracle on every spec.
inline bool rw_minus_matches_oracle(const ProcessSpec& spec,
                                    const DenseKernel<Rational>& bf) {
  const std::size_t dim = bf.dim();
  for (Mask x = 0; x < dim; ++x) {
    const auto row = kernel_rw_representation<Rational>(spec, x, 1);
    for (std::size_t y = 0; y < dim; ++y)
      if (row.pmf[y] != bf.a[x * dim + y]) return false;
  }
  return true;
}

// The plus form printed in the theorem display must disagree with the
// oracle somewhere (checked on a chain with a nonvanishing odd spectrum;
// independence chains make both forms collapse to pi).
inline bool rw_plus_form_differs(const ProcessSpec& spec,
                                 const DenseKernel<Rational>& bf) {
  const std::size_t dim = bf.dim();
  for (Mask x = 0; x < dim; ++x) {
    const auto plus = kernel_rw_representation_with_sign<Rational>(spec, x, 1, +1);
    for (std::size_t y = 0; y < dim; ++y)
      if (plus.pmf[y] != bf.a[x * dim + y]) return true;
  }
  return false;
}

inline bool subset_vs_degree_rho(const ProcessSpec& spec) {
  if (!is_exchangeable(spec.law)) return true;
  const HammingSpectrum<Rational> hs = eigenvalues_hamming<Rational>(spec);
  for (Mask a = 0; a < (Mask{1} << spec.n); ++a)
    if (eigenvalues_general<Rational>(spec, a) !=
        hs.rho[static_cast<std::size_t>(mask_weight(a))])
      return false;
  return true;
}

inline bool orthogonality_exact(std::int64_t n, const Rational& p) {
  const KrawtchoukBasis<Rational> basis(n, p);
  std::vector<std::vector<Rational>> rows;
  rows.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t x = 0; x <= n; ++x) rows.push_back(basis.row(x));
  std::vector<Rational> w(static_cast<std::size_t>(n) + 1);
  for (std::int64_t x = 0; x <= n; ++x)
    w[static_cast<std::size_t>(x)] = binomial_rational(n, x) * pow_int(p, x) *
                                     pow_int(1 - p, n - x);
  for (std::int64_t a = 0; a <= n; ++a) {
    for (std::int64_t b = a; b <= n; ++b) {
      Rational s(0);
      for (std::int64_t x = 0; x <= n; ++x)
        s += w[static_cast<std::size_t>(x)] * rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)] *
             rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(b)];
      const Rational want = (a == b) ? Rational(1) / basis.h_weight(a) : Rational(0);
      if (s != want) return false;
    }
  }
  return true;
}

inline bool symmetric_representation_exact(std::int64_t n, const Rational& p) {
  const KrawtchoukBasis<Rational> basis(n, p);
  const Rational g = -(1 - p) / p;
  std::vector<Rational> gp(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) gp[static_cast<std::size_t>(i)] = pow_int(g, i);
  const Mask dim = Mask{1} << n;
  std::vector<std::vector<Rational>> rows;
  for (std::int64_t x = 0; x <= n; ++x) rows.push_back(basis.row(x));
  for (Mask x = 0; x < dim; ++x) {
    std::vector<Rational> sums(static_cast<std::size_t>(n) + 1, Rational(0));
    for (Mask a = 0; a < dim; ++a)
      sums[static_cast<std::size_t>(mask_weight(a))] +=
          gp[static_cast<std::size_t>(mask_weight(a & x))];
    const std::int64_t wx = mask_weight(x);
    for (std::int64_t m = 0; m <= n; ++m)
      if (sums[static_cast<std::size_t>(m)] !=
          binomial_rational(n, m) * rows[static_cast<std::size_t>(wx)][static_cast<std::size_t>(m)])
        return false;
  }
  return true;
}

inline bool hypergeometric_example_exact(std::int64_t n) {
  const ProcessSpec spec{n, Rational(1, 2), SubsetUniform{n / 2}};
  const HammingSpectrum<Rational> hs = eigenvalues_hamming<Rational>(spec);
  for (std::int64_t m = 1; m <= n; m += 2)
    if (hs.rho[static_cast<std::size_t>(m)] != 0) return false;
  for (std::int64_t m = 1; 2 * m <= n; ++m) {
    Rational want = binomial_rational(n / 2, m) / binomial_rational(n, 2 * m);
    if (m % 2 == 1) want = -want;
    if (hs.rho[static_cast<std::size_t>(2 * m)] != want) return false;
  }
  return true;
}

// --- The verify suite -------------------------------------------------------

struct VerifyOptions {
  std::int64_t n_max = 6;
  std::int64_t t_max = 3;
  std::int64_t orthogonality_n_max = 16;
  std::int64_t symmetric_n_max = 8;
  std::int64_t explicit_laws = 4;
  std::uint64_t seed = 0x5EED2024u;
  int workers = 0;
  double logfloat_tol = 1e-12;
};

struct VerifyCheck {
  std::string check;
  std::string detail;
  bool pass = false;
  double max_err = 0.0;
};

inline std::vector<VerifyCheck> run_verify(const VerifyOptions& opt) {
  const std::vector<ProcessSpec> grid =
      oracle_grid(opt.n_max, opt.explicit_laws, opt.seed);
  std::vector<std::vector<VerifyCheck>> per_spec(grid.size());

  parallel_for(static_cast<std::int64_t>(grid.size()), opt.workers, [&](std::int64_t i) {
    const ProcessSpec& spec = grid[static_cast<std::size_t>(i)];
    const std::string label = spec_label(spec);
    auto& out = per_spec[static_cast<std::size_t>(i)];
    const DenseKernel<Rational> bf = kernel_bruteforce<Rational>(spec);

    out.push_back({"kernel-equivalence-exact", label,
                   spectral_equals_bruteforce_exact(spec, bf), 0.0});
    const double lf_err = spectral_logfloat_error(spec, bf);
    out.push_back({"kernel-equivalence-logfloat", label, lf_err <= opt.logfloat_tol, lf_err});
    out.push_back({"kernel-power", label, spectral_power_matches(spec, bf, opt.t_max), 0.0});
    const StructuralReport st = structural_checks_exact(spec, bf, true);
    out.push_back({"row-sums", label, st.rows_sum_to_one, 0.0});
    out.push_back({"detailed-balance", label, st.detailed_balance, 0.0});
    out.push_back({"condition2-restriction", label, st.condition2, 0.0});
    if (is_exchangeable(spec.law)) {
      out.push_back({"lumpability", label, lumping_matches(spec, bf), 0.0});
      out.push_back({"rho-subset-vs-degree", label, subset_vs_degree_rho(spec), 0.0});
    }
    if (spec.n <= 5)
      out.push_back({"rw-representation-sign", label, rw_minus_matches_oracle(spec, bf), 0.0});
  });

  std::vector<VerifyCheck> checks;
  for (auto& v : per_spec)
    for (auto& c : v) checks.push_back(std::move(c));

  {
    const ProcessSpec canon{3, Rational(3, 5), SubsetUniform{1}};
    const DenseKernel<Rational> bf = kernel_bruteforce<Rational>(canon);
    checks.push_back({"rw-plus-form-differs", spec_label(canon),
                      rw_plus_form_differs(canon, bf), 0.0});
  }

  for (std::int64_t n = 1; n <= opt.orthogonality_n_max; ++n)
    for (const Rational& p : {Rational(1, 2), Rational(3, 5), Rational(3, 4)})
      checks.push_back({"krawtchouk-orthogonality",
                        "N=" + std::to_string(n) + " p=" + p.get_str(),
                        orthogonality_exact(n, p), 0.0});
  for (std::int64_t n = 1; n <= opt.symmetric_n_max; ++n)
    for (const Rational& p : {Rational(1, 2), Rational(3, 5)})
      checks.push_back({"krawtchouk-symmetric-representation",
                        "N=" + std::to_string(n) + " p=" + p.get_str(),
                        symmetric_representation_exact(n, p), 0.0});
  for (const std::int64_t n : {std::int64_t{4}, std::int64_t{8}, std::int64_t{16}})
    checks.push_back({"hypergeometric-eigenvalues", "N=" + std::to_string(n),
                      hypergeometric_example_exact(n), 0.0});
  return checks;
}

inline bool all_passed(const std::vector<VerifyCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace cubemix
