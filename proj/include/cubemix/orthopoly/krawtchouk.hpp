#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubemix/errors.hpp"
#include "cubemix/numerics/scalar.hpp"

namespace cubemix {

// Krawtchouk polynomials Q_n(x; N, p) on the Binomial(N, p) weight, scaled
// so Q_n(0) = 1 for every degree.  Coefficients come from the generating
// function
//
//   sum_n C(N,n) Q_n(x) s^n = (1 - (q/p) s)^x (1 + s)^(N-x),
//
// evaluated as the convolution of the two binomial expansions.  The
// three-term recurrence is avoided: near x ~ Np the recurrence loses all
// precision at the sign changes, while the convolution confines cancellation
// to a single signed merge per coefficient.
template <class S>
class KrawtchoukBasis {
 public:
  KrawtchoukBasis(std::int64_t n_dim, Rational p)
      : n_(n_dim), p_(std::move(p)), q_(1 - p_) {
    if (n_ <= 0) throw std::domain_error("KrawtchoukBasis: N must be positive");
    if (p_ < Rational(1, 2) || p_ >= 1)
      throw std::domain_error("KrawtchoukBasis: p must lie in [1/2, 1)");
    qp_ratio_ = q_ / p_;
    log_qp_ = ScalarOps<SignedLog>::from_mpq(qp_ratio_).log_mag();
  }

  std::int64_t dim() const { return n_; }
  const Rational& p() const { return p_; }
  const Rational& q() const { return q_; }
  ScalarMode mode() const { return ScalarOps<S>::mode(); }

  // h_n = C(N,n) (p/q)^n, the inverse squared norm of Q_n.
  S h_weight(std::int64_t n) const {
    check_degree(n);
    return ScalarOps<S>::binomial(n_, n) * pow_int(ScalarOps<S>::from_mpq(p_ / q_), n);
  }

  // Q_n(x) for a single (n, x); O(min(n, x)) terms.
  S value(std::int64_t n, std::int64_t x) const {
    check_degree(n);
    check_point(x);
    return coefficient_sum(n, x) / ScalarOps<S>::binomial(n_, n);
  }

  // Full row (Q_0(x), ..., Q_N(x)).
  std::vector<S> row(std::int64_t x) const {
    check_point(x);
    std::vector<S> out(static_cast<std::size_t>(n_) + 1);
    if constexpr (ScalarOps<S>::exact) {
      // exact convolution of C(x,k)(-q/p)^k against C(N-x, .)
      const std::vector<mpz_class> bx = binomial_row_mpz(x);
      const std::vector<mpz_class> bnx = binomial_row_mpz(n_ - x);
      const std::vector<mpz_class> bn = binomial_row_mpz(n_);
      std::vector<Rational> left(static_cast<std::size_t>(x) + 1);
      Rational rp(1);
      for (std::int64_t k = 0; k <= x; ++k) {
        left[static_cast<std::size_t>(k)] = Rational(bx[static_cast<std::size_t>(k)]) * rp;
        rp *= -qp_ratio_;
      }
      for (std::int64_t n = 0; n <= n_; ++n) {
        Rational acc(0);
        const std::int64_t klo = std::max<std::int64_t>(0, n - (n_ - x));
        const std::int64_t khi = std::min(n, x);
        for (std::int64_t k = klo; k <= khi; ++k)
          acc += left[static_cast<std::size_t>(k)] *
                 Rational(bnx[static_cast<std::size_t>(n - k)]);
        out[static_cast<std::size_t>(n)] = acc / Rational(bn[static_cast<std::size_t>(n)]);
      }
    } else {
      const std::vector<double> lx = LogFactorialTable::log_binomial_row(x);
      const std::vector<double> lnx = LogFactorialTable::log_binomial_row(n_ - x);
      const std::vector<double> lnn = LogFactorialTable::log_binomial_row(n_);
      std::vector<SignedLog> terms;
      for (std::int64_t n = 0; n <= n_; ++n) {
        const std::int64_t klo = std::max<std::int64_t>(0, n - (n_ - x));
        const std::int64_t khi = std::min(n, x);
        terms.clear();
        for (std::int64_t k = klo; k <= khi; ++k)
          terms.push_back(SignedLog::from_log(
              (k & 1) ? -1 : +1,
              lx[static_cast<std::size_t>(k)] + static_cast<double>(k) * log_qp_ +
                  lnx[static_cast<std::size_t>(n - k)]));
        out[static_cast<std::size_t>(n)] =
            stable_sum(terms) /
            SignedLog::from_log(+1, lnn[static_cast<std::size_t>(n)]);
      }
    }
    return out;
  }

  // Closed-form value at the critical point x = Np (requires Np integral).
  // Odd degrees evaluate to zero in both closed forms.  At p = 1/2 the value
  // is an exact finite-N identity; otherwise it is the large-N limit and is
  // labeled as such.
  struct CriticalValue {
    S value;
    bool exact_identity;  // true: p = 1/2 identity; false: asymptotic form
  };
  CriticalValue at_critical(std::int64_t degree) const {
    check_degree(degree);
    const Rational np = p_ * Rational(static_cast<long>(n_));
    if (np.get_den() != 1)
      throw std::domain_error("at_critical: Np is not an integer; use row()/value()");
    if (degree % 2 == 1) return {ScalarOps<S>::zero(), p_ == Rational(1, 2)};
    const std::int64_t m = degree / 2;
    if (p_ == Rational(1, 2)) {
      // Q_{2m}(N/2; N, 1/2) = (-1)^m C(N/2, m) / C(N, 2m), exact for all N
      Rational v = binomial_rational(n_ / 2, m) / binomial_rational(n_, 2 * m);
      if (m % 2 == 1) v = -v;
      return {ScalarOps<S>::from_mpq(v), true};
    }
    // Q_{2m}(Np; N, p) -> (-q/p)^m (2m)! / (m! (2N)^m) as N -> infinity
    Rational v = pow_int(-qp_ratio_, m);
    for (std::int64_t i = m + 1; i <= 2 * m; ++i) v *= Rational(static_cast<long>(i));
    v /= pow_int(Rational(static_cast<long>(2 * n_)), m);
    return {ScalarOps<S>::from_mpq(v), false};
  }

  // R_n(hx, hy, inner): coefficient of C(N,n) s^n in
  //   (1+s)^N00 (1 - s q/p)^(N01+N10) (1 + s q^2/p^2)^N11
  // with N00 = N - hx - hy + inner, N01+N10 = hx + hy - 2 inner, N11 = inner.
  S rn_coefficient(std::int64_t n, std::int64_t hx, std::int64_t hy,
                   std::int64_t inner) const {
    check_degree(n);
    const std::int64_t n00 = n_ - hx - hy + inner;
    const std::int64_t n01 = hx + hy - 2 * inner;
    const std::int64_t n11 = inner;
    if (n00 < 0 || n01 < 0 || n11 < 0)
      throw std::domain_error("rn_coefficient: inconsistent pair counts");
    const S g1 = ScalarOps<S>::from_mpq(-qp_ratio_);
    const S g2 = ScalarOps<S>::from_mpq(qp_ratio_ * qp_ratio_);
    std::vector<S> terms;
    for (std::int64_t b = 0; b <= std::min(n, n01); ++b) {
      for (std::int64_t c = 0; c <= std::min(n - b, n11); ++c) {
        const std::int64_t a = n - b - c;
        if (a > n00) continue;
        terms.push_back(ScalarOps<S>::binomial(n00, a) *
                        ScalarOps<S>::binomial(n01, b) * pow_int(g1, b) *
                        ScalarOps<S>::binomial(n11, c) * pow_int(g2, c));
      }
    }
    return ScalarOps<S>::sum(terms) / ScalarOps<S>::binomial(n_, n);
  }

  // Appendix identity: x(x-1) = N(N-1)p^2 (Q_2(x) - 2 Q_1(x) + 1).
  std::pair<S, S> xxm1_expansion_check(std::int64_t x) const {
    check_point(x);
    const S lhs = ScalarOps<S>::from_long(x) * ScalarOps<S>::from_long(x - 1);
    const S two = ScalarOps<S>::from_long(2);
    const S scale = ScalarOps<S>::from_mpq(Rational(static_cast<long>(n_)) *
                                           Rational(static_cast<long>(n_ - 1)) * p_ * p_);
    const S rhs = scale * (value(2, x) - two * value(1, x) + ScalarOps<S>::one());
    return {lhs, rhs};
  }

 private:
  void check_degree(std::int64_t n) const {
    if (n < 0 || n > n_) throw std::domain_error("Krawtchouk degree out of [0, N]");
  }
  void check_point(std::int64_t x) const {
    if (x < 0 || x > n_) throw std::domain_error("Krawtchouk point out of [0, N]");
  }

  S coefficient_sum(std::int64_t n, std::int64_t x) const {
    // C(N,n) Q_n(x) = sum_k C(x,k) (-q/p)^k C(N-x, n-k)
    const std::int64_t klo = std::max<std::int64_t>(0, n - (n_ - x));
    const std::int64_t khi = std::min(n, x);
    if constexpr (ScalarOps<S>::exact) {
      Rational acc(0);
      for (std::int64_t k = klo; k <= khi; ++k)
        acc += binomial_rational(x, k) * pow_int(-qp_ratio_, k) *
               binomial_rational(n_ - x, n - k);
      return acc;
    } else {
      std::vector<SignedLog> terms;
      terms.reserve(static_cast<std::size_t>(khi - klo + 1));
      for (std::int64_t k = klo; k <= khi; ++k)
        terms.push_back(SignedLog::from_log(
            (k & 1) ? -1 : +1, log_binomial(x, k) + static_cast<double>(k) * log_qp_ +
                                   log_binomial(n_ - x, n - k)));
      return stable_sum(terms);
    }
  }

  std::int64_t n_;
  Rational p_, q_, qp_ratio_;
  double log_qp_ = 0.0;
};

}  // namespace cubemix
