#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubemix {

// Exact arbitrary-precision rationals.  mpq_class keeps the invariants we
// need (canonical form, positive denominator); helpers below cover the gaps.
using Rational = mpq_class;

inline Rational rational_from_string(const std::string& s) {
  // Accepts "a/b", integers, and decimal literals like "0.6" (read exactly).
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
  }
  const std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad rational: " + s);
  const bool neg = !head.empty() && head[0] == '-';
  mpz_class num(head.empty() || head == "-" ? std::string("0") : head);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, tail.size());
  mpz_class frac(tail.empty() ? std::string("0") : tail);
  num = num * scale + (neg ? -frac : frac);
  Rational r(num, scale);
  r.canonicalize();
  return r;
}

// Canonical a/b.  mpq_class's two-argument constructor does not reduce the
// fraction, and GMP arithmetic silently assumes canonical operands.
inline Rational make_ratio(std::int64_t num, std::int64_t den) {
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

inline Rational binomial_rational(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("binomial: need 0 <= k <= n");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(c);
}

// C(n, 0..n) by the running product; far cheaper than n independent
// binomial calls when whole rows are consumed.
inline std::vector<mpz_class> binomial_row_mpz(std::int64_t n) {
  if (n < 0) throw std::domain_error("binomial_row: n < 0");
  std::vector<mpz_class> row(static_cast<std::size_t>(n) + 1);
  row[0] = 1;
  for (std::int64_t k = 1; k <= n; ++k) {
    row[static_cast<std::size_t>(k)] =
        row[static_cast<std::size_t>(k - 1)] * (n - k + 1);
    mpz_divexact_ui(row[static_cast<std::size_t>(k)].get_mpz_t(),
                    row[static_cast<std::size_t>(k)].get_mpz_t(),
                    static_cast<unsigned long>(k));
  }
  return row;
}

inline Rational pow_int(const Rational& a, std::int64_t e) {
  if (e == 0) return Rational(1);
  const bool inv = e < 0;
  const std::uint64_t m = inv ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Rational base = inv ? Rational(1) / a : a;
  Rational acc(1);
  Rational sq = base;
  for (std::uint64_t bits = m; bits; bits >>= 1) {
    if (bits & 1) acc *= sq;
    if (bits > 1) sq *= sq;
  }
  return acc;
}

inline bool is_zero(const Rational& a) { return sgn(a) == 0; }

inline double to_double(const Rational& a) { return a.get_d(); }

// (sign, ln|a|) without overflowing double for huge numerators/denominators.
inline std::pair<int, double> log_abs(const Rational& a) {
  const int s = sgn(a);
  if (s == 0) return {0, -1.0 / 0.0};
  signed long ne = 0, de = 0;
  const double nd = mpz_get_d_2exp(&ne, a.get_num().get_mpz_t());
  const double dd = mpz_get_d_2exp(&de, a.get_den().get_mpz_t());
  constexpr double ln2 = 0.6931471805599453;
  return {s, std::log(std::fabs(nd)) - std::log(std::fabs(dd)) +
                 ln2 * (static_cast<double>(ne) - static_cast<double>(de))};
}

}  // namespace cubemix
