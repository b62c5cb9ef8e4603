#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cubemix/numerics/log_binomial.hpp"
#include "cubemix/numerics/rational.hpp"
#include "cubemix/numerics/signed_log.hpp"

namespace cubemix {

// Which scalar backend produced a value.  Exact is the reference for small
// instances; LogFloat (53-bit log-domain doubles) is the scaling path.
struct ScalarMode {
  enum Kind { Exact, LogFloat } kind = Exact;
  int precision_bits = 53;

  static ScalarMode exact() { return {Exact, 0}; }
  static ScalarMode log_float(int bits = 53) { return {LogFloat, bits}; }
  std::string name() const { return kind == Exact ? "exact" : "logfloat"; }
};

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static ScalarMode mode() { return ScalarMode::exact(); }
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_mpq(const Rational& q) { return q; }
  static Rational from_long(std::int64_t v) { return Rational(static_cast<long>(v)); }
  static Rational binomial(std::int64_t n, std::int64_t k) { return binomial_rational(n, k); }
  static Rational sum(std::span<const Rational> terms) {
    Rational acc(0);
    for (const Rational& t : terms) acc += t;
    return acc;
  }
  static double log_abs_value(const Rational& a) { return log_abs(a).second; }
  static int sign(const Rational& a) { return sgn(a); }
};

template <>
struct ScalarOps<SignedLog> {
  static constexpr bool exact = false;
  static ScalarMode mode() { return ScalarMode::log_float(); }
  static SignedLog zero() { return SignedLog::zero(); }
  static SignedLog one() { return SignedLog::one(); }
  static SignedLog from_mpq(const Rational& q) {
    const auto [s, lm] = log_abs(q);
    return SignedLog::from_log(s, lm);
  }
  static SignedLog from_long(std::int64_t v) {
    return SignedLog::from_double(static_cast<double>(v));
  }
  static SignedLog binomial(std::int64_t n, std::int64_t k) {
    return SignedLog::from_log(+1, log_binomial(n, k));
  }
  static SignedLog sum(std::span<const SignedLog> terms) { return stable_sum(terms); }
  static double log_abs_value(const SignedLog& a) { return a.log_mag(); }
  static int sign(const SignedLog& a) { return a.sign(); }
};

inline bool is_zero(const SignedLog& a) { return a.is_zero(); }
inline double to_double(const SignedLog& a) { return a.to_double(); }

template <class S>
double to_double_checked(const S& a) {
  return to_double(a);
}

}  // namespace cubemix
