#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cubemix {

// Signed scalar held as sign and natural-log magnitude.  Survives the
// h_n * rho_n^{2t} products whose magnitudes leave double range long before
// the sums they enter do.  sign == 0 is exact zero and log_mag is ignored.
class SignedLog {
 public:
  constexpr SignedLog() = default;
  static constexpr SignedLog zero() { return SignedLog(); }
  static constexpr SignedLog one() { return from_log(+1, 0.0); }

  static constexpr SignedLog from_log(int sign, double log_mag) {
    SignedLog v;
    v.sign_ = sign < 0 ? -1 : (sign > 0 ? +1 : 0);
    if (log_mag == -std::numeric_limits<double>::infinity()) v.sign_ = 0;
    v.log_mag_ = v.sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_mag;
    return v;
  }

  static SignedLog from_double(double x) {
    if (x == 0.0) return zero();
    return from_log(x > 0 ? +1 : -1, std::log(std::fabs(x)));
  }

  static SignedLog from_ratio(std::int64_t num, std::int64_t den) {
    if (num == 0) return zero();
    const int s = ((num < 0) != (den < 0)) ? -1 : +1;
    return from_log(s, std::log(std::fabs(static_cast<double>(num))) -
                           std::log(std::fabs(static_cast<double>(den))));
  }

  int sign() const { return sign_; }
  double log_mag() const { return log_mag_; }
  bool is_zero() const { return sign_ == 0; }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_mag_);  // overflows to +-inf past ~709
  }

  SignedLog abs() const { return from_log(sign_ == 0 ? 0 : +1, log_mag_); }

  friend SignedLog operator-(const SignedLog& a) {
    return from_log(-a.sign_, a.log_mag_);
  }

  friend SignedLog operator*(const SignedLog& a, const SignedLog& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return zero();
    return from_log(a.sign_ * b.sign_, a.log_mag_ + b.log_mag_);
  }

  friend SignedLog operator/(const SignedLog& a, const SignedLog& b) {
    if (b.sign_ == 0) return from_log(a.sign_, std::numeric_limits<double>::infinity());
    if (a.sign_ == 0) return zero();
    return from_log(a.sign_ * b.sign_, a.log_mag_ - b.log_mag_);
  }

  friend SignedLog operator+(const SignedLog& a, const SignedLog& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const SignedLog& big = (a.log_mag_ >= b.log_mag_) ? a : b;
    const SignedLog& sml = (a.log_mag_ >= b.log_mag_) ? b : a;
    const double d = sml.log_mag_ - big.log_mag_;  // <= 0
    if (a.sign_ == b.sign_)
      return from_log(a.sign_, big.log_mag_ + std::log1p(std::exp(d)));
    if (d == 0.0) return zero();
    // log(1 - e^d): two branches for accuracy across the d range
    const double lm = (d > -0.6931471805599453)
                          ? big.log_mag_ + std::log(-std::expm1(d))
                          : big.log_mag_ + std::log1p(-std::exp(d));
    return from_log(big.sign_, lm);
  }

  friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }

  SignedLog& operator+=(const SignedLog& b) { return *this = *this + b; }
  SignedLog& operator-=(const SignedLog& b) { return *this = *this - b; }
  SignedLog& operator*=(const SignedLog& b) { return *this = *this * b; }
  SignedLog& operator/=(const SignedLog& b) { return *this = *this / b; }

  friend bool operator==(const SignedLog& a, const SignedLog& b) {
    if (a.sign_ != b.sign_) return false;
    return a.sign_ == 0 || a.log_mag_ == b.log_mag_;
  }

  // |a| < |b|
  friend bool abs_less(const SignedLog& a, const SignedLog& b) {
    if (a.sign_ == 0) return b.sign_ != 0;
    if (b.sign_ == 0) return false;
    return a.log_mag_ < b.log_mag_;
  }

 private:
  int sign_ = 0;
  double log_mag_ = -std::numeric_limits<double>::infinity();
};

inline SignedLog pow_int(const SignedLog& a, std::int64_t e) {
  if (e == 0) return SignedLog::one();
  if (a.is_zero()) {
    if (e < 0) return SignedLog::from_log(+1, std::numeric_limits<double>::infinity());
    return SignedLog::zero();
  }
  const int s = (a.sign() < 0 && (e & 1)) ? -1 : +1;
  return SignedLog::from_log(s, a.log_mag() * static_cast<double>(e));
}

struct SumResult {
  SignedLog value;
  // ln(sum |terms| / |sum terms|); large values flag cancellation-driven
  // accuracy loss (the 1e-12 relative contract holds up to condition 1e6).
  double log_condition = 0.0;
  bool accuracy_degraded() const { return log_condition > 13.815510557964274; }  // ln 1e6
};

// Sum with like signs folded in ascending magnitude; the two sign groups are
// merged last so cancellation happens exactly once.
inline SumResult stable_sum_ex(std::span<const SignedLog> terms) {
  std::vector<double> pos, neg;
  pos.reserve(terms.size());
  neg.reserve(terms.size());
  for (const SignedLog& t : terms) {
    if (t.sign() > 0) pos.push_back(t.log_mag());
    else if (t.sign() < 0) neg.push_back(t.log_mag());
  }
  auto fold = [](std::vector<double>& v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    std::sort(v.begin(), v.end());
    double acc = v.front();
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double m = std::max(acc, v[i]);
      acc = m + std::log1p(std::exp(std::min(acc, v[i]) - m));
    }
    return acc;
  };
  const double lp = fold(pos);
  const double ln = fold(neg);
  const SignedLog total = SignedLog::from_log(+1, lp) + SignedLog::from_log(-1, ln);

  SumResult r;
  r.value = total;
  if (total.is_zero()) {
    const bool all_zero = pos.empty() && neg.empty();
    r.log_condition = all_zero ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    const double labs = std::max(lp, ln) +
                        std::log1p(std::exp(std::min(lp, ln) - std::max(lp, ln)));
    r.log_condition = std::max(0.0, labs - total.log_mag());
  }
  return r;
}

inline SignedLog stable_sum(std::span<const SignedLog> terms) {
  return stable_sum_ex(terms).value;
}

}  // namespace cubemix
