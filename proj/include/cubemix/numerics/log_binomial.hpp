#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace cubemix {

// Shared table of log-factorials, ln(k!) for k = 0..max seen so far.
//
// Accumulated in long double with Neumaier compensation so that the
// downstream differences ln C(N,n) = ln N! - ln n! - ln (N-n)! stay within
// ~1e-13 relative even for small results like ln C(10^6, 1), where plain
// double prefix sums lose everything to cancellation.
class LogFactorialTable {
 public:
  static double log_factorial(std::int64_t k) { return instance().get(k); }

  // ln C(n, k); throws std::domain_error outside 0 <= k <= n.
  static double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n)
      throw std::domain_error("log_binomial: need 0 <= k <= n");
    LogFactorialTable& t = instance();
    t.ensure(n);
    std::lock_guard<std::mutex> lock(t.mu_);
    return static_cast<double>(t.lf_[static_cast<std::size_t>(n)] -
                               t.lf_[static_cast<std::size_t>(k)] -
                               t.lf_[static_cast<std::size_t>(n - k)]);
  }

  // ln C(n, 0..n) as one vector; cheaper than n+1 locked lookups.
  static std::vector<double> log_binomial_row(std::int64_t n) {
    if (n < 0) throw std::domain_error("log_binomial_row: n < 0");
    LogFactorialTable& t = instance();
    t.ensure(n);
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    std::lock_guard<std::mutex> lock(t.mu_);
    const long double lfn = t.lf_[static_cast<std::size_t>(n)];
    for (std::int64_t k = 0; k <= n; ++k)
      row[static_cast<std::size_t>(k)] =
          static_cast<double>(lfn - t.lf_[static_cast<std::size_t>(k)] -
                              t.lf_[static_cast<std::size_t>(n - k)]);
    return row;
  }

 private:
  LogFactorialTable() {
    lf_.push_back(0.0L);  // 0!
    lf_.push_back(0.0L);  // 1!
  }

  static LogFactorialTable& instance() {
    static LogFactorialTable t;
    return t;
  }

  double get(std::int64_t k) {
    if (k < 0) throw std::domain_error("log_factorial: k < 0");
    ensure(k);
    std::lock_guard<std::mutex> lock(mu_);
    return static_cast<double>(lf_[static_cast<std::size_t>(k)]);
  }

  void ensure(std::int64_t k) {
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<std::int64_t>(lf_.size()) <= k) {
      const long double x = logl(static_cast<long double>(lf_.size()));
      // Neumaier step on (sum_, comp_)
      const long double t = sum_ + x;
      comp_ += (fabsl(sum_) >= fabsl(x)) ? (sum_ - t) + x : (x - t) + sum_;
      sum_ = t;
      lf_.push_back(sum_ + comp_);
    }
  }

  std::mutex mu_;
  std::deque<long double> lf_;  // stable references under growth
  long double sum_ = 0.0L;      // running ln((size-1)!)
  long double comp_ = 0.0L;
};

// ln C(n, k) with relative error <= 1e-12 for n up to 10^6.
inline double log_binomial(std::int64_t n, std::int64_t k) {
  return LogFactorialTable::log_binomial(n, k);
}

inline double log_factorial(std::int64_t k) {
  return LogFactorialTable::log_factorial(k);
}

}  // namespace cubemix
