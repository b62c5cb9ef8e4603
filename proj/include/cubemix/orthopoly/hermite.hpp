#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubemix/numerics/log_binomial.hpp"
#include "cubemix/orthopoly/krawtchouk.hpp"

namespace cubemix {

// Probabilists' Hermite polynomials from the generating function
// exp(psi v - psi^2/2), via H_{n+1}(v) = v H_n(v) - n H_{n-1}(v).
inline double hermite(std::int64_t n, double v) {
  if (n < 0) throw std::domain_error("hermite: n must be >= 0");
  double hm1 = 0.0, h = 1.0;  // H_{-1} (unused), H_0
  for (std::int64_t m = 0; m < n; ++m) {
    const double next = v * h - static_cast<double>(m) * hm1;
    hm1 = h;
    h = next;
  }
  return h;
}

inline std::vector<double> hermite_row(std::int64_t max_degree, double v) {
  std::vector<double> out(static_cast<std::size_t>(max_degree) + 1);
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = v;
  for (std::int64_t m = 1; m < max_degree; ++m)
    out[static_cast<std::size_t>(m) + 1] =
        v * out[static_cast<std::size_t>(m)] -
        static_cast<double>(m) * out[static_cast<std::size_t>(m) - 1];
  return out;
}

// Bounded-degree Hermite evaluation cache.
struct HermiteEval {
  std::int64_t max_degree;
  double operator()(std::int64_t n, double v) const {
    if (n > max_degree) throw std::domain_error("HermiteEval: degree above max_degree");
    return hermite(n, v);
  }
};

// The scaled Krawtchouk limit: with z_N = round(Np + v sqrt(Npq)),
//   h_n^{1/2} Q_n(z_N; N, p)  ->  (-1)^n H_n(v) / sqrt(n!)   as N -> infinity.
// Returns (finite-N left side, limit right side); callers compare across N.
// Q_n(z_N) is taken through the exact rational path in either scalar mode:
// near the critical point the signed coefficient sum cancels ten-plus
// digits, and the handful of exact big-integer terms costs nothing.
template <class S>
std::pair<double, double> hermite_limit_check(const KrawtchoukBasis<S>& basis,
                                              std::int64_t n, double v) {
  const double np = to_double(Rational(basis.p() * Rational(static_cast<long>(basis.dim()))));
  const double npq = np * to_double(basis.q());
  const std::int64_t z = std::llround(np + v * std::sqrt(npq));
  if (z < 0 || z > basis.dim())
    throw std::domain_error("hermite_limit_check: z_N outside [0, N]");

  const KrawtchoukBasis<Rational> exact(basis.dim(), basis.p());
  const auto [sq, lq] = log_abs(exact.value(n, z));
  const double log_h =
      log_binomial(basis.dim(), n) +
      static_cast<double>(n) * ScalarOps<SignedLog>::from_mpq(basis.p() / basis.q()).log_mag();
  const double lhs = (sq == 0) ? 0.0 : sq * std::exp(0.5 * log_h + lq);

  double rhs = hermite(n, v) * std::exp(-0.5 * log_factorial(n));
  if (n % 2 == 1) rhs = -rhs;
  return {lhs, rhs};
}

}  // namespace cubemix
