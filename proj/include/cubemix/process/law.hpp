#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cubemix/errors.hpp"
#include "cubemix/numerics/rational.hpp"

namespace cubemix {

// Update laws: the distribution of the refresh vector Z.  Exchangeable laws
// admit a degree-indexed spectrum; BlockUpdate and Explicit do not.
struct SubsetUniform {
  std::int64_t z;  // exactly z coordinates picked, uniformly
};
struct IidBernoulli {
  Rational alpha;  // each coordinate picked independently with rate alpha
};
struct DeFinettiAtom {
  Rational alpha;
  Rational weight;
};
struct DeFinettiDiscrete {
  std::vector<DeFinettiAtom> atoms;  // random rate from a discrete mixing law
};
struct DeFinettiLebesgue {};  // rate drawn uniformly from (0,1) each step
struct BlockUpdate {
  std::int64_t beta;  // one block of the fixed partition {1..b},{b+1..2b},...
};
struct ExplicitLaw {
  std::vector<Rational> pmf;  // over all 2^N vectors; index convention below
};

using UpdateLaw = std::variant<SubsetUniform, IidBernoulli, DeFinettiDiscrete,
                               DeFinettiLebesgue, BlockUpdate, ExplicitLaw>;

// A chain in the class: dimension, stationarity parameter, update law.
// Stationary measure: product Bernoulli(p) over the N coordinates.
struct ProcessSpec {
  std::int64_t n = 0;
  Rational p;
  UpdateLaw law;
};

// Dense state indexing: index = sum_j x[j] 2^(N-j), i.e. coordinate 1 is the
// most significant bit, so ascending index = lexicographic order of x.
using Mask = std::uint32_t;

inline int coord_bit(std::int64_t n, std::int64_t j) {
  return static_cast<int>(n - j);
}
inline bool mask_get(Mask m, std::int64_t n, std::int64_t j) {
  return (m >> coord_bit(n, j)) & 1u;
}
inline std::int64_t mask_weight(Mask m) { return std::popcount(m); }

inline std::string mask_to_string(Mask m, std::int64_t n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (std::int64_t j = 1; j <= n; ++j)
    if (mask_get(m, n, j)) s[static_cast<std::size_t>(j - 1)] = '1';
  return s;
}

inline const char* law_name(const UpdateLaw& law) {
  struct V {
    const char* operator()(const SubsetUniform&) const { return "subset-uniform"; }
    const char* operator()(const IidBernoulli&) const { return "iid-bernoulli"; }
    const char* operator()(const DeFinettiDiscrete&) const { return "definetti-discrete"; }
    const char* operator()(const DeFinettiLebesgue&) const { return "definetti-lebesgue"; }
    const char* operator()(const BlockUpdate&) const { return "block-update"; }
    const char* operator()(const ExplicitLaw&) const { return "explicit"; }
  };
  return std::visit(V{}, law);
}

inline bool is_exchangeable(const UpdateLaw& law) {
  return std::holds_alternative<SubsetUniform>(law) ||
         std::holds_alternative<IidBernoulli>(law) ||
         std::holds_alternative<DeFinettiDiscrete>(law) ||
         std::holds_alternative<DeFinettiLebesgue>(law);
}

inline void validate(const ProcessSpec& spec) {
  if (spec.n <= 0) throw ConfigError("spec.n: must be a positive integer");
  if (spec.p < Rational(1, 2) || spec.p >= 1)
    throw ConfigError("spec.p: must lie in [1/2, 1)");
  if (const auto* su = std::get_if<SubsetUniform>(&spec.law)) {
    if (su->z < 1 || su->z > spec.n) throw ConfigError("law.z: must lie in [1, N]");
  } else if (const auto* ib = std::get_if<IidBernoulli>(&spec.law)) {
    if (ib->alpha <= 0 || ib->alpha > 1) throw ConfigError("law.alpha: must lie in (0, 1]");
  } else if (const auto* dd = std::get_if<DeFinettiDiscrete>(&spec.law)) {
    if (dd->atoms.empty()) throw ConfigError("law.atoms: must be nonempty");
    Rational total(0);
    for (const auto& a : dd->atoms) {
      if (a.alpha <= 0 || a.alpha > 1) throw ConfigError("law.atoms[].alpha: must lie in (0, 1]");
      if (a.weight < 0) throw ConfigError("law.atoms[].weight: must be nonnegative");
      total += a.weight;
    }
    if (total != 1) throw ConfigError("law.atoms: weights must sum to 1 exactly");
  } else if (const auto* bu = std::get_if<BlockUpdate>(&spec.law)) {
    if (bu->beta < 1 || bu->beta > spec.n || spec.n % bu->beta != 0)
      throw ConfigError("law.beta: must divide N");
  } else if (const auto* ex = std::get_if<ExplicitLaw>(&spec.law)) {
    if (spec.n > 20) throw ConfigError("explicit law: N must be <= 20");
    if (ex->pmf.size() != (std::size_t{1} << spec.n))
      throw ConfigError("law.pmf: must have exactly 2^N entries");
    Rational total(0);
    for (const auto& v : ex->pmf) {
      if (v < 0) throw ConfigError("law.pmf: entries must be nonnegative");
      total += v;
    }
    if (total != 1) throw ConfigError("law.pmf: must sum to 1 exactly");
  }
}

// Support of Z as (mask, weight) pairs; exact weights.  Dense-kernel scale
// only.  For the Lebesgue mixture the per-vector weight integrates the
// Bernoulli(r) product against dr: P(Z = z) = ||z||!(N-||z||)!/(N+1)!.
inline std::vector<std::pair<Mask, Rational>> z_support(const ProcessSpec& spec) {
  if (spec.n > 20) throw CapacityError("z_support: N too large for exhaustive support");
  const std::int64_t n = spec.n;
  const Mask dim = Mask{1} << n;
  std::vector<std::pair<Mask, Rational>> out;

  if (const auto* su = std::get_if<SubsetUniform>(&spec.law)) {
    const Rational w = Rational(1) / binomial_rational(n, su->z);
    for (Mask m = 0; m < dim; ++m)
      if (mask_weight(m) == su->z) out.emplace_back(m, w);
  } else if (const auto* ib = std::get_if<IidBernoulli>(&spec.law)) {
    for (Mask m = 0; m < dim; ++m) {
      const std::int64_t k = mask_weight(m);
      out.emplace_back(m, pow_int(ib->alpha, k) * pow_int(1 - ib->alpha, n - k));
    }
  } else if (const auto* dd = std::get_if<DeFinettiDiscrete>(&spec.law)) {
    for (Mask m = 0; m < dim; ++m) {
      const std::int64_t k = mask_weight(m);
      Rational w(0);
      for (const auto& a : dd->atoms)
        w += a.weight * pow_int(a.alpha, k) * pow_int(1 - a.alpha, n - k);
      out.emplace_back(m, w);
    }
  } else if (std::holds_alternative<DeFinettiLebesgue>(spec.law)) {
    for (Mask m = 0; m < dim; ++m) {
      const std::int64_t k = mask_weight(m);
      out.emplace_back(m, Rational(1) / (Rational(static_cast<long>(n + 1)) *
                                         binomial_rational(n, k)));
    }
  } else if (const auto* bu = std::get_if<BlockUpdate>(&spec.law)) {
    const std::int64_t nb = n / bu->beta;
    const Rational w = make_ratio(bu->beta, n);
    for (std::int64_t b = 0; b < nb; ++b) {
      Mask m = 0;
      for (std::int64_t j = b * bu->beta + 1; j <= (b + 1) * bu->beta; ++j)
        m |= Mask{1} << coord_bit(n, j);
      out.emplace_back(m, w);
    }
  } else if (const auto* ex = std::get_if<ExplicitLaw>(&spec.law)) {
    for (Mask m = 0; m < dim; ++m)
      if (ex->pmf[m] != 0) out.emplace_back(m, ex->pmf[m]);
  }
  return out;
}

// min_j P(Z[j] = 1): the irreducibility margin of the general lower bound.
inline Rational theta_parameter(const ProcessSpec& spec) {
  if (const auto* su = std::get_if<SubsetUniform>(&spec.law))
    return make_ratio(su->z, spec.n);
  if (const auto* ib = std::get_if<IidBernoulli>(&spec.law)) return ib->alpha;
  if (const auto* dd = std::get_if<DeFinettiDiscrete>(&spec.law)) {
    Rational r(0);
    for (const auto& a : dd->atoms) r += a.weight * a.alpha;
    return r;
  }
  if (std::holds_alternative<DeFinettiLebesgue>(spec.law)) return Rational(1, 2);
  if (const auto* bu = std::get_if<BlockUpdate>(&spec.law))
    return make_ratio(bu->beta, spec.n);
  const auto& ex = std::get<ExplicitLaw>(spec.law);
  Rational best(-1);
  for (std::int64_t j = 1; j <= spec.n; ++j) {
    Rational pj(0);
    for (Mask m = 0; m < (Mask{1} << spec.n); ++m)
      if (mask_get(m, spec.n, j)) pj += ex.pmf[m];
    if (best < 0 || pj < best) best = pj;
  }
  return best;
}

}  // namespace cubemix
