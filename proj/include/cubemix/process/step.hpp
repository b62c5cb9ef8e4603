#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "cubemix/numerics/bitvec.hpp"
#include "cubemix/numerics/philox.hpp"
#include "cubemix/process/law.hpp"

namespace cubemix {

// One acceptance/rejection transition:
//   Z[j] = 0            -> coordinate unchanged
//   Z[j] = 1, x[j] = 0  -> becomes 1
//   Z[j] = 1, x[j] = 1  -> flips to 0 with probability q/p
// Holds the per-law sampling tables so repeated steps are cheap.
class StepSampler {
 public:
  explicit StepSampler(const ProcessSpec& spec) : spec_(spec) {
    validate(spec);
    flip_prob_ = to_double((1 - spec.p) / spec.p);
    if (const auto* dd = std::get_if<DeFinettiDiscrete>(&spec.law)) {
      double acc = 0;
      for (const auto& a : dd->atoms) {
        acc += to_double(a.weight);
        atom_cdf_.push_back(acc);
        atom_alpha_.push_back(to_double(a.alpha));
      }
    } else if (const auto* ex = std::get_if<ExplicitLaw>(&spec.law)) {
      double acc = 0;
      for (const auto& v : ex->pmf) {
        acc += to_double(v);
        explicit_cdf_.push_back(acc);
      }
    }
    scratch_.resize(static_cast<std::size_t>(spec.n));
    std::iota(scratch_.begin(), scratch_.end(), std::int64_t{1});
  }

  const ProcessSpec& spec() const { return spec_; }

  // Returns the sampler to its initial state.  The subset-uniform pick
  // buffer carries across steps; resetting at trajectory boundaries keeps
  // every trajectory a pure function of (seed, trajectory index).
  void reset() { std::iota(scratch_.begin(), scratch_.end(), std::int64_t{1}); }

  void step(BitVec& x, PhiloxStream& rng) {
    const std::int64_t n = spec_.n;
    if (const auto* su = std::get_if<SubsetUniform>(&spec_.law)) {
      // partial Fisher-Yates: first z entries of scratch_ become the picks
      for (std::int64_t i = 0; i < su->z; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(scratch_[static_cast<std::size_t>(i)], scratch_[static_cast<std::size_t>(j)]);
        touch(x, scratch_[static_cast<std::size_t>(i)], rng);
      }
    } else if (const auto* ib = std::get_if<IidBernoulli>(&spec_.law)) {
      const double a = to_double(ib->alpha);
      for (std::int64_t j = 1; j <= n; ++j)
        if (rng.bernoulli(a)) touch(x, j, rng);
    } else if (std::holds_alternative<DeFinettiDiscrete>(spec_.law)) {
      const double u = rng.next_unit();
      std::size_t i = 0;
      while (i + 1 < atom_cdf_.size() && u >= atom_cdf_[i]) ++i;
      const double a = atom_alpha_[i];
      for (std::int64_t j = 1; j <= n; ++j)
        if (rng.bernoulli(a)) touch(x, j, rng);
    } else if (std::holds_alternative<DeFinettiLebesgue>(spec_.law)) {
      const double a = rng.next_unit();
      for (std::int64_t j = 1; j <= n; ++j)
        if (rng.bernoulli(a)) touch(x, j, rng);
    } else if (const auto* bu = std::get_if<BlockUpdate>(&spec_.law)) {
      const std::int64_t b =
          static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n / bu->beta)));
      for (std::int64_t j = b * bu->beta + 1; j <= (b + 1) * bu->beta; ++j)
        touch(x, j, rng);
    } else {
      const double u = rng.next_unit();
      std::size_t m = 0;
      while (m + 1 < explicit_cdf_.size() && u >= explicit_cdf_[m]) ++m;
      for (std::int64_t j = 1; j <= n; ++j)
        if (mask_get(static_cast<Mask>(m), n, j)) touch(x, j, rng);
    }
  }

 private:
  void touch(BitVec& x, std::int64_t j, PhiloxStream& rng) {
    if (!x.get(j)) {
      x.set(j, true);
    } else if (rng.bernoulli(flip_prob_)) {
      x.set(j, false);
    }
  }

  ProcessSpec spec_;
  double flip_prob_ = 0.0;
  std::vector<double> atom_cdf_, atom_alpha_, explicit_cdf_;
  std::vector<std::int64_t> scratch_;
};

// Single transition on a mask state (dense scale), same rules.
inline Mask step_sample(const ProcessSpec& spec, Mask x, PhiloxStream& rng) {
  StepSampler sampler(spec);
  BitVec v(spec.n);
  for (std::int64_t j = 1; j <= spec.n; ++j) v.set(j, mask_get(x, spec.n, j));
  sampler.step(v, rng);
  Mask y = 0;
  for (std::int64_t j = 1; j <= spec.n; ++j)
    if (v.get(j)) y |= Mask{1} << coord_bit(spec.n, j);
  return y;
}

}  // namespace cubemix
