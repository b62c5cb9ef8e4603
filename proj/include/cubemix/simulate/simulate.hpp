#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cubemix/errors.hpp"
#include "cubemix/numerics/bitvec.hpp"
#include "cubemix/numerics/philox.hpp"
#include "cubemix/process/step.hpp"

namespace cubemix {

// How trajectories start: a fixed vector, a fixed-weight canonical vector
// (coordinates 1..k set), or an independent stationary draw per trajectory.
struct SimStart {
  enum Kind { Zeros, Ones, Weight, Stationary } kind = Zeros;
  std::int64_t weight = 0;

  static SimStart zeros() { return {Zeros, 0}; }
  static SimStart ones() { return {Ones, 0}; }
  static SimStart of_weight(std::int64_t k) { return {Weight, k}; }
  static SimStart stationary() { return {Stationary, 0}; }
};

struct SimConfig {
  ProcessSpec spec;
  SimStart start;
  std::int64_t horizon = 0;       // steps per trajectory
  std::int64_t n_trajectories = 1;
  std::uint64_t seed = 1;
  int workers = 0;                 // 0 = hardware concurrency
};

struct EmpiricalHamming {
  std::vector<std::int64_t> counts;  // ||X_horizon|| histogram, size N+1
  std::int64_t n = 0;
};

// Runs n_trajectories independent chains and tallies the terminal Hamming
// weight.  Stream = (seed, trajectory index), so the result is bit-identical
// for any worker count.
inline EmpiricalHamming run(const SimConfig& config) {
  if (config.n_trajectories < 1)
    throw ConfigError("n_trajectories: must be >= 1");
  if (config.horizon < 0) throw ConfigError("horizon: must be >= 0");
  if (config.start.kind == SimStart::Weight &&
      (config.start.weight < 0 || config.start.weight > config.spec.n))
    throw ConfigError("start.weight: must lie in [0, N]");

  const std::int64_t n = config.spec.n;
  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  const double p_double = to_double(config.spec.p);

  std::vector<std::vector<std::int64_t>> partial(
      static_cast<std::size_t>(workers),
      std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, 0));

  auto worker_fn = [&](int w) {
    StepSampler sampler(config.spec);
    BitVec x(n);
    auto& counts = partial[static_cast<std::size_t>(w)];
    for (std::int64_t traj = w; traj < config.n_trajectories; traj += workers) {
      PhiloxStream rng(config.seed, static_cast<std::uint64_t>(traj));
      sampler.reset();
      switch (config.start.kind) {
        case SimStart::Zeros: x.fill(false); break;
        case SimStart::Ones: x.fill(true); break;
        case SimStart::Weight:
          x.fill(false);
          for (std::int64_t j = 1; j <= config.start.weight; ++j) x.set(j, true);
          break;
        case SimStart::Stationary:
          for (std::int64_t j = 1; j <= n; ++j) x.set(j, rng.bernoulli(p_double));
          break;
      }
      for (std::int64_t t = 0; t < config.horizon; ++t) sampler.step(x, rng);
      ++counts[static_cast<std::size_t>(x.weight())];
    }
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& th : pool) th.join();
  }

  EmpiricalHamming out;
  out.n = config.n_trajectories;
  out.counts.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& c : partial)
    for (std::size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += c[k];
  return out;
}

struct CompareResult {
  double tv = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// TV between the empirical pmf and an exact reference, against the
// conservative multinomial threshold 3 sqrt((N+1)/(4n)).
inline CompareResult compare_exact(const EmpiricalHamming& emp,
                                   std::span<const double> exact) {
  if (exact.size() != emp.counts.size())
    throw std::invalid_argument("compare_exact: dimension mismatch");
  CompareResult r;
  for (std::size_t k = 0; k < exact.size(); ++k)
    r.tv += std::fabs(static_cast<double>(emp.counts[k]) /
                          static_cast<double>(emp.n) -
                      exact[k]);
  r.tv *= 0.5;
  r.threshold = 3.0 * std::sqrt(static_cast<double>(exact.size()) /
                                (4.0 * static_cast<double>(emp.n)));
  r.pass = r.tv <= r.threshold;
  return r;
}

}  // namespace cubemix
