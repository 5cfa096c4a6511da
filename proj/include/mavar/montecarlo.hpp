#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mavar/kernel.hpp"

namespace mavar {

/// A starting state index or a starting distribution.
using Initial = std::variant<std::size_t, Vector>;

struct Trajectory {
  std::vector<std::size_t> states;
  std::uint64_t seed = 0;
  std::string kernel_hash;  // FNV-1a of the kernel entries
  std::string rng;          // generator name, for reproducibility records
};

struct AvarEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_batches = 0;
  std::size_t batch_len = 0;
};

std::string kernel_digest(const StochasticKernel& p);

/// splitmix64 finalizer; per-trajectory seeds derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// n transitions (n + 1 states), deterministic given the seed.
Trajectory simulate(const StochasticKernel& p, const Initial& initial, std::size_t n,
                    std::uint64_t seed);

/// round(sqrt(n)), at least 1.
std::size_t default_batch_len(std::size_t n);

/// Batch-means estimate of sigma~^2(P, f) with f centered at its stored
/// pi-mean. std_error = value * sqrt(2 / (B - 1)).
AvarEstimate batch_means_avar(const Trajectory& traj, const Observable& f,
                              std::size_t batch_len);

}  // namespace mavar
