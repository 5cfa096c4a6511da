#pragma once

// Seeded generators for property tests. Every function takes the RNG
// explicitly; nothing here touches global state.

#include <random>

#include "mavar/kernel.hpp"

namespace mavar::random {

/// Irreducible and aperiodic kernel: a Hamiltonian cycle and all self loops
/// are kept, other entries survive with probability `density`.
Matrix irreducible_kernel(Eigen::Index n, std::mt19937_64& rng, double density = 0.6);

/// Reversible kernel K_ij = W_ij / sum_j W_ij from random symmetric weights W
/// (positive diagonal, a cycle kept for connectivity). Its stationary law is
/// proportional to the row sums of W.
Matrix reversible_kernel(Eigen::Index n, std::mt19937_64& rng, double density = 0.8);

/// Superposition of random cycle flows on triangles of K's support, turned
/// into Gamma = D_pi^{-1} (flow) and scaled so that max |h| = max_h. Zero if
/// the support has no triangle.
Matrix vorticity(const StochasticKernel& k, const StationaryDist& pi, std::mt19937_64& rng,
                 double max_h = 0.9);

/// Drift Lambda built from a nonnegative circulation (symmetric part plus
/// directed triangle cycles) on states with K_ii > 0, scaled to use
/// `budget` of the diagonal allowance pi_i K_ii.
Matrix drift(const StochasticKernel& k, const StationaryDist& pi, std::mt19937_64& rng,
             double budget = 0.9);

/// pi-centered standard Gaussian vector.
Vector centered_vector(const StationaryDist& pi, std::mt19937_64& rng);

/// Uniform point of the probability simplex.
Vector probability_vector(Eigen::Index n, std::mt19937_64& rng);

}  // namespace mavar::random
