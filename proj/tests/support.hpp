#pragma once

// Oracles and generators shared by the unit tests. The oracles deliberately
// take a different numerical path from the library (fundamental matrix,
// dense least squares, graph closure) so agreement is meaningful.

#include <random>

#include <Eigen/Dense>

#include "mavar/kernel.hpp"
#include "mavar/random.hpp"

namespace mavar::test {

struct Chain {
  StochasticKernel p;
  StationaryDist pi;
};

inline Chain chain(const Matrix& m) {
  StochasticKernel p = validate_kernel(m);
  StationaryDist pi = stationary_distribution(p);
  return {std::move(p), std::move(pi)};
}

inline Chain random_chain(std::mt19937_64& rng, Eigen::Index n) {
  return chain(random::irreducible_kernel(n, rng));
}

inline Chain random_reversible(std::mt19937_64& rng, Eigen::Index n) {
  return chain(random::reversible_kernel(n, rng));
}

/// pi from the null space of (P^T - I) by SVD, normalized.
inline Vector stationary_oracle(const Matrix& p) {
  const Eigen::Index n = p.rows();
  Eigen::JacobiSVD<Matrix> svd(p.transpose() - Matrix::Identity(n, n), Eigen::ComputeFullV);
  Vector v = svd.matrixV().col(n - 1);
  return v / v.sum();
}

/// Mean-zero Poisson solution through the fundamental matrix
/// Z = (I - P + 1 pi^T)^{-1}.
inline Vector poisson_oracle(const Matrix& p, const Vector& pi, const Vector& f) {
  const Eigen::Index n = p.rows();
  const Matrix z =
      (Matrix::Identity(n, n) - p + Vector::Ones(n) * pi.transpose()).fullPivLu().inverse();
  return z * f;
}

inline double sigma2_oracle(const Matrix& p, const Vector& pi, const Vector& f) {
  return (pi.array() * poisson_oracle(p, pi, f).array() * f.array()).sum();
}

/// Reachability by Floyd-Warshall transitive closure.
inline bool irreducible_oracle(const Matrix& p) {
  const Eigen::Index n = p.rows();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (Eigen::Index i = 0; i < n; ++i) {
    r[i][i] = true;
    for (Eigen::Index j = 0; j < n; ++j) r[i][j] = r[i][j] || p(i, j) > 0.0;
  }
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r[i][j] = r[i][j] || (r[i][k] && r[k][j]);
  for (const auto& row : r)
    for (bool b : row)
      if (!b) return false;
  return true;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace mavar::test
