#include "mavar/random.hpp"

#include <algorithm>
#include <cmath>

namespace mavar::random {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

}  // namespace

Matrix irreducible_kernel(Eigen::Index n, std::mt19937_64& rng, double density) {
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool keep = i == j || j == (i + 1) % n || coin(rng, density);
      if (keep) w(i, j) = uniform(rng, 0.05, 1.0);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) w.row(i) /= w.row(i).sum();
  return w;
}

Matrix reversible_kernel(Eigen::Index n, std::mt19937_64& rng, double density) {
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const bool keep = i == j || j == i + 1 || (i == 0 && j == n - 1) || coin(rng, density);
      if (keep) w(i, j) = w(j, i) = uniform(rng, 0.05, 1.0);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) w.row(i) /= w.row(i).sum();
  return w;
}

Matrix vorticity(const StochasticKernel& k, const StationaryDist& pi, std::mt19937_64& rng,
                 double max_h) {
  const Eigen::Index n = static_cast<Eigen::Index>(k.size());
  Matrix flow = Matrix::Zero(n, n);
  auto edge = [&](Eigen::Index a, Eigen::Index b) { return k(a, b) > 0.0 && k(b, a) > 0.0; };
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      for (Eigen::Index c = b + 1; c < n; ++c) {
        if (!edge(a, b) || !edge(b, c) || !edge(c, a)) continue;
        const double w = uniform(rng, -1.0, 1.0);
        flow(a, b) += w; flow(b, a) -= w;
        flow(b, c) += w; flow(c, b) -= w;
        flow(c, a) += w; flow(a, c) -= w;
      }
    }
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (k(i, j) > 0.0) worst = std::max(worst, std::abs(flow(i, j)) / (pi[i] * k(i, j)));
    }
  }
  if (worst == 0.0) return Matrix::Zero(n, n);
  return pi.weights().cwiseInverse().asDiagonal() * flow * (max_h / worst);
}

Matrix drift(const StochasticKernel& k, const StationaryDist& pi, std::mt19937_64& rng,
             double budget) {
  const Eigen::Index n = static_cast<Eigen::Index>(k.size());
  std::vector<Eigen::Index> lazy;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (k(i, i) > 0.0) lazy.push_back(i);
  }
  Matrix r = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < lazy.size(); ++a) {
    for (std::size_t b = a + 1; b < lazy.size(); ++b) {
      if (coin(rng, 0.5)) {
        const double w = uniform(rng, 0.0, 1.0);
        r(lazy[a], lazy[b]) += w;
        r(lazy[b], lazy[a]) += w;
      }
      for (std::size_t c = b + 1; c < lazy.size(); ++c) {
        if (!coin(rng, 0.3)) continue;
        const double w = uniform(rng, 0.0, 1.0);
        const Eigen::Index x = lazy[a], y = lazy[b], z = lazy[c];
        if (coin(rng, 0.5)) {
          r(x, y) += w; r(y, z) += w; r(z, x) += w;
        } else {
          r(x, z) += w; r(z, y) += w; r(y, x) += w;
        }
      }
    }
  }
  Matrix lambda = r;
  for (Eigen::Index i = 0; i < n; ++i) lambda(i, i) = -r.row(i).sum();
  double worst = 0.0;
  for (Eigen::Index i : lazy) worst = std::max(worst, -lambda(i, i) / (pi[i] * k(i, i)));
  if (worst == 0.0) return Matrix::Zero(n, n);
  return lambda * (budget / worst);
}

Vector centered_vector(const StationaryDist& pi, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(pi.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  v.array() -= pi.weights().dot(v);
  return v;
}

Vector probability_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = expo(rng);
  return v / v.sum();
}

}  // namespace mavar::random
