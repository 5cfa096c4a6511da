#pragma once

// Finite-state stochastic-matrix algebra: validation, stationary
// distributions, the pi-adjoint, reversibilization and spectral quantities.

#include <cstddef>

#include <Eigen/Dense>

#include "mavar/error.hpp"

namespace mavar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance for row-stochasticity checks.
inline constexpr double kStochasticTol = 1e-9;
/// Tolerance for algebraic identities (detailed balance, adjoint, ...).
inline constexpr double kIdentityTol = 1e-12;

/// A validated row-stochastic matrix. Entries in [-tol, 0) are clamped to
/// zero and every row is renormalized to sum exactly to one.
class StochasticKernel {
 public:
  static StochasticKernel validate(const Matrix& matrix,
                                   double tol = kStochasticTol);

  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  const Matrix& matrix() const { return rows_; }
  double tol() const { return tol_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return rows_(i, j); }

 private:
  StochasticKernel(Matrix rows, double tol) : rows_(std::move(rows)), tol_(tol) {}

  Matrix rows_;
  double tol_;
};

/// Strictly positive probability vector.
class StationaryDist {
 public:
  /// Wraps user-supplied weights after checking positivity and sum.
  static StationaryDist from_weights(const Vector& weights,
                                     double tol = kStochasticTol);

  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  const Vector& weights() const { return weights_; }
  double operator[](Eigen::Index i) const { return weights_(i); }

 private:
  explicit StationaryDist(Vector w) : weights_(std::move(w)) {}
  Vector weights_;
};

/// Real function on the state space together with its pi-mean.
class Observable {
 public:
  Observable(Vector values, const StationaryDist& pi);

  const Vector& values() const { return values_; }
  double pi_mean() const { return pi_mean_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  bool is_centered(double tol = kStochasticTol) const;
  /// f - pi(f).
  Observable centered(const StationaryDist& pi) const;

 private:
  Vector values_;
  double pi_mean_;
};

/// Eigenpairs of a reversible kernel. Eigenvectors are pi-orthonormal
/// columns, eigenvalues sorted in descending order.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  /// D^{1/2} V, the Euclidean-orthonormal eigenvectors of the symmetrized
  /// kernel D^{1/2} P D^{-1/2}.
  Matrix symmetric_eigenvectors(const StationaryDist& pi) const;
};

StochasticKernel validate_kernel(const Matrix& matrix,
                                 double tol = kStochasticTol);

/// Strong connectivity of the digraph {i -> j : P_ij > 0}.
bool is_irreducible(const StochasticKernel& p);

/// Unique stationary law by a direct solve of (P^T - I) with the
/// normalization row substituted. Throws Reducible / NumericalFailure.
StationaryDist stationary_distribution(const StochasticKernel& p);

/// max_i |(pi P)_i - pi_i|.
double stationarity_residual(const StochasticKernel& p, const StationaryDist& pi);

/// Throws NotStationary unless pi P = pi within the kernel tolerance.
void require_stationary(const StochasticKernel& p, const StationaryDist& pi);

/// Time reversal (P*)_ij = pi_j P_ji / pi_i.
StochasticKernel adjoint(const StochasticKernel& p, const StationaryDist& pi);

/// K = (P + P*) / 2.
StochasticKernel reversibilization(const StochasticKernel& p,
                                   const StationaryDist& pi);

bool is_reversible(const StochasticKernel& p, const StationaryDist& pi,
                   double tol = kIdentityTol);

/// sum_i pi_i f_i g_i
double pi_inner(const Observable& f, const Observable& g, const StationaryDist& pi);
double pi_inner(const Vector& f, const Vector& g, const StationaryDist& pi);

/// Largest eigenvalue modulus of P on the pi-mean-zero subspace, obtained by
/// deflating the Perron mode (P - 1 pi^T).
double spectral_radius_l20(const StochasticKernel& p, const StationaryDist& pi);

SpectralDecomposition spectral_decomposition_reversible(const StochasticKernel& p,
                                                        const StationaryDist& pi);

}  // namespace mavar
