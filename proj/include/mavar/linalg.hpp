#pragma once

#include <Eigen/Dense>

#include "mavar/kernel.hpp"

namespace mavar {

/// Solves M u = g on the pi-mean-zero subspace for operators M with
/// M 1 = 0 and pi^T M = 0 (I - P, I - P*, I - K, T, ...).
///
/// The state with the largest pi is eliminated: u is parametrized by the
/// remaining n-1 coordinates (its value is fixed by pi(u) = 0) and the
/// matching equation is dropped, since pi^T M = 0 makes it redundant. The
/// resulting (n-1)x(n-1) system is factored once by partially pivoted LU.
class MeanZeroSolver {
 public:
  /// Throws `on_singular` if the reduced system is numerically singular.
  MeanZeroSolver(const Matrix& op, const StationaryDist& pi,
                 ErrorCode on_singular = ErrorCode::NumericalFailure);

  /// g must be mean-zero; the result is mean-zero.
  Vector solve(const Vector& g) const;
  /// Column-wise solve.
  Matrix solve(const Matrix& g) const;

  /// The reduced (n-1)x(n-1) matrix.
  const Matrix& reduced() const { return reduced_; }
  double rcond() const { return rcond_; }

 private:
  Vector lift(const Vector& y) const;

  Vector pi_;
  Eigen::Index pivot_;
  Matrix reduced_;
  Eigen::PartialPivLU<Matrix> lu_;
  double rcond_;
};

/// n x (n-1) basis of the mean-zero subspace, parametrized by all
/// coordinates except `pivot`.
Matrix mean_zero_basis(const StationaryDist& pi, Eigen::Index pivot);

/// Centering projector C = I - 1 pi^T.
Matrix centering_projector(const StationaryDist& pi);

}  // namespace mavar
