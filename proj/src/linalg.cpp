#include "mavar/linalg.hpp"

namespace mavar {

namespace {

constexpr double kMinRcond = 1e-14;

Vector drop(const Vector& v, Eigen::Index k) {
  const Eigen::Index n = v.size();
  Vector out(n - 1);
  out.head(k) = v.head(k);
  out.tail(n - 1 - k) = v.tail(n - 1 - k);
  return out;
}

}  // namespace

Matrix mean_zero_basis(const StationaryDist& pi, Eigen::Index pivot) {
  const Eigen::Index n = static_cast<Eigen::Index>(pi.size());
  Matrix b = Matrix::Zero(n, n - 1);
  for (Eigen::Index c = 0; c < n - 1; ++c) {
    const Eigen::Index i = c < pivot ? c : c + 1;
    b(i, c) = 1.0;
    b(pivot, c) = -pi[i] / pi[pivot];
  }
  return b;
}

Matrix centering_projector(const StationaryDist& pi) {
  const Eigen::Index n = static_cast<Eigen::Index>(pi.size());
  return Matrix::Identity(n, n) - Vector::Ones(n) * pi.weights().transpose();
}

MeanZeroSolver::MeanZeroSolver(const Matrix& op, const StationaryDist& pi,
                               ErrorCode on_singular)
    : pi_(pi.weights()) {
  const Eigen::Index n = op.rows();
  if (op.cols() != n || static_cast<std::size_t>(n) != pi.size()) {
    throw Error(ErrorCode::DimensionMismatch, "operator and pi sizes differ");
  }
  pi_.maxCoeff(&pivot_);
  const Matrix full = op * mean_zero_basis(pi, pivot_);
  reduced_.resize(n - 1, n - 1);
  reduced_.topRows(pivot_) = full.topRows(pivot_);
  reduced_.bottomRows(n - 1 - pivot_) = full.bottomRows(n - 1 - pivot_);
  lu_.compute(reduced_);
  rcond_ = lu_.rcond();
  if (!(rcond_ > kMinRcond)) {
    throw Error(on_singular, "operator is singular on the mean-zero subspace", rcond_);
  }
}

Vector MeanZeroSolver::lift(const Vector& y) const {
  const Eigen::Index n = pi_.size();
  Vector u(n);
  u.head(pivot_) = y.head(pivot_);
  u.tail(n - 1 - pivot_) = y.tail(n - 1 - pivot_);
  u(pivot_) = 0.0;
  u(pivot_) = -pi_.dot(u) / pi_(pivot_);
  return u;
}

Vector MeanZeroSolver::solve(const Vector& g) const {
  if (g.size() != pi_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side has wrong size");
  }
  return lift(lu_.solve(drop(g, pivot_)));
}

Matrix MeanZeroSolver::solve(const Matrix& g) const {
  Matrix out(g.rows(), g.cols());
  for (Eigen::Index c = 0; c < g.cols(); ++c) out.col(c) = solve(Vector(g.col(c)));
  return out;
}

}  // namespace mavar
