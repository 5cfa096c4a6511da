#include "mavar/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace mavar {

namespace {

std::vector<bool> reachable(const Matrix& adj_weights, bool transpose) {
  const Eigen::Index n = adj_weights.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = transpose ? adj_weights(j, i) : adj_weights(i, j);
      if (w > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

void check_dims(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": sizes " << a << " and " << b << " differ";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

StochasticKernel StochasticKernel::validate(const Matrix& matrix, double tol) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel matrix must be square");
  }
  if (matrix.rows() < 2) {
    throw Error(ErrorCode::InvalidArgument, "kernel needs at least 2 states");
  }
  if (!(tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "kernel has non-finite entries");
  }
  Matrix rows = matrix;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (rows(i, j) < -tol) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") = " << rows(i, j);
        throw Error(ErrorCode::NegativeEntry, os.str(), rows(i, j));
      }
      if (rows(i, j) < 0.0) rows(i, j) = 0.0;
    }
    const double s = rows.row(i).sum();
    if (std::abs(s - 1.0) > tol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << s;
      throw Error(ErrorCode::RowSumViolation, os.str(), s);
    }
    rows.row(i) /= s;
  }
  return StochasticKernel(std::move(rows), tol);
}

StationaryDist StationaryDist::from_weights(const Vector& weights, double tol) {
  if (weights.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "distribution needs at least 2 states");
  }
  if (!weights.allFinite() || (weights.array() <= 0.0).any()) {
    throw Error(ErrorCode::NotProbabilityVector,
                "stationary weights must be strictly positive");
  }
  const double s = weights.sum();
  if (std::abs(s - 1.0) > tol) {
    throw Error(ErrorCode::NotProbabilityVector, "stationary weights must sum to 1", s);
  }
  return StationaryDist(weights / s);
}

Observable::Observable(Vector values, const StationaryDist& pi)
    : values_(std::move(values)) {
  check_dims(static_cast<std::size_t>(values_.size()), pi.size(), "observable");
  pi_mean_ = pi.weights().dot(values_);
}

bool Observable::is_centered(double tol) const { return std::abs(pi_mean_) <= tol; }

Observable Observable::centered(const StationaryDist& pi) const {
  Vector v = values_.array() - pi.weights().dot(values_);
  return Observable(std::move(v), pi);
}

Matrix SpectralDecomposition::symmetric_eigenvectors(const StationaryDist& pi) const {
  return pi.weights().cwiseSqrt().asDiagonal() * eigenvectors;
}

StochasticKernel validate_kernel(const Matrix& matrix, double tol) {
  return StochasticKernel::validate(matrix, tol);
}

bool is_irreducible(const StochasticKernel& p) {
  const auto fwd = reachable(p.matrix(), false);
  const auto bwd = reachable(p.matrix(), true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

StationaryDist stationary_distribution(const StochasticKernel& p) {
  if (!is_irreducible(p)) {
    throw Error(ErrorCode::Reducible, "kernel is not irreducible");
  }
  const Eigen::Index n = p.matrix().rows();
  Matrix a = p.matrix().transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Matrix> lu(a);
  if (lu.rank() < n) {
    throw Error(ErrorCode::NumericalFailure, "stationary system is singular");
  }
  Vector w = lu.solve(rhs);
  // one step of iterative refinement
  w += lu.solve(rhs - a * w);
  if ((w.array() <= 0.0).any() || !w.allFinite()) {
    throw Error(ErrorCode::NumericalFailure, "stationary solve lost positivity");
  }
  w /= w.sum();
  return StationaryDist::from_weights(w);
}

double stationarity_residual(const StochasticKernel& p, const StationaryDist& pi) {
  check_dims(p.size(), pi.size(), "stationarity");
  return (p.matrix().transpose() * pi.weights() - pi.weights()).cwiseAbs().maxCoeff();
}

void require_stationary(const StochasticKernel& p, const StationaryDist& pi) {
  const double r = stationarity_residual(p, pi);
  if (r > std::max(p.tol(), kIdentityTol)) {
    throw Error(ErrorCode::NotStationary, "pi P != pi", r);
  }
}

StochasticKernel adjoint(const StochasticKernel& p, const StationaryDist& pi) {
  require_stationary(p, pi);
  const Vector& w = pi.weights();
  Matrix star = w.cwiseInverse().asDiagonal() * p.matrix().transpose() * w.asDiagonal();
  return StochasticKernel::validate(star, std::max(p.tol(), kStochasticTol));
}

StochasticKernel reversibilization(const StochasticKernel& p,
                                   const StationaryDist& pi) {
  const StochasticKernel star = adjoint(p, pi);
  return StochasticKernel::validate(0.5 * (p.matrix() + star.matrix()), p.tol());
}

bool is_reversible(const StochasticKernel& p, const StationaryDist& pi, double tol) {
  check_dims(p.size(), pi.size(), "is_reversible");
  const Matrix flow = pi.weights().asDiagonal() * p.matrix();
  return (flow - flow.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double pi_inner(const Vector& f, const Vector& g, const StationaryDist& pi) {
  check_dims(static_cast<std::size_t>(f.size()), static_cast<std::size_t>(g.size()),
             "pi_inner");
  check_dims(static_cast<std::size_t>(f.size()), pi.size(), "pi_inner");
  return (pi.weights().array() * f.array() * g.array()).sum();
}

double pi_inner(const Observable& f, const Observable& g, const StationaryDist& pi) {
  return pi_inner(f.values(), g.values(), pi);
}

double spectral_radius_l20(const StochasticKernel& p, const StationaryDist& pi) {
  if (!is_irreducible(p)) {
    throw Error(ErrorCode::Reducible, "kernel is not irreducible");
  }
  require_stationary(p, pi);
  const Eigen::Index n = p.matrix().rows();
  const Matrix deflated = p.matrix() - Vector::Ones(n) * pi.weights().transpose();
  Eigen::EigenSolver<Matrix> es(deflated, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eigen solver did not converge");
  }
  return std::min(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
}

SpectralDecomposition spectral_decomposition_reversible(const StochasticKernel& p,
                                                        const StationaryDist& pi) {
  require_stationary(p, pi);
  if (!is_reversible(p, pi)) {
    throw Error(ErrorCode::NotReversible, "kernel is not reversible w.r.t. pi");
  }
  const Vector sq = pi.weights().cwiseSqrt();
  Matrix sym = sq.asDiagonal() * p.matrix() * sq.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eigen solver did not converge");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = sym.rows();
  SpectralDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvectors.col(k) =
        sq.cwiseInverse().asDiagonal() * es.eigenvectors().col(n - 1 - k);
  }
  // Deterministic sign: largest-magnitude entry positive.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg;
    out.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (out.eigenvectors(arg, k) < 0.0) out.eigenvectors.col(k) *= -1.0;
  }
  return out;
}

}  // namespace mavar
