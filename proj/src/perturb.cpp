#include "mavar/perturb.hpp"

#include <cmath>
#include <sstream>

#include "mavar/ordering.hpp"

namespace mavar {

namespace {

void require_reversible_base(const StochasticKernel& k, const StationaryDist& pi,
                             const Matrix& m) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != k.size()) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation has wrong shape");
  }
  require_stationary(k, pi);
  if (!is_reversible(k, pi)) {
    throw Error(ErrorCode::NotReversible, "base kernel must be reversible w.r.t. pi");
  }
}

std::string at(Eigen::Index i, Eigen::Index j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

StochasticKernel checked_result(const Matrix& m, const StochasticKernel& k,
                                const StationaryDist& pi) {
  StochasticKernel out = [&] {
    try {
      return StochasticKernel::validate(m, k.tol());
    } catch (const Error& e) {
      throw Error(ErrorCode::SpecInvalid, std::string("perturbed kernel invalid: ") + e.what());
    }
  }();
  const double r = stationarity_residual(out, pi);
  if (r > std::max(k.tol(), kIdentityTol)) {
    throw Error(ErrorCode::SpecInvalid, "perturbed kernel does not preserve pi", r);
  }
  return out;
}

}  // namespace

VorticitySpec validate_vorticity(const StochasticKernel& k, const StationaryDist& pi,
                                 const Matrix& gamma, double tol) {
  require_reversible_base(k, pi, gamma);
  const Eigen::Index n = gamma.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = gamma.row(i).sum();
    if (std::abs(s) > tol) {
      throw Error(ErrorCode::RowSumNonzero, "row " + std::to_string(i) + " of Gamma sums to " +
                                                std::to_string(s), s);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double skew = pi[i] * gamma(i, j) + pi[j] * gamma(j, i);
      if (std::abs(skew) > tol) {
        throw Error(ErrorCode::NotAntisymmetric,
                    "pi_i Gamma_ij + pi_j Gamma_ji != 0 at " + at(i, j), skew);
      }
    }
  }
  VorticitySpec spec{gamma, Matrix::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double kij = k(i, j);
      if (kij > 0.0) {
        if (std::abs(gamma(i, j)) > kij + tol) {
          throw Error(ErrorCode::DensityExceedsOne, "|h| > 1 at " + at(i, j),
                      gamma(i, j) / kij);
        }
        spec.h(i, j) = gamma(i, j) / kij;
      } else if (std::abs(gamma(i, j)) > tol) {
        throw Error(ErrorCode::DensityExceedsOne,
                    "Gamma puts mass on an edge absent from K at " + at(i, j), gamma(i, j));
      }
    }
  }
  return spec;
}

StochasticKernel make_nonreversible(const StochasticKernel& k, const StationaryDist& pi,
                                    const VorticitySpec& spec) {
  return family_alpha(k, pi, spec, 1.0);
}

StochasticKernel family_alpha(const StochasticKernel& k, const StationaryDist& pi,
                              const VorticitySpec& spec, double alpha) {
  if (!(std::abs(alpha) <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [-1, 1]", alpha);
  }
  try {
    validate_vorticity(k, pi, spec.gamma, k.tol());
  } catch (const Error& e) {
    throw Error(ErrorCode::SpecInvalid, std::string("vorticity spec rejected: ") + e.what());
  }
  return checked_result(k.matrix() + alpha * spec.gamma, k, pi);
}

DriftSpec validate_drift(const StochasticKernel& k, const StationaryDist& pi,
                         const Matrix& lambda, double tol) {
  require_reversible_base(k, pi, lambda);
  const Eigen::Index n = lambda.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rs = lambda.row(i).sum();
    const double cs = lambda.col(i).sum();
    if (std::abs(rs) > tol || std::abs(cs) > tol) {
      throw Error(ErrorCode::RowColSumNonzero,
                  "row/column " + std::to_string(i) + " of Lambda does not sum to 0",
                  std::abs(rs) > tol ? rs : cs);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && lambda(i, j) < -tol) {
        throw Error(ErrorCode::NegativeOffDiagonal, "Lambda negative at " + at(i, j),
                    lambda(i, j));
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi[i] * k(i, i) + lambda(i, i) < -tol) {
      throw Error(ErrorCode::DiagonalTooNegativeOnK,
                  "pi_i K_ii < -Lambda_ii at state " + std::to_string(i), lambda(i, i));
    }
  }
  return DriftSpec{lambda};
}

StochasticKernel apply_drift(const StochasticKernel& k, const StationaryDist& pi,
                             const DriftSpec& spec) {
  try {
    validate_drift(k, pi, spec.lambda, k.tol());
  } catch (const Error& e) {
    throw Error(ErrorCode::SpecInvalid, std::string("drift spec rejected: ") + e.what());
  }
  StochasticKernel out = checked_result(
      k.matrix() + pi.weights().cwiseInverse().asDiagonal() * spec.lambda, k, pi);
  if (!peskun_order(k, out, pi, k.tol()).holds) {
    throw Error(ErrorCode::SpecInvalid, "drift result does not dominate K off the diagonal");
  }
  return out;
}

DriftSpec peskun_residual(const StochasticKernel& p, const StochasticKernel& q,
                          const StationaryDist& pi, double tol) {
  const OrderReport order = peskun_order(p, q, pi, tol);
  if (!order.holds) {
    throw Error(ErrorCode::NotPeskunOrdered, "P is not below Q in Peskun order",
                order.margin);
  }
  const Matrix lambda = pi.weights().asDiagonal() * (q.matrix() - p.matrix());
  const Eigen::Index n = lambda.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda(i, i) > tol || std::abs(lambda.row(i).sum()) > tol ||
        std::abs(lambda.col(i).sum()) > tol) {
      throw Error(ErrorCode::NumericalFailure, "Peskun residual lost zero sums");
    }
  }
  return DriftSpec{lambda};
}

}  // namespace mavar
