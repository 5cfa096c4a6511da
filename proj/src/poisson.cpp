#include "mavar/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mavar/linalg.hpp"

namespace mavar {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kRouteTol = 1e-9;

double scale_of(const Vector& f) { return std::max(1.0, f.cwiseAbs().maxCoeff()); }

Matrix identity_minus(const StochasticKernel& p) {
  const Eigen::Index n = p.matrix().rows();
  return Matrix::Identity(n, n) - p.matrix();
}

Vector checked_solve(const MeanZeroSolver& solver, const Matrix& op, const Vector& f) {
  Vector phi = solver.solve(f);
  const double resid = (op * phi - f).cwiseAbs().maxCoeff();
  if (resid > kResidualTol * scale_of(f)) {
    std::ostringstream os;
    os << "Poisson residual " << resid << " exceeds tolerance";
    throw Error(ErrorCode::NumericalFailure, os.str(), resid);
  }
  return phi;
}

}  // namespace

Variance Variance::finite(double v) {
  if (std::isnan(v)) throw Error(ErrorCode::InvalidArgument, "variance is NaN");
  Variance out;
  out.finite_ = true;
  out.value_ = v;
  return out;
}

double Variance::value() const {
  if (!finite_) throw Error(ErrorCode::InvalidArgument, "variance is infinite");
  return value_;
}

std::weak_ordering operator<=>(const Variance& a, const Variance& b) {
  if (!a.finite_ || !b.finite_) {
    if (a.finite_ == b.finite_) return std::weak_ordering::equivalent;
    return a.finite_ ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  if (a.value_ < b.value_) return std::weak_ordering::less;
  if (a.value_ > b.value_) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

double require_poisson_solvable(const StochasticKernel& p, const StationaryDist& pi) {
  const double r = spectral_radius_l20(p, pi);
  if (r >= kRadiusGate && !is_reversible(p, pi)) {
    std::ostringstream os;
    os << "r(P) = " << r << " on L2_0(pi); Poisson equation not well posed";
    throw Error(ErrorCode::DegenerateKernel, os.str(), r);
  }
  return r;
}

void require_centered(const Observable& f, const StationaryDist& pi) {
  const double m = pi.weights().dot(f.values());
  if (std::abs(m) > kStochasticTol * scale_of(f.values())) {
    std::ostringstream os;
    os << "observable has pi-mean " << m;
    throw Error(ErrorCode::NotCentered, os.str(), m);
  }
}

Observable solve_poisson(const StochasticKernel& p, const StationaryDist& pi,
                         const Observable& f) {
  require_centered(f, pi);
  require_poisson_solvable(p, pi);
  const Matrix op = identity_minus(p);
  const MeanZeroSolver solver(op, pi, ErrorCode::DegenerateKernel);
  return Observable(checked_solve(solver, op, f.values()), pi);
}

PoissonSolution solve_dual_pair(const StochasticKernel& p, const StationaryDist& pi,
                                const Observable& f) {
  Observable phi = solve_poisson(p, pi, f);
  const StochasticKernel star = adjoint(p, pi);
  const Matrix op_star = identity_minus(star);
  const MeanZeroSolver solver(op_star, pi, ErrorCode::DegenerateKernel);
  Observable phi_star(checked_solve(solver, op_star, f.values()), pi);
  const double s2 = pi_inner(phi, f, pi);
  const double ff = pi_inner(f, f, pi);
  return PoissonSolution{std::move(phi), std::move(phi_star), s2, 2.0 * s2 - ff};
}

double sigma2(const StochasticKernel& p, const StationaryDist& pi, const Observable& f) {
  return pi_inner(solve_poisson(p, pi, f), f, pi);
}

double asymptotic_variance(const StochasticKernel& p, const StationaryDist& pi,
                           const Observable& f) {
  return 2.0 * sigma2(p, pi, f) - pi_inner(f, f, pi);
}

Matrix operator_t(const StochasticKernel& p, const StationaryDist& pi) {
  const StochasticKernel star = adjoint(p, pi);
  const StochasticKernel k = reversibilization(p, pi);
  const MeanZeroSolver k_solver(identity_minus(k), pi, ErrorCode::SingularK);
  // (I - P*) maps everything into the mean-zero subspace, column by column.
  const Matrix w = k_solver.solve(identity_minus(star));
  return identity_minus(p) * w;
}

double avar_via_t(const StochasticKernel& p, const StationaryDist& pi,
                  const Observable& f) {
  const PoissonSolution pair = solve_dual_pair(p, pi, f);
  const Matrix t = operator_t(p, pi);
  const MeanZeroSolver solver(t, pi, ErrorCode::DegenerateKernel);
  const Vector phi_bar = checked_solve(solver, t, f.values());
  const double value = pi_inner(phi_bar, f.values(), pi);

  const double scale = std::max(1.0, std::abs(pair.sigma2));
  const Vector expected = 0.5 * (pair.phi.values() + pair.phi_star.values());
  const double phi_gap = (phi_bar - expected).cwiseAbs().maxCoeff();
  if (std::abs(value - pair.sigma2) > kRouteTol * scale ||
      phi_gap > kRouteTol * std::max(1.0, expected.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "T route gives " << value << ", dual pair gives " << pair.sigma2
       << " (phi_bar deviation " << phi_gap << ")";
    throw Error(ErrorCode::RouteDisagreement, os.str(), value - pair.sigma2);
  }
  return value;
}

Variance avar_spectral(const StochasticKernel& p, const StationaryDist& pi,
                       const Observable& f) {
  require_centered(f, pi);
  const SpectralDecomposition sd = spectral_decomposition_reversible(p, pi);
  const double coupling_tol = 1e-10 * scale_of(f.values());
  double total = 0.0;
  for (Eigen::Index k = 0; k < sd.eigenvalues.size(); ++k) {
    const double c = pi_inner(Vector(sd.eigenvectors.col(k)), f.values(), pi);
    if (sd.eigenvalues(k) >= kRadiusGate) {
      if (std::abs(c) > coupling_tol) return Variance::infinite();
      continue;
    }
    total += c * c / (1.0 - sd.eigenvalues(k));
  }
  return Variance::finite(total);
}

ResolventCurve resolvent_curve(const StochasticKernel& p, const StationaryDist& pi,
                               const Observable& f, const std::vector<double>& betas) {
  require_centered(f, pi);
  require_stationary(p, pi);
  if (betas.empty()) throw Error(ErrorCode::InvalidArgument, "no beta values");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0) || (i > 0 && !(betas[i] < betas[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument,
                  "betas must be positive and strictly decreasing");
    }
  }
  ResolventCurve curve;
  curve.reversible = is_reversible(p, pi);
  const Eigen::Index n = p.matrix().rows();
  for (double beta : betas) {
    const Matrix op = (beta + 1.0) * Matrix::Identity(n, n) - p.matrix();
    const Vector phi = op.partialPivLu().solve(f.values());
    curve.betas.push_back(beta);
    curve.values.push_back(pi_inner(phi, f.values(), pi));
    curve.beta_norms.push_back(beta * pi_inner(phi, phi, pi));
  }
  for (std::size_t i = 1; i < curve.values.size(); ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(curve.values[i]));
    if (curve.values[i] < curve.values[i - 1] - slack) curve.monotone = false;
  }
  return curve;
}

std::pair<double, double> check_dual_equality(const StochasticKernel& p,
                                              const StationaryDist& pi,
                                              const Observable& f) {
  const double a = asymptotic_variance(p, pi, f);
  const double b = asymptotic_variance(adjoint(p, pi), pi, f);
  if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a))) {
    std::ostringstream os;
    os << "sigma~^2(P) = " << a << " but sigma~^2(P*) = " << b;
    throw Error(ErrorCode::RouteDisagreement, os.str(), a - b);
  }
  return {a, b};
}

Matrix variance_form(const StochasticKernel& p, const StationaryDist& pi) {
  require_poisson_solvable(p, pi);
  const Matrix op = identity_minus(p);
  const MeanZeroSolver solver(op, pi, ErrorCode::DegenerateKernel);
  const Matrix c = centering_projector(pi);
  const Matrix phi = solver.solve(c);
  const Matrix s = c.transpose() * pi.weights().asDiagonal() * phi;
  return 0.5 * (s + s.transpose());
}

}  // namespace mavar
