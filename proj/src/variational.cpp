#include "mavar/variational.hpp"

#include <cmath>
#include <sstream>

#include "mavar/linalg.hpp"

namespace mavar {

namespace {

constexpr double kRouteTol = 1e-9;
constexpr double kFeasibleTol = 1e-9;

/// sigma^2 from the dual pair, rejecting f with sigma^2 <= tol.
PoissonSolution nonzero_pair(const StochasticKernel& p, const StationaryDist& pi,
                             const Observable& f) {
  PoissonSolution pair = solve_dual_pair(p, pi, f);
  if (!(pair.sigma2 > kIdentityTol)) {
    throw Error(ErrorCode::ZeroVariance, "sigma^2(P, f) vanishes; f must be nonzero",
                pair.sigma2);
  }
  return pair;
}

}  // namespace

double bilinear_d(const StochasticKernel& p, const StationaryDist& pi,
                  const Vector& xi, const Vector& eta) {
  if (static_cast<std::size_t>(xi.size()) != p.size() ||
      static_cast<std::size_t>(eta.size()) != p.size()) {
    throw Error(ErrorCode::DimensionMismatch, "bilinear_d: size mismatch");
  }
  const Vector gen = xi - p.matrix() * xi;
  return pi_inner(gen, eta, pi);
}

double bilinear_d(const StochasticKernel& p, const StationaryDist& pi,
                  const Observable& xi, const Observable& eta) {
  return bilinear_d(p, pi, xi.values(), eta.values());
}

SaddlePoint saddle_point(const StochasticKernel& p, const StationaryDist& pi,
                         const Observable& f) {
  const PoissonSolution pair = nonzero_pair(p, pi, f);
  const double c = 0.5 / pair.sigma2;
  Observable xi(c * (pair.phi.values() + pair.phi_star.values()), pi);
  Observable eta(c * (pair.phi.values() - pair.phi_star.values()), pi);
  return SaddlePoint{std::move(xi), std::move(eta), 1.0 / pair.sigma2};
}

InnerSup inner_sup(const StochasticKernel& p, const StationaryDist& pi,
                   const Observable& f, const Observable& xi) {
  require_centered(f, pi);
  require_stationary(p, pi);
  const double level = pi_inner(f, xi, pi);
  if (std::abs(level - 1.0) > kFeasibleTol) {
    std::ostringstream os;
    os << "pi(f xi) = " << level << ", expected 1";
    throw Error(ErrorCode::InfeasibleXi, os.str(), level);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  // D(a, b) = b^T A a with A = D_pi (I - P).
  const Matrix a = pi.weights().asDiagonal() * (Matrix::Identity(n, n) - p.matrix());
  const Matrix s = 0.5 * (a + a.transpose());  // D_pi (I - K)
  const Vector w = pi.weights().cwiseProduct(f.values());

  // grad G = (A^T - A) xi - 2 S eta; constraints w^T eta = 0, pi^T eta = 0.
  Matrix kkt = Matrix::Zero(n + 2, n + 2);
  kkt.topLeftCorner(n, n) = 2.0 * s;
  kkt.block(0, n, n, 1) = w;
  kkt.block(0, n + 1, n, 1) = pi.weights();
  kkt.block(n, 0, 1, n) = w.transpose();
  kkt.block(n + 1, 0, 1, n) = pi.weights().transpose();
  Vector rhs = Vector::Zero(n + 2);
  rhs.head(n) = (a.transpose() - a) * xi.values();

  Eigen::PartialPivLU<Matrix> lu(kkt);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorCode::SingularK, "I - K is not positive definite on M_{f,0}",
                lu.rcond());
  }
  const Vector sol = lu.solve(rhs);
  Observable eta(sol.head(n), pi);
  const Vector plus = xi.values() + eta.values();
  const Vector minus = xi.values() - eta.values();
  const double value = bilinear_d(p, pi, plus, minus);
  return InnerSup{std::move(eta), value};
}

ReversibleInf reversible_inf(const StochasticKernel& p, const StationaryDist& pi,
                             const Observable& f) {
  require_centered(f, pi);
  const SpectralDecomposition sd = spectral_decomposition_reversible(p, pi);
  const double coupling_tol = 1e-10 * std::max(1.0, f.values().cwiseAbs().maxCoeff());
  Vector phi = Vector::Zero(f.values().size());
  double total = 0.0;
  for (Eigen::Index k = 0; k < sd.eigenvalues.size(); ++k) {
    const Vector v = sd.eigenvectors.col(k);
    const double c = pi_inner(v, f.values(), pi);
    if (sd.eigenvalues(k) >= kRadiusGate) {
      if (std::abs(c) > coupling_tol) {
        return ReversibleInf{std::nullopt, 0.0, Variance::infinite()};
      }
      continue;
    }
    phi += (c / (1.0 - sd.eigenvalues(k))) * v;
    total += c * c / (1.0 - sd.eigenvalues(k));
  }
  if (!(total > kIdentityTol)) {
    throw Error(ErrorCode::ZeroVariance, "sigma^2(P, f) vanishes; f must be nonzero",
                total);
  }
  return ReversibleInf{Observable(phi / total, pi), 1.0 / total, Variance::finite(total)};
}

TInf t_inf(const StochasticKernel& p, const StationaryDist& pi, const Observable& f) {
  const SaddlePoint sp = saddle_point(p, pi, f);
  const Matrix t = operator_t(p, pi);
  const MeanZeroSolver solver(t, pi, ErrorCode::DegenerateKernel);
  const Vector phi_bar = solver.solve(f.values());
  const double level = pi_inner(phi_bar, f.values(), pi);
  if (!(level > kIdentityTol)) {
    throw Error(ErrorCode::ZeroVariance, "pi(phi_bar f) vanishes", level);
  }
  const Vector minimizer = phi_bar / level;
  const Vector t_min = t * minimizer;
  const double value = pi_inner(minimizer, t_min, pi);
  if (std::abs(value - sp.value) > kRouteTol * std::max(1.0, std::abs(sp.value))) {
    std::ostringstream os;
    os << "inf <xi, T xi> = " << value << " but saddle value = " << sp.value;
    throw Error(ErrorCode::RouteDisagreement, os.str(), value - sp.value);
  }
  return TInf{Observable(minimizer, pi), value};
}

Observable random_in_constraint_set(const Observable& base, const Observable& f,
                                    const StationaryDist& pi, std::mt19937_64& rng,
                                    double scale) {
  const double ff = pi_inner(f, f, pi);
  if (!(ff > 0.0)) throw Error(ErrorCode::ZeroVariance, "f vanishes");
  std::normal_distribution<double> normal(0.0, scale);
  Vector g(base.values().size());
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  g.array() -= pi.weights().dot(g);
  g -= (pi_inner(f.values(), g, pi) / ff) * f.values();
  return Observable(base.values() + g, pi);
}

}  // namespace mavar
