#include "mavar/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mavar/linalg.hpp"
#include "mavar/poisson.hpp"

namespace mavar {

namespace {

std::pair<double, Vector> min_eigenpair(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eigen solver did not converge");
  }
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

OrderReport make_report(Relation r, double margin, Witness w, double tol) {
  const bool holds = margin >= -tol;
  return OrderReport{r, holds, holds ? std::nullopt : std::optional<Witness>(std::move(w)),
                     margin};
}

Vector sorted_descending(Vector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

void require_probability(const Vector& v, double tol) {
  if ((v.array() < -tol).any() || std::abs(v.sum() - 1.0) > tol) {
    throw Error(ErrorCode::NotProbabilityVector, "vector is not a probability vector");
  }
}

bool non_increasing(const Vector& v, double tol) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(i - 1) + tol) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Peskun: return "peskun";
    case Relation::Dirichlet: return "dirichlet";
    case Relation::FillKahn: return "fill_kahn";
  }
  return "unknown";
}

void require_shared_stationary(const StochasticKernel& p1, const StochasticKernel& p2,
                               const StationaryDist& pi) {
  if (p1.size() != p2.size() || p1.size() != pi.size()) {
    throw Error(ErrorCode::DimensionMismatch, "kernels have different state counts");
  }
  const double r1 = stationarity_residual(p1, pi);
  const double r2 = stationarity_residual(p2, pi);
  const double tol = std::max({p1.tol(), p2.tol(), kIdentityTol});
  if (r1 > tol || r2 > tol) {
    std::ostringstream os;
    os << "kernels do not share pi (residuals " << r1 << ", " << r2 << ")";
    throw Error(ErrorCode::StationaryMismatch, os.str(), std::max(r1, r2));
  }
}

OrderReport peskun_order(const StochasticKernel& p1, const StochasticKernel& p2,
                         const StationaryDist& pi, double tol) {
  require_shared_stationary(p1, p2, pi);
  const Eigen::Index n = static_cast<Eigen::Index>(p1.size());
  double margin = std::numeric_limits<double>::infinity();
  IndexPair worst{0, 1};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double slack = p2(i, j) - p1(i, j);
      if (slack < margin) {
        margin = slack;
        worst = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  }
  return make_report(Relation::Peskun, margin, worst, tol);
}

OrderReport dirichlet_order(const StochasticKernel& p1, const StochasticKernel& p2,
                            const StationaryDist& pi, double tol) {
  require_shared_stationary(p1, p2, pi);
  // <xi,(I-P2)xi> - <xi,(I-P1)xi> = xi^T D_pi (P1 - P2) xi
  const Matrix diff = pi.weights().asDiagonal() * (p1.matrix() - p2.matrix());
  auto [lambda, vec] = min_eigenpair(diff);
  return make_report(Relation::Dirichlet, lambda, Vector(vec), tol);
}

OrderReport fk_order(const StochasticKernel& p, const StochasticKernel& q,
                     const StationaryDist& pi, double tol) {
  require_shared_stationary(p, q, pi);
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  const Matrix diff = pi.weights().asDiagonal() * (q.matrix() - p.matrix());
  // Running 2-D prefix sums of pi_i (Q - P)_ij.
  Matrix prefix = Matrix::Zero(n + 1, n + 1);
  double margin = std::numeric_limits<double>::infinity();
  IndexPair worst{1, 1};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      prefix(i + 1, j + 1) = diff(i, j) + prefix(i, j + 1) + prefix(i + 1, j) - prefix(i, j);
      if (prefix(i + 1, j + 1) < margin) {
        margin = prefix(i + 1, j + 1);
        worst = {static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j + 1)};
      }
    }
  }
  return make_report(Relation::FillKahn, margin, worst, tol);
}

double dirichlet_edge_sum(const StochasticKernel& p, const StationaryDist& pi,
                          const Vector& xi) {
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = xi(i) - xi(j);
      total += pi[i] * p(i, j) * d * d;
    }
  }
  return 0.5 * total;
}

bool stochastically_monotone(const StochasticKernel& p, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  Matrix partial = p.matrix();
  for (Eigen::Index j = 1; j < n; ++j) partial.col(j) += partial.col(j - 1);
  for (Eigen::Index m = 0; m < n; ++m) {
    if (!non_increasing(partial.col(m), tol)) return false;
  }
  return true;
}

double majorization_margin(const Vector& v, const Vector& w, double tol) {
  if (v.size() != w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "majorization: sizes differ");
  }
  require_probability(v, tol);
  require_probability(w, tol);
  const Vector sv = sorted_descending(v);
  const Vector sw = sorted_descending(w);
  double acc_v = 0.0;
  double acc_w = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    acc_v += sv(k);
    acc_w += sw(k);
    margin = std::min(margin, acc_v - acc_w);
  }
  return margin;
}

bool majorizes(const Vector& v, const Vector& w, double tol) {
  return majorization_margin(v, w, tol) >= -tol;
}

MajorizationReport majorization_trajectory(const StochasticKernel& k,
                                           const StochasticKernel& p_prime,
                                           const Vector& initial, std::size_t n_steps,
                                           double tol) {
  if (static_cast<std::size_t>(initial.size()) != k.size() || k.size() != p_prime.size()) {
    throw Error(ErrorCode::DimensionMismatch, "majorization_trajectory: sizes differ");
  }
  require_probability(initial, kStochasticTol);
  MajorizationReport report;
  auto& notes = report.precondition_violations;
  if (!stochastically_monotone(k, tol)) notes.push_back("K is not stochastically monotone");
  if (!stochastically_monotone(p_prime, tol)) {
    notes.push_back("P' is not stochastically monotone");
  }
  try {
    const StationaryDist pi = stationary_distribution(k);
    if (stationarity_residual(p_prime, pi) > kStochasticTol) {
      notes.push_back("K and P' do not share a stationary distribution");
    }
    if (!non_increasing(pi.weights(), tol)) notes.push_back("pi is not non-increasing");
    const Vector ratio = initial.cwiseQuotient(pi.weights());
    if (!non_increasing(ratio, tol)) {
      notes.push_back("initial/pi is not non-increasing");
    }
  } catch (const Error& e) {
    notes.push_back(std::string("stationary distribution unavailable: ") + e.what());
  }

  Vector x = initial;
  Vector y = initial;
  for (std::size_t t = 0; t <= n_steps; ++t) {
    const double m = majorization_margin(x, y, kStochasticTol);
    report.steps.push_back(MajorizationStep{m >= -tol, m});
    x = (x.transpose() * k.matrix()).transpose();
    y = (y.transpose() * p_prime.matrix()).transpose();
  }
  return report;
}

DominationReport uniform_variance_domination(const StochasticKernel& p1,
                                             const StochasticKernel& p2,
                                             const StationaryDist& pi, double tol) {
  require_shared_stationary(p1, p2, pi);
  const Matrix s1 = variance_form(p1, pi);
  const Matrix s2 = variance_form(p2, pi);
  auto [lambda, vec] = min_eigenpair(s1 - s2);
  const double scale = std::max({1.0, s1.cwiseAbs().maxCoeff(), s2.cwiseAbs().maxCoeff()});
  if (lambda >= -tol * scale) return DominationReport{true, std::nullopt, lambda};
  Vector f = centering_projector(pi) * vec;
  f /= f.cwiseAbs().maxCoeff();
  return DominationReport{false, std::move(f), lambda};
}

}  // namespace mavar
