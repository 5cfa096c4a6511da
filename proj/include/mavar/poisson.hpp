#pragma once

// Poisson equations (I - P) phi = f, (I - P*) phi* = f and the asymptotic
// variance sigma~^2(P, f) = 2 <phi, f> - <f, f>, computed along several
// independent routes.

#include <compare>
#include <utility>
#include <vector>

#include "mavar/kernel.hpp"

namespace mavar {

/// sigma^2 that may be infinite. Infinite compares above every finite value.
class Variance {
 public:
  static Variance finite(double v);
  static Variance infinite() { return Variance(); }

  bool is_finite() const { return finite_; }
  /// Throws InvalidArgument when infinite.
  double value() const;

  friend std::weak_ordering operator<=>(const Variance& a, const Variance& b);
  friend bool operator==(const Variance& a, const Variance& b) {
    return (a <=> b) == std::weak_ordering::equivalent;
  }

 private:
  Variance() = default;
  bool finite_ = false;
  double value_ = 0.0;
};

struct PoissonSolution {
  Observable phi;       // (I - P) phi = f, pi(phi) = 0
  Observable phi_star;  // (I - P*) phi* = f, pi(phi*) = 0
  double sigma2;        // <phi, f>
  double avar;          // 2 sigma2 - <f, f>
};

struct ResolventCurve {
  std::vector<double> betas;       // strictly decreasing, positive
  std::vector<double> values;      // <f, phi_beta>
  std::vector<double> beta_norms;  // beta * ||phi_beta||^2
  bool reversible = true;          // monotonicity only guaranteed if true
  bool monotone = true;            // values non-decreasing as beta decreases
};

/// Threshold below which r(P) counts as < 1.
inline constexpr double kRadiusGate = 1.0 - 1e-12;

/// Throws DegenerateKernel (payload: r(P)) unless r(P) < 1 - 1e-12 or P is
/// reversible. Returns r(P).
double require_poisson_solvable(const StochasticKernel& p, const StationaryDist& pi);

/// Throws NotCentered unless |pi(f)| <= 1e-9 max(1, |f|_inf).
void require_centered(const Observable& f, const StationaryDist& pi);

Observable solve_poisson(const StochasticKernel& p, const StationaryDist& pi,
                         const Observable& f);

PoissonSolution solve_dual_pair(const StochasticKernel& p, const StationaryDist& pi,
                                const Observable& f);

/// sigma^2(P, f) = <phi, f>.
double sigma2(const StochasticKernel& p, const StationaryDist& pi, const Observable& f);

/// sigma~^2(P, f) = 2 sigma^2 - <f, f>.
double asymptotic_variance(const StochasticKernel& p, const StationaryDist& pi,
                           const Observable& f);

/// T = (I - P)(I - K)^{-1}(I - P)* as a full n x n matrix acting on the
/// mean-zero subspace (T 1 = 0, pi^T T = 0). Throws SingularK when I - K is
/// not invertible there.
Matrix operator_t(const StochasticKernel& p, const StationaryDist& pi);

/// Solves T phi_bar = f and returns <phi_bar, f>; cross-checks against the
/// dual-pair route (RouteDisagreement on mismatch above 1e-9).
double avar_via_t(const StochasticKernel& p, const StationaryDist& pi,
                  const Observable& f);

/// sum_k (1 - lambda_k)^{-1} <v_k, f>_pi^2 over the non-unit spectrum of a
/// reversible P; Infinite if a unit eigenvalue couples to f.
Variance avar_spectral(const StochasticKernel& p, const StationaryDist& pi,
                       const Observable& f);

ResolventCurve resolvent_curve(const StochasticKernel& p, const StationaryDist& pi,
                               const Observable& f, const std::vector<double>& betas);

/// (sigma~^2(P, f), sigma~^2(P*, f)); throws RouteDisagreement if they differ
/// by more than 1e-10 (relative to max(1, |value|)).
std::pair<double, double> check_dual_equality(const StochasticKernel& p,
                                              const StationaryDist& pi,
                                              const Observable& f);

/// Symmetric S with g^T S g = sigma^2(P, C g) for every g, C the centering
/// projector; built from n Poisson solves.
Matrix variance_form(const StochasticKernel& p, const StationaryDist& pi);

}  // namespace mavar
