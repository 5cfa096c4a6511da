#pragma once

// Variational characterizations of 1/sigma^2(P, f):
//
//   1/sigma^2 = inf_{xi in M_{f,1}} sup_{eta in M_{f,0}} D(xi + eta, xi - eta)
//             = inf_{pi(f xi) = 1} <xi, T xi>
//             = inf_{xi in M_{f,1}} D(xi, xi)          (P reversible)
//
// with D(xi, eta) = <(I - P) xi, eta>_pi and M_{f,d} = {xi : pi(f xi) = d}.

#include <optional>
#include <random>

#include "mavar/kernel.hpp"
#include "mavar/poisson.hpp"

namespace mavar {

struct SaddlePoint {
  Observable xi_star;   // (phi + phi*) / (2 <phi, f>), in M_{f,1}
  Observable eta_star;  // (phi - phi*) / (2 <phi, f>), in M_{f,0}
  double value;         // 1 / sigma^2
};

struct InnerSup {
  Observable eta;  // maximizer over M_{f,0}, normalized to pi(eta) = 0
  double value;    // D(xi + eta, xi - eta)
};

struct ReversibleInf {
  std::optional<Observable> minimizer;  // phi / <phi, f>; empty when sigma^2 = inf
  double value;                         // 1 / sigma^2, 0 when sigma^2 = inf
  Variance sigma2;
};

struct TInf {
  Observable minimizer;  // phi_bar / pi(phi_bar f)
  double value;
};

/// D(xi, eta) = <(I - P) xi, eta>_pi.
double bilinear_d(const StochasticKernel& p, const StationaryDist& pi,
                  const Observable& xi, const Observable& eta);
double bilinear_d(const StochasticKernel& p, const StationaryDist& pi,
                  const Vector& xi, const Vector& eta);

SaddlePoint saddle_point(const StochasticKernel& p, const StationaryDist& pi,
                         const Observable& f);

/// Maximizes the concave quadratic eta -> D(xi + eta, xi - eta) over
/// pi(f eta) = 0 with a single KKT solve.
InnerSup inner_sup(const StochasticKernel& p, const StationaryDist& pi,
                   const Observable& f, const Observable& xi);

ReversibleInf reversible_inf(const StochasticKernel& p, const StationaryDist& pi,
                             const Observable& f);

/// Minimizer of <xi, T xi> over pi(f xi) = 1; cross-checked against the
/// saddle-point value (RouteDisagreement beyond 1e-9).
TInf t_inf(const StochasticKernel& p, const StationaryDist& pi, const Observable& f);

/// base + (g - pi(f g)/pi(f f) f) for a pi-centered Gaussian g of the given
/// scale. Keeps pi(f .) unchanged, so it samples M_{f,1} around xi* or
/// M_{f,0} around 0.
Observable random_in_constraint_set(const Observable& base, const Observable& f,
                                    const StationaryDist& pi, std::mt19937_64& rng,
                                    double scale = 1.0);

}  // namespace mavar
