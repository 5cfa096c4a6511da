#pragma once

// Variance-reducing perturbations of a reversible kernel K with stationary
// law pi:
//   vorticity  P = K + Gamma, pi_i Gamma_ij antisymmetric, rows summing to 0,
//              |pi_i Gamma_ij| <= pi_i K_ij
//   drift      P' = K + D_pi^{-1} Lambda, Lambda with zero row and column
//              sums, nonnegative off the diagonal, pi_i K_ii + Lambda_ii >= 0

#include "mavar/kernel.hpp"

namespace mavar {

struct VorticitySpec {
  Matrix gamma;  // signed transition mass
  Matrix h;      // Gamma_ij / K_ij on the support of K, 0 elsewhere
};

struct DriftSpec {
  Matrix lambda;
};

VorticitySpec validate_vorticity(const StochasticKernel& k, const StationaryDist& pi,
                                 const Matrix& gamma, double tol = kStochasticTol);

/// K + Gamma, checked to be stochastic with stationary law pi.
StochasticKernel make_nonreversible(const StochasticKernel& k, const StationaryDist& pi,
                                    const VorticitySpec& spec);

/// K + alpha Gamma for alpha in [-1, 1].
StochasticKernel family_alpha(const StochasticKernel& k, const StationaryDist& pi,
                              const VorticitySpec& spec, double alpha);

DriftSpec validate_drift(const StochasticKernel& k, const StationaryDist& pi,
                         const Matrix& lambda, double tol = kStochasticTol);

/// K + D_pi^{-1} Lambda; verifies stationarity and K <= P' in Peskun order.
StochasticKernel apply_drift(const StochasticKernel& k, const StationaryDist& pi,
                             const DriftSpec& spec);

/// Lambda = D_pi (Q - P) for a Peskun-ordered pair P <= Q.
DriftSpec peskun_residual(const StochasticKernel& p, const StochasticKernel& q,
                          const StationaryDist& pi, double tol = kStochasticTol);

}  // namespace mavar
