#pragma once

// Partial orders between kernels sharing a stationary law:
//   peskun    P1 <= P2 entrywise off the diagonal
//   dirichlet <xi, (I - P1) xi> <= <xi, (I - P2) xi> for all xi
//   fill_kahn <P xi, eta> <= <Q xi, eta> for nonnegative non-increasing xi, eta
// plus stochastic monotonicity, majorization and uniform variance domination.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mavar/kernel.hpp"

namespace mavar {

inline constexpr double kOrderTol = 1e-10;

enum class Relation { Peskun, Dirichlet, FillKahn };

std::string_view to_string(Relation r);

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Either the entry/partial-sum index where the defining inequality fails
/// most, or a test function on which it fails.
using Witness = std::variant<IndexPair, Vector>;

struct OrderReport {
  Relation relation;
  bool holds;
  std::optional<Witness> witness;  // present iff !holds
  double margin;                   // worst-case slack; holds iff margin >= -tol
};

struct DominationReport {
  bool holds;
  std::optional<Vector> witness;  // centered f with sigma~^2(P2,f) > sigma~^2(P1,f)
  double margin;                  // min eigenvalue of S_{P1} - S_{P2}
};

struct MajorizationStep {
  bool holds;
  double margin;  // min_k (top-k sum of law X_t - top-k sum of law Y_t)
};

struct MajorizationReport {
  std::vector<std::string> precondition_violations;
  std::vector<MajorizationStep> steps;  // t = 0, 1, ..., n_steps
};

/// Throws StationaryMismatch unless pi is stationary for both kernels.
void require_shared_stationary(const StochasticKernel& p1, const StochasticKernel& p2,
                               const StationaryDist& pi);

OrderReport peskun_order(const StochasticKernel& p1, const StochasticKernel& p2,
                         const StationaryDist& pi, double tol = kOrderTol);

/// Decided by the min eigenvalue of sym(D_pi (P1 - P2)).
OrderReport dirichlet_order(const StochasticKernel& p1, const StochasticKernel& p2,
                            const StationaryDist& pi, double tol = kOrderTol);

/// P << Q via double partial sums of pi_i P_ij over leading index blocks.
OrderReport fk_order(const StochasticKernel& p, const StochasticKernel& q,
                     const StationaryDist& pi, double tol = kOrderTol);

/// (1/2) sum_ij pi_i P_ij (xi_i - xi_j)^2, which equals <xi, (I - P) xi>.
double dirichlet_edge_sum(const StochasticKernel& p, const StationaryDist& pi,
                          const Vector& xi);

/// Column partial sums sum_{j<=m} P_ij are non-increasing in i for every m.
bool stochastically_monotone(const StochasticKernel& p, double tol = kOrderTol);

/// min_k (sum of k largest of v - sum of k largest of w).
double majorization_margin(const Vector& v, const Vector& w, double tol = kStochasticTol);
bool majorizes(const Vector& v, const Vector& w, double tol = kStochasticTol);

MajorizationReport majorization_trajectory(const StochasticKernel& k,
                                           const StochasticKernel& p_prime,
                                           const Vector& initial, std::size_t n_steps,
                                           double tol = kOrderTol);

/// Whether sigma~^2(P2, f) <= sigma~^2(P1, f) for every centered f, decided
/// as positive semidefiniteness of S_{P1} - S_{P2} (see variance_form).
DominationReport uniform_variance_domination(const StochasticKernel& p1,
                                             const StochasticKernel& p2,
                                             const StationaryDist& pi,
                                             double tol = kOrderTol);

}  // namespace mavar
