"""Asymptotic variance, orderings and perturbations of finite Markov chains.

Kernels are row-stochastic ``numpy`` arrays and observables are 1-D arrays.
The stationary law is computed internally unless passed as ``pi``.
"""

from ._core import (
    MavarError,
    adjoint,
    apply_drift,
    asymptotic_variance,
    dirichlet_order,
    estimate_avar,
    fixture_kernels,
    fk_order,
    is_irreducible,
    is_reversible,
    make_nonreversible,
    operator_t,
    peskun_order,
    reproduce_examples,
    reversibilization,
    saddle_point,
    sigma2,
    simulate,
    solve_dual_pair,
    stationary_distribution,
    uniform_variance_domination,
)

__all__ = [
    "MavarError",
    "adjoint",
    "apply_drift",
    "asymptotic_variance",
    "dirichlet_order",
    "estimate_avar",
    "fixture_kernels",
    "fk_order",
    "is_irreducible",
    "is_reversible",
    "make_nonreversible",
    "operator_t",
    "peskun_order",
    "reproduce_examples",
    "reversibilization",
    "saddle_point",
    "sigma2",
    "simulate",
    "solve_dual_pair",
    "stationary_distribution",
    "uniform_variance_domination",
]
