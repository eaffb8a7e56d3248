"""Once-boosted ridge estimators for linear functionals (C++ core)."""

from ._core import (
    BoostModel,
    Error,
    FeatureMap,
    Functional,
    Kernel,
    average_derivative,
    check_equivalence,
    cli,
    contraction_factor,
    counterfactual_mean,
    draw_dataset,
    estimate,
    fit_boost,
    fit_ridge_dual,
    fit_ridge_primal,
    fit_riesz_primal,
    gram,
    missing_mean,
    profile,
    run_equivalence_suite,
    sample_mae,
    true_average_derivative,
)

__all__ = [
    "BoostModel",
    "Error",
    "FeatureMap",
    "Functional",
    "Kernel",
    "average_derivative",
    "check_equivalence",
    "cli",
    "contraction_factor",
    "counterfactual_mean",
    "draw_dataset",
    "estimate",
    "fit_boost",
    "fit_ridge_dual",
    "fit_ridge_primal",
    "fit_riesz_primal",
    "gram",
    "missing_mean",
    "profile",
    "run_equivalence_suite",
    "sample_mae",
    "true_average_derivative",
]
