"""Statistical estimation under sublinear expectation.

Thin Python surface over the C++ core: exact sublinear expectations of
functions of maximal-distribution samples, unbiasedness and dominance
checks for estimators of the upper/lower mean, grouped envelope
estimators, and a seeded Monte Carlo harness for the law of large numbers
under mean uncertainty.
"""

from ._core import (
    Box,
    TestFunction,
    ValuePolicy,
    GroupedEstimate,
    MaximalDistribution,
    OptResult,
    __version__,
    block_envelope,
    box_maximize,
    check_dominance,
    check_unbiased,
    compile_function,
    default_parameter_grid,
    dist_op,
    duality_check,
    envelope_estimator,
    estimate_interval,
    group_mean,
    lln_convergence,
    lower_expectation_mc,
    max_estimator,
    min_estimator,
    nested_maximize,
    pushforward_params,
    sample_path,
    sublinear_eval_maximal,
    trn,
    trn_inverse,
    uniform_integrability_diagnostic,
    upper_expectation_mc,
)

__all__ = [
    "Box",
    "TestFunction",
    "ValuePolicy",
    "GroupedEstimate",
    "MaximalDistribution",
    "OptResult",
    "__version__",
    "block_envelope",
    "box_maximize",
    "check_dominance",
    "check_unbiased",
    "compile_function",
    "default_parameter_grid",
    "dist_op",
    "duality_check",
    "envelope_estimator",
    "estimate_interval",
    "group_mean",
    "lln_convergence",
    "lower_expectation_mc",
    "max_estimator",
    "min_estimator",
    "nested_maximize",
    "pushforward_params",
    "sample_path",
    "sublinear_eval_maximal",
    "trn",
    "trn_inverse",
    "uniform_integrability_diagnostic",
    "upper_expectation_mc",
]
