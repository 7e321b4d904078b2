"""Kernel two-sample testing with semi-supervised covariate adjustment."""

from ._k2st import (
    DegenerateVariance,
    SemiSupervisedSample,
    TestOutcome,
    analytic_power_linear,
    generate_scenario,
    median_heuristic,
    mmd2,
    mmd_perm_test,
    xmmd_test,
    xssmmd_test,
)

__all__ = [
    "DegenerateVariance",
    "SemiSupervisedSample",
    "TestOutcome",
    "analytic_power_linear",
    "generate_scenario",
    "median_heuristic",
    "mmd2",
    "mmd_perm_test",
    "xmmd_test",
    "xssmmd_test",
]
