"""Marked exponential Hawkes processes: simulation, fitting and testing.

Thin Python layer over the C++ core. The heavy lifting (thinning
simulation, closed-form compensators, maximum likelihood, the test
procedures) lives in ``hawkes_lab._core``.
"""

from hawkes_lab._core import (
    FitResult,
    HawkesError,
    HawkesParams,
    MarkedEvent,
    ModelSpec,
    Realization,
    chi2_sf,
    compensator,
    fit,
    gof_subsample_test,
    intensity,
    ks_test_exp1,
    ks_test_uniform,
    log_likelihood,
    log_likelihood_gradient,
    normal_cdf,
    normal_quantile,
    residual_diagnostics,
    simulate,
    simulate_poisson,
    simulate_repetitions,
    stationarity,
    test_coefficient,
    time_change,
)

__all__ = [
    "FitResult",
    "HawkesError",
    "HawkesParams",
    "MarkedEvent",
    "ModelSpec",
    "Realization",
    "chi2_sf",
    "compensator",
    "fit",
    "gof_subsample_test",
    "intensity",
    "ks_test_exp1",
    "ks_test_uniform",
    "log_likelihood",
    "log_likelihood_gradient",
    "normal_cdf",
    "normal_quantile",
    "residual_diagnostics",
    "simulate",
    "simulate_poisson",
    "simulate_repetitions",
    "stationarity",
    "test_coefficient",
    "time_change",
]

__version__ = "0.1.0"
