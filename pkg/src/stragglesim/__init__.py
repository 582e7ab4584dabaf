"""Simulation of BACC and LeTCC coded computing under Bernoulli stragglers."""

from .berrut import BerrutInterpolant
from .experiments import (
    RateFit,
    SweepResult,
    SweepSpec,
    compare_prob_vs_fixed,
    fit_rate,
    run_sweep,
    theoretical_curve,
)
from .functions import ComputeFunction, get_function, make_fixed_mlp, make_polynomial, make_xsinx
from .pipeline import SchemeConfig, TrialResult, run_trial
from .points import MappingPoints, MeshStats, chebyshev_first, chebyshev_second, uniform_points
from .spline import SplineModel, fit_smoothing_spline
from .stragglers import (
    StragglerPattern,
    exact_run_cdf,
    exact_run_mean,
    gordon_moments,
    longest_run,
    stream,
)

__version__ = "0.1.0"

__all__ = [
    "BerrutInterpolant",
    "ComputeFunction",
    "MappingPoints",
    "MeshStats",
    "RateFit",
    "SchemeConfig",
    "SplineModel",
    "StragglerPattern",
    "SweepResult",
    "SweepSpec",
    "TrialResult",
    "chebyshev_first",
    "chebyshev_second",
    "compare_prob_vs_fixed",
    "exact_run_cdf",
    "exact_run_mean",
    "fit_rate",
    "fit_smoothing_spline",
    "get_function",
    "gordon_moments",
    "longest_run",
    "make_fixed_mlp",
    "make_polynomial",
    "make_xsinx",
    "run_sweep",
    "run_trial",
    "stream",
    "theoretical_curve",
    "uniform_points",
]
