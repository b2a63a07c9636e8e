"""asd-boundary public API."""

from __future__ import annotations

from .algebra import Quaternion, rho, signed_svd
from .continuation import continuation_count
from .experiments import ExperimentSpec, run, run_suite
from .fields import BackgroundModel, CutoffScales, GluedConnectionModel, GluingData, glued_curvature
from .integrate import (
    FiberRegion,
    QuadratureResult,
    ToyConfig,
    integrate_Ip_mc,
    integrate_Ip_reduced,
    mu_loc_fiber_integrand,
    toy_wedge_integral,
    truncated_fiber_integral,
)
from .intersect import ProblemConfig, count_model_intersections
from .reducible import decompose_rank1

__version__ = "0.1.0"

__all__ = [
    "BackgroundModel",
    "CutoffScales",
    "ExperimentSpec",
    "FiberRegion",
    "GluedConnectionModel",
    "GluingData",
    "ProblemConfig",
    "QuadratureResult",
    "Quaternion",
    "ToyConfig",
    "continuation_count",
    "count_model_intersections",
    "decompose_rank1",
    "glued_curvature",
    "integrate_Ip_mc",
    "integrate_Ip_reduced",
    "mu_loc_fiber_integrand",
    "rho",
    "run",
    "run_suite",
    "signed_svd",
    "toy_wedge_integral",
    "truncated_fiber_integral",
]
