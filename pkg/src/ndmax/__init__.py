"""Maximal operators, Lorentz norms and oscillation diagnostics on finite
weighted metric spaces."""

from .space import Ball, BuildError, PointClass, Space, combine, space_from_json, space_to_json
from .lorentz import StepProfile, distribution, lorentz_norm, lorentz_norm_from_distribution
from .maximal import ClassFunction, OperatorSpec, fiber_average, fiber_sum, maximal
from .constants import NormEstimate, TrendReport, family_trend, ratio, search_constant

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BuildError",
    "PointClass",
    "Space",
    "combine",
    "space_from_json",
    "space_to_json",
    "StepProfile",
    "distribution",
    "lorentz_norm",
    "lorentz_norm_from_distribution",
    "ClassFunction",
    "OperatorSpec",
    "fiber_average",
    "fiber_sum",
    "maximal",
    "NormEstimate",
    "TrendReport",
    "family_trend",
    "ratio",
    "search_constant",
    "__version__",
]
