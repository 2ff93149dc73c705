"""Probes for weighted lattices where maximal growth splits by direction.

The named lattice examples carry weights that are doubling along some rays
and wildly nondoubling along others.  The same probe function then has a
bounded maximal value at one point and an exponentially growing one at a
neighbour, and the growth only becomes visible when the truncation radius R
is swept.  This module wraps that sweep: build the truncated lattice for a
series of R values, evaluate the relevant maximal operator on the example's
probe function, and tabulate the values at chosen points.  A second helper
tabulates exact doubling ratios of concentric balls at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .maximal import ClassFunction, maximal
from .zoo import SpaceRecipe, build, witness
from .space import Space

__all__ = [
    "LatticeSpec",
    "GrowthTable",
    "DoublingTable",
    "lattice_build",
    "probe",
    "ball_average",
    "doubling_ratio",
]

_EXAMPLES = ("C", "D", "A-discrete", "B-discrete", "custom")
_ONE_DIM = ("A-discrete", "B-discrete")

# canonical probe function per example, and whether its operator is centered
_PROBE_FUNCTIONS = {"C": "probe-f", "D": "probe-g"}
_PROBE_CENTERED = {"probe-f": False, "probe-g": True}


def _coerce_int(value, what: str) -> int:
    if isinstance(value, bool):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    try:
        as_int = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{what} must be an integer, got {value!r}") from None
    if as_int != value:
        raise ValueError(f"{what} must be an integer, got {value!r}")
    return as_int


@dataclass(frozen=True)
class LatticeSpec:
    """A named weighted lattice truncated to Chebyshev radius R.

    ``weights`` is only meaningful for the ``custom`` example, where it maps
    ``"n,m"`` coordinate keys to point masses (absent keys default to 1).
    """

    example: str
    R: int
    weights: Mapping[str, float] | None = None

    def __post_init__(self):
        if self.example not in _EXAMPLES:
            raise ValueError(
                f"example must be one of {', '.join(_EXAMPLES)}, got {self.example!r}"
            )
        object.__setattr__(self, "R", _coerce_int(self.R, "R"))
        if self.R < 1:
            raise ValueError(f"R must be positive, got {self.R}")
        if self.weights is not None and self.example != "custom":
            raise ValueError("weights only apply to the custom example")

    def params(self) -> dict:
        out = {"example": self.example, "R": self.R}
        if self.example == "custom":
            out["weights"] = dict(self.weights or {})
        return out


def lattice_build(spec: LatticeSpec, caps: dict | None = None) -> Space:
    """Materialize the truncated lattice described by ``spec``."""
    return build(SpaceRecipe("lattice", spec.params()), caps)


def _point_id(point, one_dim: bool) -> str:
    if one_dim:
        n = _coerce_int(point, "point")
        return f"p{n}"
    if not isinstance(point, Sequence) or isinstance(point, str) or len(point) != 2:
        raise ValueError(f"point must be an (n, m) pair, got {point!r}")
    n = _coerce_int(point[0], "point coordinate")
    m = _coerce_int(point[1], "point coordinate")
    return f"p{n},{m}"


def _point_reach(point, one_dim: bool) -> int:
    if one_dim:
        return abs(_coerce_int(point, "point"))
    return max(abs(_coerce_int(c, "point coordinate")) for c in point)


@dataclass(frozen=True, eq=False)
class GrowthTable:
    """Maximal values of one probe function, tabulated over truncations.

    ``values[i, j]`` is the maximal function of ``function`` on the lattice
    truncated at ``R_values[i]``, evaluated at ``points[j]``.
    """

    example: str
    function: str
    centered: bool
    R_values: tuple[int, ...]
    points: tuple = field(repr=False)
    values: np.ndarray = field(repr=False)

    def column(self, point) -> np.ndarray:
        one_dim = self.example in _ONE_DIM
        target = _point_id(point, one_dim)
        for j, p in enumerate(self.points):
            if _point_id(p, one_dim) == target:
                return self.values[:, j].copy()
        raise ValueError(f"point {point!r} is not tabulated")

    def is_monotone(self, rel_tol: float = 1e-12) -> bool:
        """True when every column is nondecreasing in R (up to rounding)."""
        v = self.values
        if len(self.R_values) < 2:
            return True
        slack = rel_tol * np.abs(v[:-1])
        return bool(np.all(v[1:] >= v[:-1] - slack))

    def rows(self) -> Iterator[tuple[int, str, float]]:
        one_dim = self.example in _ONE_DIM
        for i, R in enumerate(self.R_values):
            for j, p in enumerate(self.points):
                yield R, _point_id(p, one_dim), float(self.values[i, j])


def probe(
    example: str,
    R_values,
    points,
    function: str | None = None,
    caps: dict | None = None,
) -> GrowthTable:
    """Sweep truncation radii and tabulate a probe's maximal values.

    For each R the lattice is rebuilt and the maximal operator is applied to
    the registered probe function from scratch, so each row is intrinsic to
    its own truncation rather than a restriction of a larger one.  ``points``
    must lie inside every truncation in the sweep.
    """
    if example not in _EXAMPLES:
        raise ValueError(f"example must be one of {', '.join(_EXAMPLES)}, got {example!r}")
    if function is None:
        function = _PROBE_FUNCTIONS.get(example)
        if function is None:
            raise ValueError(f"example {example} has no canonical probe function")
    if function not in _PROBE_CENTERED:
        known = ", ".join(sorted(_PROBE_CENTERED))
        raise ValueError(f"unknown probe function {function!r} (known: {known})")
    centered = _PROBE_CENTERED[function]

    radii = sorted({_coerce_int(R, "R value") for R in R_values})
    if not radii:
        raise ValueError("need at least one R value")
    if radii[0] < 1:
        raise ValueError(f"R values must be positive, got {radii[0]}")

    one_dim = example in _ONE_DIM
    pts = tuple(points)
    if not pts:
        raise ValueError("need at least one point")
    ids = [_point_id(p, one_dim) for p in pts]
    reach = max(_point_reach(p, one_dim) for p in pts)
    if reach > radii[0]:
        raise ValueError(
            f"points reach out to {reach} but the smallest truncation has R={radii[0]}"
        )

    table = np.empty((len(radii), len(pts)), dtype=float)
    for i, R in enumerate(radii):
        space = lattice_build(LatticeSpec(example, R), caps)
        values = maximal(space, witness(space, function), kappa=1.0, centered=centered)
        for j, cid in enumerate(ids):
            table[i, j] = values[space.index(cid)]
    return GrowthTable(example, function, centered, tuple(radii), pts, table)


def ball_average(space: Space, f, point, radius: float) -> float:
    """Exact average of ``f`` over one closed ball of a built lattice.

    The full maximal function on a truncated lattice is a supremum that large
    balls can dominate once they swallow the whole grid, which hides how fast
    individual ball averages decay.  This evaluates a single ball, so decay
    caps can be checked radius by radius.
    """
    example = space.metadata.get("params", {}).get("example")
    cid = _point_id(point, example in _ONE_DIM)
    values = ClassFunction.of(space, f).values
    ball = space.closed_ball(cid, float(radius))
    num = math.fsum(
        values[space.index(c)] * n * space.classes[space.index(c)].unit_mass
        for c, n in ball.members.items()
    )
    return num / ball.mass(space)


@dataclass(frozen=True, eq=False)
class DoublingTable:
    """Exact ball-mass ratios |B(origin, r+1)| / |B(origin, r)|."""

    example: str
    r_values: tuple[int, ...]
    inner: np.ndarray = field(repr=False)
    outer: np.ndarray = field(repr=False)

    @property
    def ratios(self) -> np.ndarray:
        return self.outer / self.inner

    def rows(self) -> Iterator[tuple[int, float, float, float]]:
        for i, r in enumerate(self.r_values):
            yield r, float(self.inner[i]), float(self.outer[i]), float(
                self.outer[i] / self.inner[i]
            )


def doubling_ratio(spec: LatticeSpec, r_range, caps: dict | None = None) -> DoublingTable:
    """Tabulate |B(origin, r+1)| / |B(origin, r)| over ``r_range``.

    Ball masses are computed on the lattice truncated at ``spec.R``, so every
    requested radius must satisfy r + 1 <= R; beyond that the outer ball
    would be clipped and the ratio meaningless.
    """
    radii = sorted({_coerce_int(r, "radius") for r in r_range})
    if not radii:
        raise ValueError("need at least one radius")
    if radii[0] < 0:
        raise ValueError(f"radii must be nonnegative, got {radii[0]}")
    if radii[-1] + 1 > spec.R:
        raise ValueError(
            f"radius {radii[-1]} needs a ball of radius {radii[-1] + 1}, "
            f"which exceeds the truncation R={spec.R}"
        )
    space = lattice_build(spec, caps)
    origin = "p0" if spec.example in _ONE_DIM else "p0,0"
    inner = np.empty(len(radii), dtype=float)
    outer = np.empty(len(radii), dtype=float)
    for i, r in enumerate(radii):
        inner[i] = space.closed_ball(origin, float(r)).mass(space)
        outer[i] = space.closed_ball(origin, float(r + 1)).mass(space)
    return DoublingTable(spec.example, tuple(radii), inner, outer)
