"""Exact evaluation of centered and noncentered modified maximal operators.

The operator with modification parameter kappa >= 1 averages |f| over a ball
B(x, s) but divides by the mass of B(x, kappa*s). On a finite space only
finitely many distances occur, so every supremum over radii is attained at a
critical threshold with closed balls: as s decreases to a threshold d, the
open ball B(., s) converges to the closed ball at d while the denominator
ball can only shrink. All candidate evaluations are therefore exact.

The per-center geometry (sorted contributor tables, denominator lookups,
noncentered start positions) depends only on (space, kappa) and is cached on
the space object.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .space import Space, TOL

__all__ = ["OperatorSpec", "ClassFunction", "maximal", "fiber_average", "fiber_sum"]

INF = math.inf


@dataclass(frozen=True)
class OperatorSpec:
    """Which operator to run and which norm pair to measure it with.

    kind selects the norm pair for ratio computations:
      strong          L^p -> L^p
      weak            L^p -> L^{p,inf}
      restricted-weak L^{p,1} -> L^{p,inf}
      lorentz         L^{p,q} -> L^{p,r}   (q <= r)
    """

    p: float
    q: float | None = None
    r: float | None = None
    kappa: float = 1.0
    centered: bool = True
    kind: str = "strong"

    def __post_init__(self):
        if not 1 <= self.p < INF:
            raise ValueError("p must be in [1, inf)")
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")
        if self.kind not in ("strong", "weak", "restricted-weak", "lorentz"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "lorentz":
            if self.q is None or self.r is None:
                raise ValueError("lorentz kind needs explicit q and r")
            if not self.q <= self.r:
                raise ValueError("lorentz kind needs q <= r")

    @property
    def input_norm(self) -> tuple[float, float]:
        if self.kind == "strong" or self.kind == "weak":
            return (self.p, self.p)
        if self.kind == "restricted-weak":
            return (self.p, 1.0)
        return (self.p, self.q)

    @property
    def output_norm(self) -> tuple[float, float]:
        if self.kind == "strong":
            return (self.p, self.p)
        if self.kind == "lorentz":
            return (self.p, self.r)
        return (self.p, INF)


@dataclass
class ClassFunction:
    """One real value per point class (constant on orbits)."""

    values: np.ndarray

    @classmethod
    def of(cls, space: Space, data) -> "ClassFunction":
        if isinstance(data, ClassFunction):
            return cls(np.asarray(data.values, dtype=float).copy())
        if isinstance(data, dict):
            vals = np.zeros(len(space))
            for cid, v in data.items():
                vals[space.index(cid)] = v
            return cls(vals)
        vals = np.asarray(data, dtype=float)
        if vals.shape != (len(space),):
            raise ValueError(f"expected {len(space)} values, got {vals.shape}")
        return cls(vals.copy())

    @classmethod
    def indicator(cls, space: Space, class_ids) -> "ClassFunction":
        vals = np.zeros(len(space))
        for cid in class_ids:
            vals[space.index(cid)] = 1.0
        return cls(vals)


def _as_values(space: Space, f) -> np.ndarray:
    if isinstance(f, ClassFunction):
        v = np.asarray(f.values, dtype=float)
    else:
        v = np.asarray(f, dtype=float)
    if v.shape != (len(space),):
        raise ValueError("function length does not match class count")
    return v


def _geometry(space: Space, kappa: float):
    key = ("maximal-geometry", float(kappa))
    geo = space._cache.get(key)
    if geo is not None:
        return geo
    C = len(space)
    counts = space.counts
    units = space.unit_masses
    # contributor table per center class c: the center point itself, the rest
    # of its own class, and every other class as a block
    D = space.between.copy()
    np.fill_diagonal(D, 0.0)
    diag_w = np.where(counts > 1, space.within, 0.0)
    D[np.arange(C), np.arange(C)] = diag_w
    W = np.tile((counts * units)[None, :], (C, 1))
    W[np.arange(C), np.arange(C)] = (counts - 1) * units
    dist = np.concatenate([np.zeros((C, 1)), D], axis=1)
    wght = np.concatenate([units[:, None], W], axis=1)
    cls = np.concatenate(
        [np.arange(C)[:, None], np.tile(np.arange(C)[None, :], (C, 1))], axis=1
    )
    order = np.argsort(dist, axis=1, kind="stable")
    ds = np.take_along_axis(dist, order, axis=1)
    ws = np.take_along_axis(wght, order, axis=1)
    cs = np.take_along_axis(cls, order, axis=1)
    mcum = np.cumsum(ws, axis=1)
    # candidate positions: last index of each tied distance group
    valid = np.ones_like(ds, dtype=bool)
    valid[:, :-1] = ds[:, 1:] > ds[:, :-1] + TOL * np.maximum(1.0, ds[:, 1:])
    # denominator index per candidate: last entry within kappa * d (+tol)
    den_idx = np.empty(ds.shape, dtype=np.int64)
    start = np.empty((C, C), dtype=np.int64)
    for c in range(C):
        kd = kappa * ds[c]
        den_idx[c] = np.searchsorted(ds[c], kd + TOL * np.maximum(1.0, kd), side="right") - 1
        rho = space.between[c].copy()
        rho[c] = 0.0
        start[c] = np.searchsorted(ds[c], rho - TOL * np.maximum(1.0, rho), side="left")
    den_mass = np.take_along_axis(mcum, den_idx, axis=1)
    geo = {"ds": ds, "ws": ws, "cs": cs, "den": den_mass, "valid": valid, "start": start}
    space._cache[key] = geo
    return geo


def maximal(space: Space, f, kappa: float = 1.0, centered: bool = True) -> np.ndarray:
    """Evaluate M_kappa f (centered) or its noncentered variant, exactly."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    v = _as_values(space, f)
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValueError("maximal operators here take finite nonnegative functions")
    geo = _geometry(space, kappa)
    num = np.cumsum(geo["ws"] * v[geo["cs"]], axis=1)
    ratios = np.where(geo["valid"], num / geo["den"], -np.inf)
    # suffix maximum over candidate positions, per center
    suff = np.maximum.accumulate(ratios[:, ::-1], axis=1)[:, ::-1]
    if centered:
        return suff[:, 0].copy()
    started = np.take_along_axis(suff, geo["start"], axis=1)
    return started.max(axis=0)


# -- fiber averaging on layered two-level spaces -------------------------


def _layered_meta(space: Space) -> dict:
    meta = space.metadata.get("fiber_structure")
    if not meta:
        raise ValueError("space carries no fiber structure metadata")
    return meta


def fiber_average(space: Space, f, k: int, i: int) -> np.ndarray:
    """The averaging operator sending level-i data onto the k-th upper layer.

    On each upper cell the value is f at the cell's level-i fiber point,
    scaled by the mass ratio (fiber point mass) / (upper point mass). The
    result vanishes off the k-th upper layer, and only level-i values of f
    are ever read.
    """
    meta = _layered_meta(space)
    v = _as_values(space, f)
    N, M = meta["N"], meta["M"]
    if not (1 <= i <= N and 1 <= k <= M):
        raise ValueError(f"need 1 <= i <= {N} and 1 <= k <= {M}")
    m, h = meta["m"], meta["h"]
    K, alpha = meta["K"], meta["alpha"]
    hN = h[N - 1]
    out = np.zeros(len(space))
    lower = meta["lower_index"]
    upper = meta["upper_index"]
    for jn in range(1, hN + 1):
        j = math.ceil(jn * h[i - 1] / hN)
        out[upper[k - 1][jn - 1]] = v[lower[i - 1][j - 1]] * m[i - 1] / (K * alpha[k - 1])
    return out


def fiber_sum(space: Space, f) -> np.ndarray:
    """Sum of fiber averages over all levels, per upper layer."""
    meta = _layered_meta(space)
    out = np.zeros(len(space))
    for k in range(1, meta["M"] + 1):
        for i in range(1, meta["N"] + 1):
            out += fiber_average(space, f, k, i)
    return out
