"""Distribution functions, decreasing rearrangements and L^{p,q} quasinorms.

Everything here is exact for finite spaces: the rearrangement is a step
function, so the quasinorm integrals collapse to closed-form power sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .space import Space

__all__ = [
    "StepProfile",
    "distribution",
    "lorentz_norm",
    "lorentz_norm_from_distribution",
]

INF = math.inf


@dataclass
class StepProfile:
    """The decreasing rearrangement of |f| as (cumulative mass, level) steps.

    ``levels[k]`` is the value of f* on [breakpoints[k-1], breakpoints[k]),
    with breakpoints[-1] meaning 0. Zero values of f never appear.
    """

    breakpoints: np.ndarray  # strictly increasing cumulative masses T_k
    levels: np.ndarray  # strictly decreasing positive values v_k

    @classmethod
    def of(cls, space: Space, values) -> "StepProfile":
        v = np.abs(np.asarray(values, dtype=float))
        w = space.class_masses
        pos = v > 0
        v, w = v[pos], w[pos]
        order = np.argsort(-v, kind="stable")
        v, w = v[order], w[order]
        levels: list[float] = []
        masses: list[float] = []
        for val, mass in zip(v, w):
            if levels and val == levels[-1]:
                masses[-1] += mass
            else:
                levels.append(float(val))
                masses.append(float(mass))
        return cls(np.cumsum(masses), np.array(levels))

    @property
    def empty(self) -> bool:
        return self.levels.size == 0


def distribution(space: Space, values, t: float) -> float:
    """Mass of the strict super-level set {|f| > t}."""
    if t < 0:
        raise ValueError("t must be >= 0")
    v = np.abs(np.asarray(values, dtype=float))
    return math.fsum(space.class_masses[v > t])


def lorentz_norm(space: Space, values, p: float, q: float) -> float:
    """The L^{p,q} quasinorm computed from the rearrangement profile."""
    _check_pq(p, q)
    prof = StepProfile.of(space, values)
    if prof.empty:
        return 0.0
    T = prof.breakpoints
    v = prof.levels
    if q == INF:
        return float(np.max(v * T ** (1.0 / p)))
    Tprev = np.concatenate(([0.0], T[:-1]))
    terms = (p / q) * v**q * (T ** (q / p) - Tprev ** (q / p))
    return math.fsum(sorted(terms, reverse=True)) ** (1.0 / q)


def lorentz_norm_from_distribution(space: Space, values, p: float, q: float) -> float:
    """Same quasinorm, but integrated against the distribution function.

    Used as an independent route for cross-checking lorentz_norm; the two
    must agree to near machine precision.
    """
    _check_pq(p, q)
    prof = StepProfile.of(space, values)
    if prof.empty:
        return 0.0
    # d_f(y) = D_k for y in [u_k, u_{k+1}), with u ascending distinct values
    u = np.concatenate(([0.0], prof.levels[::-1]))
    D = np.concatenate((prof.breakpoints[::-1], [0.0]))  # D[k] = mass{f > u[k]}
    if q == INF:
        return float(np.max(u[1:] * D[:-1] ** (1.0 / p)))
    terms = [
        p / q * D[k] ** (q / p) * (u[k + 1] ** q - u[k] ** q)
        for k in range(len(u) - 1)
        if D[k] > 0
    ]
    return math.fsum(sorted(terms, reverse=True)) ** (1.0 / q)


def _check_pq(p: float, q: float) -> None:
    if not (1 <= p < INF):
        raise ValueError(f"p must be in [1, inf), got {p}")
    if not (1 <= q):
        raise ValueError(f"q must be in [1, inf], got {q}")
