"""Mean oscillation norms over closed balls.

Functions here may take signed values (one real per class); everything else
in the package works with nonnegative data. The ball family is the set of
distinct closed balls, deduplicated by their member multiset, so each ball
counts once no matter how many (center, radius) pairs describe it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .maximal import ClassFunction, _as_values
from .space import Ball, Space

_BALL_KEY = ("bmo-balls",)


def _ball_data(space: Space):
    """Distinct closed balls with member index and weight arrays, cached."""
    cached = space._cache.get(_BALL_KEY)
    if cached is not None:
        return cached
    seen = {}
    for c in space.classes:
        for r in space.critical_radii(c.id):
            ball = space.closed_ball(c.id, float(r))
            key = ball.key()
            if key in seen:
                continue
            idx = np.array([space.index(cid) for cid in ball.members], dtype=int)
            w = np.array(
                [n * space.classes[space.index(cid)].unit_mass
                 for cid, n in ball.members.items()]
            )
            seen[key] = (ball, idx, w, float(w.sum()))
    data = list(seen.values())
    space._cache[_BALL_KEY] = data
    return data


def distinct_balls(space: Space) -> list[Ball]:
    return [ball for ball, _, _, _ in _ball_data(space)]


@dataclass
class OscillationRecord:
    ball: Ball
    mean: float
    p_oscillation: float


def _ball_arrays(space: Space, ball: Ball):
    for cand, idx, w, mass in _ball_data(space):
        if cand is ball or cand.key() == ball.key():
            return idx, w, mass
    idx = np.array([space.index(cid) for cid in ball.members], dtype=int)
    w = np.array(
        [n * space.classes[space.index(cid)].unit_mass
         for cid, n in ball.members.items()]
    )
    return idx, w, float(w.sum())


def ball_oscillation(space: Space, f, ball: Ball, p: float) -> OscillationRecord:
    """The p-mean oscillation of f over one ball, with its mean."""
    if not (p >= 1.0 and math.isfinite(p)):
        raise ValueError("p must lie in [1, inf)")
    v = _as_values(space, f)
    idx, w, mass = _ball_arrays(space, ball)
    mean = float(np.dot(w, v[idx]) / mass)
    osc = float(np.dot(w, np.abs(v[idx] - mean) ** p) / mass) ** (1.0 / p)
    return OscillationRecord(ball=ball, mean=mean, p_oscillation=osc)


def bmo_norm(space: Space, f, p: float = 1.0) -> tuple[float, OscillationRecord]:
    """Supremum of the p-mean oscillation over all distinct closed balls."""
    if not (p >= 1.0 and math.isfinite(p)):
        raise ValueError("p must lie in [1, inf)")
    v = _as_values(space, f)
    best = None
    best_val = -1.0
    for ball, idx, w, mass in _ball_data(space):
        mean = float(np.dot(w, v[idx]) / mass)
        osc = float(np.dot(w, np.abs(v[idx] - mean) ** p) / mass) ** (1.0 / p)
        if osc > best_val:
            best_val = osc
            best = OscillationRecord(ball=ball, mean=mean, p_oscillation=osc)
    return best_val, best


def double_average(space: Space, f, ball: Ball, p: float) -> float:
    """The two-variable form: mean of |f(x) - f(y)|^p over the ball squared."""
    v = _as_values(space, f)
    idx, w, mass = _ball_arrays(space, ball)
    diffs = np.abs(v[idx][:, None] - v[idx][None, :]) ** p
    return float(w @ diffs @ w) / (mass * mass)


def power_trick(space: Space, f, alpha: float, ball: Ball) -> ClassFunction:
    """Signed root of the recentered function: sgn(f - f_B) |f - f_B|^(1/alpha)."""
    if not alpha >= 1.0:
        raise ValueError("alpha must be >= 1")
    v = _as_values(space, f)
    idx, w, mass = _ball_arrays(space, ball)
    mean = float(np.dot(w, v[idx]) / mass)
    shifted = v - mean
    return ClassFunction(np.sign(shifted) * np.abs(shifted) ** (1.0 / alpha))


@dataclass
class JNProfile:
    """Super-level decay table sup_B |{x in B : |f - f_B| > t}| / |B|."""

    thresholds: np.ndarray
    profile: np.ndarray
    norm: float
    fit_c1: float
    fit_c2: float
    violations: list = field(default_factory=list)

    def at(self, t: float) -> float:
        pos = int(np.searchsorted(self.thresholds, t, side="right")) - 1
        if pos < 0:
            return float(self.profile[0]) if len(self.profile) else 0.0
        return float(self.profile[pos])


def jn_profile(space: Space, f, c1: float | None = None,
               c2: float | None = None) -> JNProfile:
    """Decay table over all deviation breakpoints, with an exponential fit.

    The fit regresses log(profile) on t / norm over the rows with a nonzero
    profile, giving profile ~ c1 exp(-c2 t / norm) with norm the 1-mean
    oscillation norm of f. When a (c1, c2) pair is supplied, rows exceeding
    that bound (with 1e-9 slack) are reported as violations.
    """
    v = _as_values(space, f)
    if float(np.ptp(v)) == 0.0:
        raise ValueError("constant functions have no decay profile")
    data = _ball_data(space)

    per_ball = []
    breakpoints = []
    for _, idx, w, mass in data:
        mean = float(np.dot(w, v[idx]) / mass)
        dev = np.abs(v[idx] - mean)
        order = np.argsort(dev)
        dev_sorted = dev[order]
        # weight of {dev > t} = suffix sum past the insertion point of t
        suffix = np.concatenate([np.cumsum(w[order][::-1])[::-1], [0.0]])
        per_ball.append((dev_sorted, suffix, mass))
        breakpoints.append(dev_sorted)
    thresholds = np.unique(np.concatenate(breakpoints))

    profile = np.zeros(len(thresholds))
    for dev_sorted, suffix, mass in per_ball:
        pos = np.searchsorted(dev_sorted, thresholds, side="right")
        np.maximum(profile, suffix[pos] / mass, out=profile)

    norm, _ = bmo_norm(space, f, 1.0)
    nz = profile > 0
    if int(nz.sum()) >= 2:
        slope, intercept = np.polyfit(thresholds[nz] / norm, np.log(profile[nz]), 1)
        fit_c1, fit_c2 = float(np.exp(intercept)), float(-slope)
    else:
        fit_c1, fit_c2 = float(profile[nz][0]), 0.0

    violations = []
    if c1 is not None and c2 is not None:
        bound = c1 * np.exp(-c2 * thresholds / norm)
        for t, pr, bd in zip(thresholds, profile, bound):
            if pr > bd * (1.0 + 1e-9):
                violations.append((float(t), float(pr), float(bd)))
    return JNProfile(thresholds=thresholds, profile=profile, norm=norm,
                     fit_c1=fit_c1, fit_c2=fit_c2, violations=violations)
