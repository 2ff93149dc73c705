"""Operator-norm constants: exact ratios, searches, and growth trends.

Lower bounds come from explicit functions (indicators, ascent iterates,
registered witnesses) whose ratios are computed exactly. Upper bounds are
attached only when an explicit proved constant is registered for the space
family at hand; everything else honestly reports "no upper bound".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .lorentz import lorentz_norm
from .maximal import ClassFunction, OperatorSpec, maximal, _as_values
from .space import Space

__all__ = [
    "NormEstimate",
    "TrendReport",
    "ratio",
    "search_constant",
    "registered_upper",
    "family_trend",
]

INF = math.inf


@dataclass
class NormEstimate:
    lower: float
    upper: float | None
    witness: np.ndarray
    method: str

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "witness": [float(x) for x in self.witness],
            "method": self.method,
        }


def ratio(space: Space, f, op: OperatorSpec) -> float:
    """||M f||_{p,r} / ||f||_{p,q} with the norm pair picked by op.kind."""
    v = _as_values(space, f)
    p_in, q_in = op.input_norm
    den = lorentz_norm(space, v, p_in, q_in)
    if den == 0.0:
        raise ValueError("ratio of the zero function is undefined")
    mv = maximal(space, v, op.kappa, op.centered)
    p_out, q_out = op.output_norm
    return lorentz_norm(space, mv, p_out, q_out) / den


# -- explicit upper bounds ----------------------------------------------


def registered_upper(space: Space, op: OperatorSpec) -> float | None:
    """Explicit proved constant for (family, operator), if one is on record."""
    fam = space.metadata.get("family")
    par = space.metadata.get("params", {})
    p = op.p
    if fam == "gen1_s2_1":
        if op.kind == "weak" and not op.centered and p == 1 and op.kappa == 1:
            return 2.0
    elif fam == "gen2_t1":
        if op.kappa == 1:
            if op.kind == "strong" and op.centered and p == 1:
                return 5.0
            if op.kind == "strong" and not op.centered and p == par.get("p0"):
                return (4.0 + 3.0**p) ** (1.0 / p)
    elif fam == "gen1_s1":
        if (
            op.kind == "strong"
            and not op.centered
            and op.kappa == 1
            and p == par.get("p0")
        ):
            return (2.0 + 2.0**p) ** (1.0 / p)
    elif fam == "gen1_s2":
        # valid for both operators: the centered operator is dominated by
        # the noncentered one ball-by-ball
        if op.kind == "weak" and op.kappa == 1 and p == par.get("p0"):
            return 2.0 * 19.0 ** (1.0 / p)
    elif fam == "gen2_t2":
        if op.kappa == 1:
            p0 = par.get("p0")
            if op.kind == "strong" and op.centered and p == 1:
                return 5.0
            if op.kind == "weak" and not op.centered:
                if p0 == 1 and p == 1:
                    return 2.0
                if p0 is not None and p0 > 1 and p == p0:
                    return 2.0 * 21.0 ** (1.0 / p)
    elif fam == "gen2_t3":
        if op.kind == "strong" and op.centered and p == 1 and op.kappa == 1:
            return 6.0
    elif fam == "segment":
        if par.get("subtype") == 1 and op.kappa == par.get("kappa"):
            if op.kind == "weak" and not op.centered and p == 1:
                return 2.0
        if par.get("subtype") == 2 and op.kappa == par.get("kappa"):
            if op.kind == "strong" and op.centered and p == 1:
                return 4.0
    elif fam == "gen1_star":
        tau, d, m = par.get("tau"), par.get("d"), par.get("m")
        if m is not None and op.kind in ("strong", "weak"):
            if op.kappa >= d:
                # any ball holding two points has a dilation covering the
                # whole star, so M f <= max(|f|, A f) pointwise
                return 2.0 ** (1.0 / p)
            # centered included: centered averages form a sub-family of
            # the noncentered ones
            return (2.0 ** (p - 1) * (1.0 + tau * m ** (1.0 - p) + 2.0 ** (p - 1))) ** (
                1.0 / p
            )
    elif fam == "gen2_basic":
        tau, d, m = par.get("tau"), par.get("d"), par.get("m")
        if m is not None and op.kind in ("strong", "weak"):
            if op.kappa >= d:
                return 2.0 ** (1.0 / p)
            if op.centered:
                # the centered bound does not degrade as kappa shrinks
                return (2.0 * (3.0**p + 3.0)) ** (1.0 / p)
            return (
                3.0
                * (2.0 + 3.0**p + 3.0 * 6.0 ** (p - 1) * (1.0 + 2.0 ** (p - 1) * tau * m ** (1.0 - p)))
            ) ** (1.0 / p)
    return None


# -- searches ------------------------------------------------------------


def _indicator_candidates(space: Space, rng: np.random.Generator, cap_exponent: int = 20,
                          sample_count: int = 4096) -> Iterable[np.ndarray]:
    C = len(space)
    if C <= cap_exponent:
        for mask in range(1, 2**C):
            yield np.array([(mask >> i) & 1 for i in range(C)], dtype=float)
    else:
        # all singles and the full set, then random subsets
        eye = np.eye(C)
        for i in range(C):
            yield eye[i]
        yield np.ones(C)
        for _ in range(sample_count):
            m = rng.integers(0, 2, size=C).astype(float)
            if m.any():
                yield m


def _ascent(
    space: Space,
    op: OperatorSpec,
    start: np.ndarray,
    sweeps: int,
) -> tuple[float, np.ndarray]:
    f = start.astype(float).copy()
    if not f.any():
        raise ValueError("ascent start must be nonzero")
    best = ratio(space, f, op)
    eta = 0.5
    C = len(space)
    done = 0
    while eta > 1e-6 and done < sweeps:
        improved = False
        for c in range(C):
            if f[c] == 0.0:
                continue
            base = f[c]
            for factor in (1.0 + eta, 1.0 - eta):
                f[c] = base * factor
                r = ratio(space, f, op)
                if r > best * (1.0 + 1e-13):
                    best = r
                    improved = True
                    break
                f[c] = base
        done += 1
        if not improved:
            eta /= 2.0
    return best, f


def search_constant(
    space: Space,
    op: OperatorSpec,
    method: str = "auto",
    budget: int = 50,
    seed: int = 0,
    sweeps: int = 200,
) -> NormEstimate:
    """Best lower bound over indicators, ascent restarts and witnesses.

    budget counts ascent restarts (restart 0 starts from the best indicator
    or registered witness, later restarts from seeded random points).
    Deterministic for a fixed seed; argmax ties go to the earliest candidate.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if method not in ("auto", "indicators", "ascent", "witness"):
        raise ValueError(f"unknown method {method!r}")
    rng = np.random.default_rng(seed)
    best = -INF
    best_f = None
    best_method = ""

    def consider(f: np.ndarray, tag: str):
        nonlocal best, best_f, best_method
        r = ratio(space, f, op)
        if r > best:
            best, best_f, best_method = r, f.copy(), tag

    witnesses = space.metadata.get("witnesses", {})
    if method in ("auto", "witness"):
        for name in sorted(witnesses):
            consider(np.asarray(witnesses[name], dtype=float), f"witness({name})")
        if method == "witness" and best_f is None:
            raise ValueError("no registered witnesses on this space")

    if method in ("auto", "indicators"):
        for cand in _indicator_candidates(space, rng):
            consider(cand, "indicators")

    if method in ("auto", "ascent"):
        starts: list[np.ndarray] = []
        if best_f is not None:
            starts.append(best_f.copy())
        else:
            starts.append(np.ones(len(space)))
        for _ in range(budget - 1):
            starts.append(10.0 ** rng.uniform(-3, 3, size=len(space)))
        for s in starts:
            r, f = _ascent(space, op, s, sweeps)
            if r > best:
                best, best_f, best_method = r, f, "ascent"

    assert best_f is not None
    return NormEstimate(
        lower=best,
        upper=registered_upper(space, op),
        witness=best_f,
        method=best_method,
    )


# -- family trends -------------------------------------------------------


@dataclass
class TrendReport:
    indices: list[int]
    lowers: list[float]
    slope: float
    intercept: float
    tail_slope: float
    classification: str
    predicted: list[float] | None = None
    predicted_slope: float | None = None

    def rows(self) -> list[tuple]:
        pred = self.predicted or [float("nan")] * len(self.indices)
        return list(zip(self.indices, self.lowers, pred))


def family_trend(
    build: Callable[[int], Space],
    n_range: Sequence[int],
    op: OperatorSpec | None = None,
    value_fn: Callable[[Space, int], float] | None = None,
    predicted: Callable[[int], float] | None = None,
    tail_threshold: float = 0.07,
    seed: int = 0,
    budget: int = 4,
    method: str = "auto",
) -> TrendReport:
    """Lower bounds along a family, log-log fitted and classified.

    The classification looks at the least-squares slope over the tail half of
    the points: growth beyond tail_threshold reads as "diverging". With the
    slow (log-like) divergences around here this is a judgement on the probed
    prefix, not a theorem about the limit.
    """
    idx = [int(n) for n in n_range]
    if not idx:
        raise ValueError("empty index range")
    if value_fn is None:
        if op is None:
            raise ValueError("need op or value_fn")

        def value_fn(space: Space, n: int) -> float:
            return search_constant(space, op, method=method, budget=budget, seed=seed).lower

    lowers = []
    for n in idx:
        space = build(n)
        lowers.append(float(value_fn(space, n)))
    logs = np.log(np.asarray(lowers))
    ln = np.log(np.asarray(idx, dtype=float))
    if len(idx) >= 2:
        slope, intercept = np.polyfit(ln, logs, 1)
        half = math.ceil(len(idx) / 2)
        if half >= 2:
            t_slope = np.polyfit(ln[-half:], logs[-half:], 1)[0]
        else:
            t_slope = slope
    else:
        slope, intercept, t_slope = 0.0, logs[0], 0.0
    pred_vals = None
    pred_slope = None
    if predicted is not None:
        pred_vals = [float(predicted(n)) for n in idx]
        lp = np.log(np.asarray(pred_vals))
        if len(idx) >= 2 and np.ptp(lp) > 0:
            pred_slope = float(np.polyfit(lp, logs, 1)[0])
    return TrendReport(
        indices=idx,
        lowers=lowers,
        slope=float(slope),
        intercept=float(intercept),
        tail_slope=float(t_slope),
        classification="diverging" if t_slope > tail_threshold else "bounded",
        predicted=pred_vals,
        predicted_slope=pred_slope,
    )
