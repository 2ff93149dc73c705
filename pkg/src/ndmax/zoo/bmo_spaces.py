"""Branching spaces whose ball chain T_1 < T_2 < ... carries oscillation growth.

Level n holds n branches; branch (n, i) is a root point plus a leaf class of
m_{n,i} points, all of mass one. Root-to-own-leaf and adjacent-root distances
sit just below the level index, so closed balls around the first root sweep
exact level prefixes. Row counts either follow a floor rule driven by an even
scale b_n chosen minimally per level, or are dyadic (lacunary).
"""
from __future__ import annotations

import math

import numpy as np

from ..space import BuildError, PointClass
from . import check_class_budget, check_mass, finish
from .generations import _as_int, _check_extras

_SLACK = 1e-9


def _matrix_space(rows, kind, params_out, caps):
    depth = len(rows)
    if depth < 1 or rows[0] != [1]:
        raise BuildError(f"{kind}: first level must be a single branch [1]")
    C = depth * (depth + 1)
    check_class_budget(C, caps, kind)

    classes = []
    level = []
    branch = []
    is_root = []
    growth = []
    for n in range(1, depth + 1):
        if len(rows[n - 1]) != n:
            raise BuildError(f"{kind}: level {n} needs exactly {n} branch sizes")
        for i in range(1, n + 1):
            count = rows[n - 1][i - 1]
            if count < 1:
                raise BuildError(f"{kind}: branch sizes must be positive")
            check_mass(count, caps, kind)
            g = i + n * (n - 1) // 2
            classes.append(PointClass(f"r{n}.{i}", 1, 1.0))
            level.append(n)
            branch.append(i)
            is_root.append(True)
            growth.append(float(g))
            classes.append(PointClass(f"l{n}.{i}", count, 1.0))
            level.append(n)
            branch.append(i)
            is_root.append(False)
            growth.append(float(g))

    lev = np.asarray(level, dtype=float)
    between = np.maximum(lev[:, None], lev[None, :])
    index = {(level[k], branch[k], is_root[k]): k for k in range(C)}
    for n in range(1, depth + 1):
        for i in range(1, n + 1):
            r = index[(n, i, True)]
            lf = index[(n, i, False)]
            between[r, lf] = between[lf, r] = n - 1.0 / (2 * i + 1)
            if i < n:
                r2 = index[(n, i + 1, True)]
                between[r, r2] = between[r2, r] = n - 1.0 / (2 * i + 2)
        if n < depth:
            last = index[(n, n, True)]
            first = index[(n + 1, 1, True)]
            between[last, first] = between[first, last] = n + 0.5
    np.fill_diagonal(between, 0.0)

    within = np.where(np.asarray(is_root), 0.0, lev)
    meta = {
        "family": kind,
        "params": params_out,
        "rows": [list(r) for r in rows],
        "root_class": "r1.1",
        "witnesses": {"bmo-growth": growth},
    }
    return finish(classes, list(within), between, meta, caps)


def bmo_matrix(params, caps):
    """Branching space from an explicit matrix of branch sizes."""
    kind = "bmo_matrix"
    _check_extras(params, kind, {"M", "depth"})
    if "M" not in params:
        raise BuildError(f"{kind}: missing parameter 'M'")
    rows = [[_as_int(v, kind, "branch size", minimum=1) for v in row]
            for row in params["M"]]
    if not rows:
        raise BuildError(f"{kind}: M must be nonempty")
    if "depth" in params:
        depth = _as_int(params["depth"], kind, "depth", minimum=1)
        if depth > len(rows):
            raise BuildError(f"{kind}: depth exceeds the number of rows")
        rows = rows[:depth]
    return _matrix_space(rows, kind, {"depth": len(rows)}, caps)


def _floor_diff(b, q1, q2, pn, lf):
    """floor(b * lf * (q1^-pn - q2^-pn)), exact in integers when possible."""
    if lf == 1.0 and float(pn).is_integer():
        e = int(pn)
        a, c = q1**e, q2**e
        return (b * (c - a)) // (a * c)
    return math.floor(b * lf * (q1 ** -pn - q2 ** -pn))


def _c1_family(depth, p_of_n, log_factor, extra_nn, kind, params_out, caps):
    """Rows via the floor rule with minimal even scales.

    Scale b_n is the smallest positive even integer admitting the previous
    point count T: floor(b * lf * ((n+1)^-p - (n+2)^-p)) >= T together with
    b >= T n^(2p) (and b >= T n^n when extra_nn is set); lf is the
    1/(log n + 1) damping when log_factor is on, else 1.
    """
    rows = []
    scales = []
    total = 0
    for n in range(1, depth + 1):
        pn = p_of_n(n)
        lf = 1.0 / (math.log(n) + 1.0) if log_factor else 1.0
        exact = float(pn).is_integer()
        poly_bound = total * n ** (2 * int(pn)) if exact else None

        try:
            guess = total * float(n) ** (2 * pn)
            f1 = lf * (float(n + 1) ** -pn - float(n + 2) ** -pn)
            guess = max(guess, total / f1)
            if extra_nn:
                guess = max(guess, float(total * n**n))
        except OverflowError:
            raise BuildError(f"{kind}: scale overflow at level {n}") from None
        if not math.isfinite(guess):
            raise BuildError(f"{kind}: scale overflow at level {n}")
        poly_float = total * float(n) ** (2 * pn)

        def cond(b):
            if _floor_diff(b, n + 1, n + 2, pn, lf) < total:
                return False
            if poly_bound is not None:
                if b < poly_bound:
                    return False
            elif float(b) * (1.0 + 1e-12) < poly_float:
                return False
            if extra_nn and b < total * n**n:
                return False
            return True
        b = max(2, 2 * math.ceil(guess / 2.0))
        while b - 2 >= 2 and cond(b - 2):
            b -= 2
        while not cond(b):
            b += 2
        check_mass(b, caps, kind, "scale")

        row = []
        for i in range(1, n + 1):
            m = _floor_diff(b, n - i + 1, n - i + 2, pn, lf)
            if m < 1:
                raise BuildError(f"{kind}: empty branch at level {n}")
            f_i = lf * (float(n - i + 1) ** -pn - float(n - i + 2) ** -pn)
            ratio = m / b
            if not (f_i / 4.0 * (1.0 - _SLACK) <= ratio <= 4.0 * f_i * (1.0 + _SLACK)):
                raise BuildError(f"{kind}: branch ratio window fails at ({n},{i})")
            row.append(m)
        rows.append(row)
        scales.append(b)
        total += n + sum(row)
        if not lf * b / 2.0 * (1.0 - _SLACK) <= total <= 2 * b * (1.0 + _SLACK):
            raise BuildError(f"{kind}: point count window fails at level {n}")
        check_mass(total, caps, kind)

    params_out = dict(params_out, b=scales)
    return _matrix_space(rows, kind, params_out, caps)


def bmo_c1(params, caps):
    kind = "bmo_c1"
    _check_extras(params, kind, {"p0", "depth"})
    p0 = float(params.get("p0", 0.0))
    if not (1.0 < p0 < math.inf):
        raise BuildError(f"{kind}: p0 must lie in (1, inf)")
    depth = _as_int(params.get("depth"), kind, "depth", minimum=1)
    return _c1_family(depth, lambda n: p0, False, False, kind,
                      {"p0": p0, "depth": depth}, caps)


def bmo_c1_log(params, caps):
    kind = "bmo_c1_log"
    _check_extras(params, kind, {"p0", "depth"})
    p0 = float(params.get("p0", 0.0))
    if not (1.0 <= p0 < math.inf):
        raise BuildError(f"{kind}: p0 must lie in [1, inf)")
    depth = _as_int(params.get("depth"), kind, "depth", minimum=1)
    return _c1_family(depth, lambda n: p0, True, False, kind,
                      {"p0": p0, "depth": depth}, caps)


def bmo_c1_var(params, caps):
    """Floor-rule space with a per-level exponent list P for levels 2..depth."""
    kind = "bmo_c1_var"
    _check_extras(params, kind, {"P", "depth"})
    depth = _as_int(params.get("depth"), kind, "depth", minimum=1)
    P = [float(v) for v in params.get("P", [])]
    if len(P) != depth - 1:
        raise BuildError(f"{kind}: P must list exponents for levels 2..depth")
    if any(not (1.0 < v < math.inf) for v in P):
        raise BuildError(f"{kind}: exponents must lie in (1, inf)")

    def p_of_n(n):
        return 2.0 if n == 1 else P[n - 2]

    return _c1_family(depth, p_of_n, False, True, kind,
                      {"P": P, "depth": depth}, caps)


def bmo_lacunary(params, caps):
    """Dyadic branch sizes m_{n,i} = 2^(k-1) with k = n(n-1)/2 + i."""
    kind = "bmo_lacunary"
    _check_extras(params, kind, {"depth"})
    depth = _as_int(params.get("depth"), kind, "depth", minimum=1)
    rows = []
    for n in range(1, depth + 1):
        row = []
        for i in range(1, n + 1):
            k = n * (n - 1) // 2 + i
            count = 2 ** (k - 1)
            check_mass(count, caps, kind)
            row.append(count)
        rows.append(row)
    return _matrix_space(rows, kind, {"depth": depth}, caps)


def bmo_b15_sequence(depth):
    """Slowly growing exponent sequence for levels 2..depth.

    Starting from 2, the exponent steps up by one whenever the decay test
    (1/4)(n^-k - (n+1)^-k) <= k exp(-(n - N - 1)/k) would fail afterwards,
    with N the even ceiling of 6 + 8 * sum_{l<=1000} l^-2.
    """
    bound = 6.0 + 8.0 * math.fsum(1.0 / (l * l) for l in range(1, 1001))
    N = 2 * math.ceil(bound / 2.0)
    k = 2.0
    seq = []
    for n in range(2, depth + 1):
        seq.append(k)
        lhs = 0.25 * (float(n) ** -k - float(n + 1) ** -k)
        if not lhs <= k * math.exp(-(n - N - 1) / k):
            k += 1.0
    return seq
