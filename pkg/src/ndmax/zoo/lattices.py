"""Finite lattice truncations under the sup metric.

Points are the integer vectors with coordinates in [-R, R]; every class is a
singleton and distances are Chebyshev. The named examples attach the weights
used by the truncation probes; "custom" takes an explicit weight table.
"""
from __future__ import annotations

import math

import numpy as np

from ..space import BuildError, PointClass
from . import check_class_budget, check_mass, finish
from .generations import _as_int, _check_extras

_EXAMPLES = ("C", "D", "A-discrete", "B-discrete", "custom")
_R_CAPS = {"D": 24, "A-discrete": 26, "B-discrete": 26}


def _weight_table(weights, R, kind):
    table = {}
    for key, value in weights.items():
        try:
            parts = [int(s) for s in str(key).split(",")]
        except ValueError:
            raise BuildError(f"{kind}: bad weight key {key!r}") from None
        if len(parts) != 2 or any(abs(c) > R for c in parts):
            raise BuildError(f"{kind}: weight key {key!r} is outside the grid")
        w = float(value)
        if not (math.isfinite(w) and w > 0):
            raise BuildError(f"{kind}: weights must be positive, got {value!r}")
        table[tuple(parts)] = w
    return table


def lattice(params, caps):
    kind = "lattice"
    _check_extras(params, kind, {"example", "R", "weights"})
    example = params.get("example")
    if example not in _EXAMPLES:
        raise BuildError(f"{kind}: example must be one of {', '.join(_EXAMPLES)}")
    R = _as_int(params.get("R"), kind, "R", minimum=1)
    cap = _R_CAPS.get(example)
    if cap is not None and R > cap:
        raise BuildError(f"{kind}: example {example} supports R <= {cap}")

    one_dim = example in ("A-discrete", "B-discrete")
    table = None
    if example == "custom":
        table = _weight_table(params.get("weights") or {}, R, kind)
    elif "weights" in params:
        raise BuildError(f"{kind}: weights only apply to the custom example")

    rng = range(-R, R + 1)
    coords = [(n,) for n in rng] if one_dim else [(n, m) for n in rng for m in rng]
    C = len(coords)
    check_class_budget(C, caps, kind)

    classes = []
    probe = []
    for pt in coords:
        if one_dim:
            n = pt[0]
            cid = f"p{n}"
            mass = math.exp(n * n) if example == "A-discrete" else math.exp(-n * n)
        else:
            n, m = pt
            cid = f"p{n},{m}"
            if example == "C":
                mass = float(4 ** abs(m)) if n == 0 else 1.0
                probe.append(float(2**n) if n > 0 and m == 0 else 0.0)
            elif example == "D":
                if n == 0:
                    mass = float(4 ** abs(m))
                elif n < 0 and m == 0:
                    mass = float(2 ** (n * n))
                else:
                    mass = 1.0
                probe.append(float(2 ** (n * n)) if n > 0 and m == 0 else 0.0)
            else:
                mass = table.get(pt, 1.0)
        check_mass(mass, caps, kind)
        classes.append(PointClass(cid, 1, mass))

    arr = np.asarray(coords, dtype=float)
    between = np.abs(arr[:, None, :] - arr[None, :, :]).max(axis=2)
    within = np.zeros(C)

    par = {"example": example, "R": R}
    if example == "custom":
        par["weights"] = {f"{k[0]},{k[1]}": v for k, v in table.items()}
    meta = {
        "family": kind,
        "params": par,
        "coords": {c.id: list(pt) for c, pt in zip(classes, coords)},
    }
    if example == "C":
        meta["witnesses"] = {"probe-f": probe}
    elif example == "D":
        meta["witnesses"] = {"probe-g": probe}
    return finish(classes, within, between, meta, caps)
