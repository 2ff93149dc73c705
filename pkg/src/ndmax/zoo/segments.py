"""Chain spaces with rapidly growing gaps, and glued families of stars."""
from __future__ import annotations

import math

import numpy as np

from ..space import BuildError, PointClass, combine
from . import check_class_budget, check_mass, finish, finish_space
from .generations import _as_int, _check_extras, gen1_star, gen2_basic


def segment(params, caps):
    """Points on a line whose consecutive gaps grow geometrically."""
    kind = "segment"
    _check_extras(params, kind, {"n", "subtype", "kappa"})
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    subtype = _as_int(params.get("subtype"), kind, "subtype")
    if subtype not in (1, 2):
        raise BuildError(f"{kind}: subtype must be 1 or 2")
    if params.get("kappa") is None:
        raise BuildError(f"{kind}: missing parameter 'kappa'")
    kappa = float(params["kappa"])

    if subtype == 1:
        if not kappa >= 2.0:
            raise BuildError(f"{kind}: subtype 1 needs kappa >= 2")
        gaps = np.array([(kappa + 1.0) ** i for i in range(1, n + 1)])
        masses = [1.0] * (n + 1)
    else:
        if not kappa >= 3.0:
            raise BuildError(f"{kind}: subtype 2 needs kappa >= 3")
        gaps = np.array([(kappa - 0.5) ** i for i in range(1, n + 1)])
        for i in range(1, n + 1):
            check_mass(2 ** (i * (i + 1) // 2), caps, kind)
        masses = [1.0] + [float(2 ** (i * (i + 1) // 2)) for i in range(1, n + 1)]

    positions = np.concatenate([[0.0], np.cumsum(gaps)])
    if not np.all(np.isfinite(positions)):
        raise BuildError(f"{kind}: distance overflow")

    if subtype == 1:
        # a dilation by kappa of any prefix still misses the next point
        for j in range(1, n):
            if not kappa * positions[j] < gaps[j]:
                raise BuildError(f"{kind}: prefix dilation check failed at j={j}")
    else:
        for j in range(2, n + 1):
            if not positions[j - 1] < gaps[j - 1]:
                raise BuildError(f"{kind}: gap dominance failed at j={j}")
        for j in range(1, n):
            if not gaps[j - 1] < gaps[j] / (kappa - 1.0):
                raise BuildError(f"{kind}: gap ratio check failed at j={j}")
            if not kappa * gaps[j - 1] > gaps[j]:
                raise BuildError(f"{kind}: dilation reach check failed at j={j}")
            if not math.fsum(masses[1 : j + 1]) < masses[j + 1]:
                raise BuildError(f"{kind}: mass dominance failed at j={j}")

    check_class_budget(n + 1, caps, kind)
    classes = [PointClass(f"x{i}", 1, masses[i]) for i in range(n + 1)]
    between = np.abs(positions[:, None] - positions[None, :])
    within = np.zeros(n + 1)
    meta = {
        "family": kind,
        "params": {"n": n, "subtype": subtype, "kappa": kappa},
        "witnesses": {"hub-indicator": [1.0] + [0.0] * n},
    }
    return finish(classes, within, between, meta, caps)


def composite_prefix(params, caps):
    """Finite prefix of one of the glued star families.

    Families s_tilde and t_tilde take kappa_tilde, p_tilde, eps, delta, N
    and build components N+1..n; s_hat and t_hat take kappa_hat plus a
    variant flag ("exclusive" or "inclusive") and build components 1..n.
    """
    kind = "composite_prefix"
    family = params.get("family")
    if family not in ("s_tilde", "s_hat", "t_tilde", "t_hat"):
        raise BuildError(f"{kind}: family must be one of s_tilde, s_hat, t_tilde, t_hat")
    first_type = family.startswith("s")
    basic = gen1_star if first_type else gen2_basic
    d_max = 2.0 if first_type else 3.0
    components = []

    if family.endswith("tilde"):
        _check_extras(params, kind, {"family", "kappa_tilde", "p_tilde", "eps", "delta", "N", "n"})
        kt = float(params.get("kappa_tilde", 0.0))
        if not 1.0 <= kt < d_max:
            raise BuildError(f"{kind}: kappa_tilde must lie in [1, {d_max})")
        pt = float(params.get("p_tilde", 0.0))
        if not pt >= 1.0:
            raise BuildError(f"{kind}: p_tilde must be >= 1")
        eps = float(params.get("eps", 0.0))
        if not 0.0 < eps <= 0.25:
            raise BuildError(f"{kind}: eps must lie in (0, 1/4]")
        delta = float(params.get("delta", 0.0))
        if not 0.0 < delta < d_max - kt:
            raise BuildError(f"{kind}: delta must lie in (0, {d_max} - kappa_tilde)")
        N = _as_int(params.get("N"), kind, "N", minimum=1)
        n = _as_int(params.get("n"), kind, "n", minimum=N + 1)
        scale = float(N) ** (2.0 * pt)
        tau0 = round(scale)
        if not math.isclose(scale, tau0, rel_tol=1e-9, abs_tol=1e-9):
            raise BuildError(f"{kind}: N^(2 p_tilde) = {scale} is not an integer")
        for idx in range(N + 1, n + 1):
            growth = float(idx) ** (pt * (pt - 1.0) / eps)
            if not math.isfinite(growth):
                raise BuildError(f"{kind}: component size overflow at {idx}")
            tau = tau0 * math.floor(growth)
            m = float(idx) ** (pt / eps)
            check_mass(m, caps, kind)
            d = kt + delta / idx
            components.append(basic({"tau": tau, "d": d, "m": m}, caps))
        kappa0 = kt + delta
        par = {
            "family": family,
            "kappa_tilde": kt,
            "p_tilde": pt,
            "eps": eps,
            "delta": delta,
            "N": N,
            "n": n,
        }
    else:
        _check_extras(params, kind, {"family", "kappa_hat", "variant", "n"})
        variant = params.get("variant", "exclusive")
        if variant not in ("exclusive", "inclusive"):
            raise BuildError(f"{kind}: variant must be 'exclusive' or 'inclusive'")
        kh = float(params.get("kappa_hat", 0.0))
        if variant == "exclusive":
            if not 1.0 < kh <= d_max:
                raise BuildError(f"{kind}: exclusive variant needs kappa_hat in (1, {d_max}]")
        else:
            if not 1.0 <= kh < d_max:
                raise BuildError(f"{kind}: inclusive variant needs kappa_hat in [1, {d_max})")
        n = _as_int(params.get("n"), kind, "n", minimum=1)
        for idx in range(1, n + 1):
            d = kh if variant == "exclusive" else kh + (d_max - kh) / idx
            components.append(basic({"tau": idx, "d": d, "m": 1.0}, caps))
        kappa0 = d_max
        par = {"family": family, "kappa_hat": kh, "variant": variant, "n": n}

    space = combine(components, mode="kappa", kappa0=kappa0)
    space = space.copy_with_metadata(family=kind, params=par, witnesses={})
    return finish_space(space, caps)
