"""Layered test spaces with forced singleton lower levels and heavy tops.

The integer sequences below follow greedy minimal-admissible rules; every
stated growth or window condition is re-checked after the fact and a
violation raises BuildError rather than producing a space that silently
misses its contract.
"""
from __future__ import annotations

import math

import numpy as np

from ..space import BuildError, PointClass, combine
from . import check_class_budget, check_mass, finish, finish_space
from .generations import _as_int, _check_extras

_SLACK = 1e-9


def _ceil_power(base: int, expo: float, kind: str) -> int:
    """ceil(base**expo), exact in integers for integral non-negative expo.

    The float fallback shaves a relative 1e-12 before rounding up so that
    values which are integers up to floating dust (base a power of two,
    expo like 1/(p-1)) land on that integer instead of one above it.
    """
    if float(expo).is_integer() and expo >= 0:
        return base ** int(expo)
    try:
        v = float(base) ** expo
    except OverflowError:
        raise BuildError(f"{kind}: power overflow") from None
    if not math.isfinite(v):
        raise BuildError(f"{kind}: power overflow")
    return math.ceil(v * (1.0 - 1e-12))


def _ceil_power_ratio(base: int, expo: float, den: int, kind: str) -> int:
    """ceil(base**expo / den) along the same exact-when-possible route."""
    if float(expo).is_integer() and expo >= 0:
        num = base ** int(expo)
        return -((-num) // den)
    try:
        v = float(base) ** expo / den
    except OverflowError:
        raise BuildError(f"{kind}: power overflow") from None
    if not math.isfinite(v):
        raise BuildError(f"{kind}: power overflow")
    return math.ceil(v * (1.0 - 1e-12))


# -- type I --------------------------------------------------------------


def typeI(params, caps):
    """Star with levels: m_seq[j-1] leaves of mass 2^j, all hanging off a hub.

    Real entries are admitted and become max(1, ceil(value)), so decay
    sequences can be passed directly; the rounded sequence must still be
    nondecreasing.
    """
    kind = "typeI"
    _check_extras(params, kind, {"m_seq"})
    if "m_seq" not in params:
        raise BuildError(f"{kind}: missing parameter 'm_seq'")
    m_seq = []
    for v in params["m_seq"]:
        v = float(v)
        if not (math.isfinite(v) and v > 0):
            raise BuildError(f"{kind}: m_seq entries must be positive")
        m_seq.append(max(1, math.ceil(v)))
    if not m_seq:
        raise BuildError(f"{kind}: m_seq must be nonempty")
    if any(b < a for a, b in zip(m_seq, m_seq[1:])):
        raise BuildError(f"{kind}: m_seq must be nondecreasing after rounding")
    l = len(m_seq)
    C = l + 1
    check_class_budget(C, caps, kind)
    classes = [PointClass("hub", 1, 1.0)]
    classes += [
        PointClass(f"lev{j}", m_seq[j - 1], float(2**j)) for j in range(1, l + 1)
    ]
    between = np.full((C, C), 2.0)
    between[0, :] = 1.0
    between[:, 0] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.concatenate([[0.0], np.full(l, 2.0)])
    meta = {
        "family": kind,
        "params": {"m_seq": m_seq},
        "witnesses": {"hub-indicator": [1.0] + [0.0] * l},
    }
    return finish(classes, within, between, meta, caps)


def typeI_p1(params, caps):
    """Counting-measure chain of levels sized 2^h_j, linked through overflow parts.

    Level j splits into an "in" part (first floor(2^h_j / m_seq[j-1]) points)
    and an "out" remainder; only the out part sits close to the next level.
    The h_j are the smallest strictly increasing integers with
    floor(2^(h_{j+1}) / m_seq[j]) > 2^(h_j).
    """
    kind = "typeI_p1"
    _check_extras(params, kind, {"m_seq"})
    if "m_seq" not in params:
        raise BuildError(f"{kind}: missing parameter 'm_seq'")
    m_seq = [_as_int(v, kind, "m_seq entry", minimum=1) for v in params["m_seq"]]
    if not m_seq:
        raise BuildError(f"{kind}: m_seq must be nonempty")
    if m_seq[0] != 1:
        raise BuildError(f"{kind}: m_seq must start with 1")
    if any(b < a for a, b in zip(m_seq, m_seq[1:])):
        raise BuildError(f"{kind}: m_seq must be nondecreasing")
    l = len(m_seq)
    h = [1]
    for j in range(1, l):
        nxt = h[-1] + 1
        while 2**nxt // m_seq[j] <= 2 ** h[-1]:
            nxt += 1
            if nxt > 995:
                raise BuildError(f"{kind}: level size overflow")
        h.append(nxt)
    check_mass(2 ** h[-1], caps, kind)

    classes = [PointClass("hub", 1, 1.0)]
    level_slots = []  # (in_index, out_index or None) per level
    for j in range(1, l + 1):
        size = 2 ** h[j - 1]
        inn = size // m_seq[j - 1]
        out = size - inn
        in_k = len(classes)
        classes.append(PointClass(f"in{j}", inn, 1.0))
        if out > 0:
            out_k = len(classes)
            classes.append(PointClass(f"out{j}", out, 1.0))
        else:
            out_k = None
        level_slots.append((in_k, out_k))
    C = len(classes)
    check_class_budget(C, caps, kind)

    level_of = np.zeros(C, dtype=int)  # 0 marks the hub
    is_out = np.zeros(C, dtype=bool)
    for j, (in_k, out_k) in enumerate(level_slots, start=1):
        level_of[in_k] = j
        if out_k is not None:
            level_of[out_k] = j
            is_out[out_k] = True

    between = np.full((C, C), 2.0)
    between[0, :] = 1.0
    between[:, 0] = 1.0
    same = level_of[:, None] == level_of[None, :]
    between[same] = 1.0
    up_link = is_out[:, None] & (level_of[None, :] == level_of[:, None] + 1)
    between[up_link] = 1.0
    between[up_link.T] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.ones(C)
    within[0] = 0.0
    meta = {
        "family": kind,
        "params": {"m_seq": m_seq, "h": h},
        "witnesses": {"hub-indicator": [1.0] + [0.0] * (C - 1)},
    }
    return finish(classes, within, between, meta, caps)


# -- type II / III shared chain ------------------------------------------


def _mh_chain(p: float, levels: int, caps, kind: str):
    """Greedy masses m_i and widths h_i for the singleton lower levels.

    Each step takes the smallest m and h with m_{i+1} >= 2 m_i h_i,
    h_i | h_{i+1}, and the window 1 <= m_i^(1-p) h_i < 2. Growth is checked
    incrementally so that hopeless parameter choices fail fast.
    """
    inv = 1.0 / (p - 1.0)
    m = [1]
    h = [1]
    total_h = 1
    for _ in range(levels - 1):
        mi = max(2 * m[-1] * h[-1], _ceil_power(h[-1], inv, kind))
        check_mass(mi, caps, kind)
        ratio = _ceil_power_ratio(mi, p - 1.0, h[-1], kind)
        hi = ratio * h[-1]
        check_mass(hi, caps, kind, "level width")
        window = float(hi) * float(mi) ** (1.0 - p)
        if not (1.0 - _SLACK <= window < 2.0 + _SLACK):
            raise BuildError(f"{kind}: width window violated ({window})")
        assert hi % h[-1] == 0 and mi >= 2 * m[-1] * h[-1]
        m.append(mi)
        h.append(hi)
        total_h += hi
        check_class_budget(total_h, caps, kind)
    return m, h


def typeII(params, caps):
    kind = "typeII"
    _check_extras(params, kind, {"p", "q", "r", "l"})
    p = float(params.get("p", 0.0))
    if not (1.0 < p < math.inf):
        raise BuildError(f"{kind}: p must lie in (1, inf)")
    r = float(params.get("r", 0.0))
    if not (1.0 < r < math.inf):
        raise BuildError(f"{kind}: r must lie in (1, inf)")
    q = float(params.get("q", 0.0))
    if not (1.0 <= q <= r):
        raise BuildError(f"{kind}: q must lie in [1, r]")
    l = _as_int(params.get("l"), kind, "l", minimum=1)
    m, h = _mh_chain(p, l, caps, kind)
    check_class_budget(2 * sum(h), caps, kind)

    inv = 1.0 / (p - 1.0)
    lam = float(l) ** (p / ((p - 1.0) * r))
    top = 2 * m[-1] * h[-1]
    check_mass(top, caps, kind)
    alpha = [max(math.ceil(float(top) / lam), _ceil_power(h[0], inv, kind))]
    beta = []
    for i in range(l):
        check_mass(alpha[-1], caps, kind)
        b = _ceil_power_ratio(alpha[-1], p - 1.0, h[i], kind)
        window = float(b) * float(h[i]) * float(alpha[-1]) ** (1.0 - p)
        if not (1.0 - _SLACK <= window < 2.0 + _SLACK):
            raise BuildError(f"{kind}: layer window violated at {i + 1} ({window})")
        beta.append(b)
        if i + 1 < l:
            alpha.append(max(2 * alpha[-1] * b, _ceil_power(h[i + 1], inv, kind)))
    if not lam * alpha[0] >= top * (1.0 - _SLACK):
        raise BuildError(f"{kind}: top layer too light")

    classes = []
    lower_pos = []
    for i in range(1, l + 1):
        lower_pos.append(len(classes))
        for j in range(1, h[i - 1] + 1):
            classes.append(PointClass(f"x{i}.{j}", 1, float(m[i - 1])))
    upper_pos = []
    for i in range(1, l + 1):
        upper_pos.append(len(classes))
        unit = lam * alpha[i - 1]
        check_mass(unit, caps, kind)
        for j in range(1, h[i - 1] + 1):
            classes.append(PointClass(f"o{i}.{j}", beta[i - 1], unit))
    C = len(classes)

    between = np.full((C, C), 2.0)
    np.fill_diagonal(between, 0.0)
    # layer k reaches lower levels 1..k only
    _layer_links_partial(between, lower_pos, upper_pos, h, list(range(1, l + 1)))
    within = np.zeros(C)
    for i in range(1, l + 1):
        base = upper_pos[i - 1]
        for j in range(h[i - 1]):
            if classes[base + j].count > 1:
                within[base + j] = 2.0

    layered = [0.0] * C
    for i in range(1, l + 1):
        base = lower_pos[i - 1]
        for j in range(h[i - 1]):
            layered[base + j] = 1.0 / m[i - 1]
    meta = {
        "family": kind,
        "params": {"p": p, "q": q, "r": r, "l": l, "m": m, "h": h,
                   "alpha": alpha, "beta": beta},
        "witnesses": {"layered": layered},
    }
    return finish(classes, within, between, meta, caps)


def _layer_links_partial(between, lower_pos, upper_pos, h, top_levels):
    """Distance-1 pairs when layer k spans h[k-1] cells and sees levels <= top_levels[k-1]."""
    for k, base_u in enumerate(upper_pos, start=1):
        h_top = h[top_levels[k - 1] - 1]
        b_arr = np.arange(1, h_top + 1)
        for i in range(1, top_levels[k - 1] + 1):
            j_arr = (b_arr * h[i - 1] + h_top - 1) // h_top
            rows = lower_pos[i - 1] + j_arr - 1
            cols = base_u + b_arr - 1
            between[rows, cols] = 1.0
            between[cols, rows] = 1.0


def typeII_inf(params, caps):
    kind = "typeII_inf"
    _check_extras(params, kind, {"p", "q", "l"})
    p = float(params.get("p", 0.0))
    if not (1.0 < p < math.inf):
        raise BuildError(f"{kind}: p must lie in (1, inf)")
    q = float(params.get("q", 0.0))
    if not q >= 1.0:
        raise BuildError(f"{kind}: q must be >= 1")
    l = _as_int(params.get("l"), kind, "l", minimum=1)
    m, h = _mh_chain(p, l, caps, kind)
    check_class_budget(2 * sum(h), caps, kind)

    inv = 1.0 / (p - 1.0)
    top = 2 * m[-1] * h[-1]
    check_mass(top, caps, kind)
    need = max(float(h[i]) * float(i + 1) ** (2.0 - p) / 2.0 for i in range(l))
    floor_f = need**inv
    if not math.isfinite(floor_f):
        raise BuildError(f"{kind}: layer floor overflow")
    alpha = max(top, math.ceil(floor_f))
    beta = []
    for i in range(1, l + 1):
        A = float(i) ** (p - 2.0) * float(alpha) ** (p - 1.0) / h[i - 1]
        if not math.isfinite(A):
            raise BuildError(f"{kind}: layer count overflow at {i}")
        if not A >= 0.5 * (1.0 - _SLACK):
            raise BuildError(f"{kind}: layer weight too small at {i} ({A})")
        b = math.ceil(A)
        if not b <= 2.0 * A * (1.0 + _SLACK):
            raise BuildError(f"{kind}: layer count overshoot at {i}")
        beta.append(b)

    classes = []
    lower_pos = []
    for i in range(1, l + 1):
        lower_pos.append(len(classes))
        for j in range(1, h[i - 1] + 1):
            classes.append(PointClass(f"x{i}.{j}", 1, float(m[i - 1])))
    upper_pos = []
    for i in range(1, l + 1):
        upper_pos.append(len(classes))
        unit = float(i * alpha)
        check_mass(unit, caps, kind)
        for j in range(1, h[i - 1] + 1):
            classes.append(PointClass(f"o{i}.{j}", beta[i - 1], unit))
    C = len(classes)
    between = np.full((C, C), 2.0)
    np.fill_diagonal(between, 0.0)
    _layer_links_partial(between, lower_pos, upper_pos, h, list(range(1, l + 1)))
    within = np.zeros(C)
    for i in range(1, l + 1):
        base = upper_pos[i - 1]
        for j in range(h[i - 1]):
            if classes[base + j].count > 1:
                within[base + j] = 2.0
    layered = [0.0] * C
    for i in range(1, l + 1):
        base = lower_pos[i - 1]
        for j in range(h[i - 1]):
            layered[base + j] = 1.0 / m[i - 1]
    meta = {
        "family": kind,
        "params": {"p": p, "q": q, "l": l, "m": m, "h": h, "alpha": alpha, "beta": beta},
        "witnesses": {"layered": layered},
    }
    return finish(classes, within, between, meta, caps)


# -- type III ------------------------------------------------------------


def _build_typeIII(p, N, M, K, L, kind, params_out, caps):
    m, h = _mh_chain(p, N, caps, kind)
    hN = h[-1]
    check_class_budget(sum(h) + M * hN, caps, kind)

    inv = 1.0 / (p - 1.0)
    alpha = [max(2 * m[-1] * hN, _ceil_power(hN, inv, kind))]
    beta = []
    for k in range(1, M + 1):
        check_mass(alpha[-1], caps, kind)
        b = _ceil_power_ratio(alpha[-1], p - 1.0, hN, kind)
        window = float(b) * float(hN) * float(alpha[-1]) ** (1.0 - p)
        if not (1.0 - _SLACK <= window < 2.0 + _SLACK):
            raise BuildError(f"{kind}: layer window violated at k={k} ({window})")
        beta.append(b)
        if k < M:
            alpha.append(2 * alpha[-1] * L * b * hN)

    # layer and level masses must dominate everything beneath them; the
    # common factor K >= 1 cancels, so compare exact integers
    lower_mass = [m[i] * h[i] for i in range(N)]
    for i in range(N - 1):
        if not m[i + 1] > sum(lower_mass[: i + 1]):
            raise BuildError(f"{kind}: lower mass dominance fails at level {i + 2}")
    if not alpha[0] > sum(lower_mass):
        raise BuildError(f"{kind}: first layer does not dominate the lower part")
    for k in range(M - 1):
        prev = sum(alpha[j] * L * beta[j] * hN for j in range(k + 1))
        if not alpha[k + 1] > prev:
            raise BuildError(f"{kind}: layer mass dominance fails at k={k + 2}")

    classes = []
    lower_pos = []
    lower_index = []
    for i in range(1, N + 1):
        lower_pos.append(len(classes))
        lower_index.append(list(range(len(classes), len(classes) + h[i - 1])))
        for j in range(1, h[i - 1] + 1):
            classes.append(PointClass(f"x{i}.{j}", 1, float(m[i - 1])))
    upper_pos = []
    upper_index = []
    for k in range(1, M + 1):
        unit = K * alpha[k - 1]
        check_mass(unit, caps, kind)
        count = L * beta[k - 1]
        check_mass(count, caps, kind, "layer count")
        upper_pos.append(len(classes))
        upper_index.append(list(range(len(classes), len(classes) + hN)))
        for b in range(1, hN + 1):
            classes.append(PointClass(f"o{k}.{b}", count, float(unit)))
    C = len(classes)

    between = np.full((C, C), 2.0)
    np.fill_diagonal(between, 0.0)
    _layer_links_partial(between, lower_pos, upper_pos, h, [N] * M)
    within = np.zeros(C)
    for k in range(M):
        base = upper_pos[k]
        for b in range(hN):
            if classes[base + b].count > 1:
                within[base + b] = 2.0

    layered = [0.0] * C
    for i in range(1, N + 1):
        base = lower_pos[i - 1]
        value = (float(h[i - 1]) * float(m[i - 1])) ** (-1.0 / p)
        for j in range(h[i - 1]):
            layered[base + j] = value
    meta = {
        "family": kind,
        "params": params_out,
        "fiber_structure": {
            "N": N, "M": M, "m": m, "h": h, "K": K, "L": L,
            "alpha": alpha, "beta": beta,
            "lower_index": lower_index, "upper_index": upper_index,
        },
        "witnesses": {"layered": layered},
    }
    return finish(classes, within, between, meta, caps)


def typeIII(params, caps):
    kind = "typeIII"
    _check_extras(params, kind, {"p", "N", "M", "K", "L"})
    p = float(params.get("p", 0.0))
    if not (1.0 < p < math.inf):
        raise BuildError(f"{kind}: p must lie in (1, inf)")
    N = _as_int(params.get("N"), kind, "N", minimum=1)
    M = _as_int(params.get("M"), kind, "M", minimum=1)
    K = float(params.get("K", 1.0))
    if not K >= 1.0:
        raise BuildError(f"{kind}: K must be >= 1")
    L = _as_int(params.get("L"), kind, "L", minimum=1)
    par = {"p": p, "N": N, "M": M, "K": K, "L": L}
    return _build_typeIII(p, N, M, K, L, kind, par, caps)


def typeIII_cor(params, caps):
    """Layered space tuned so the top-layer weight equals lam * kappa^(-b)."""
    kind = "typeIII_cor"
    _check_extras(params, kind, {"p", "lam", "a", "b", "kappa"})
    p = float(params.get("p", 0.0))
    if not (1.0 < p < math.inf):
        raise BuildError(f"{kind}: p must lie in (1, inf)")
    lam = float(params.get("lam", 0.0))
    if not lam > 0:
        raise BuildError(f"{kind}: lam must be positive")
    a = _as_int(params.get("a"), kind, "a", minimum=1)
    b = _as_int(params.get("b"), kind, "b", minimum=1)
    kappa = _as_int(params.get("kappa"), kind, "kappa", minimum=1)
    N = kappa**b
    M = kappa**a
    t = lam * float(kappa) ** (-b)
    if not (math.isfinite(t) and t > 0):
        raise BuildError(f"{kind}: target weight overflow")
    L = max(1, math.ceil(t**p))
    K = (L ** (1.0 / p) / t) ** (p / (p - 1.0))
    if not K >= 1.0 - 1e-12:
        raise BuildError(f"{kind}: derived K fell below 1")
    K = max(K, 1.0)
    if not math.isclose(K ** (-1.0 + 1.0 / p) * L ** (1.0 / p), t, rel_tol=1e-12):
        raise BuildError(f"{kind}: K, L do not reproduce the target weight")
    par = {"p": p, "lam": lam, "a": a, "b": b, "kappa": kappa,
           "N": N, "M": M, "K": K, "L": L}
    return _build_typeIII(p, N, M, K, L, kind, par, caps)


# -- glued layered families ----------------------------------------------


def composite_W(params, caps):
    """Cascade-glued layered components with geometrically growing kappa."""
    kind = "composite_W"
    _check_extras(params, kind, {"p", "gamma", "a", "b", "R", "eps", "n"})
    p = float(params.get("p", 0.0))
    if not (1.0 < p < math.inf):
        raise BuildError(f"{kind}: p must lie in (1, inf)")
    gamma = float(params.get("gamma", 0.0))
    a = _as_int(params.get("a"), kind, "a", minimum=1)
    b = _as_int(params.get("b"), kind, "b", minimum=1)
    R = params.get("R")
    if R is None:
        raise BuildError(f"{kind}: missing parameter 'R'")
    R = float(R)
    if not R >= 1.0:
        raise BuildError(f"{kind}: R must be >= 1")
    eps = float(params.get("eps", 0.0))
    if not eps > 0:
        raise BuildError(f"{kind}: eps must be positive")
    n = _as_int(params.get("n"), kind, "n", minimum=1)

    diag = math.hypot(a, b)
    comps = []
    comp_params = []
    for idx in range(1, n + 1):
        kap_f = R**idx
        if not math.isfinite(kap_f):
            raise BuildError(f"{kind}: kappa overflow at component {idx}")
        kap = round(kap_f)
        if not math.isclose(kap_f, kap, rel_tol=1e-9, abs_tol=1e-9):
            raise BuildError(f"{kind}: R^{idx} = {kap_f} is not an integer")
        lam = R ** (-idx * gamma + (idx + 2) * eps * diag)
        if not (math.isfinite(lam) and lam > 0):
            raise BuildError(f"{kind}: weight overflow at component {idx}")
        comp = typeIII_cor({"p": p, "lam": lam, "a": a, "b": b, "kappa": kap}, caps)
        comps.append(comp)
        comp_params.append(dict(comp.metadata["params"], component=idx))

    space = combine(comps, mode="lorentz")
    witnesses = {}
    for idx, comp in enumerate(comps, start=1):
        start, end = space.metadata["component_ranges"][idx - 1]
        values = [0.0] * len(space)
        values[start:end] = comp.metadata["witnesses"]["layered"]
        witnesses[f"layered-c{idx}"] = values
    par = {"p": p, "gamma": gamma, "a": a, "b": b, "R": R, "eps": eps, "n": n}
    space = space.copy_with_metadata(
        family=kind, params=par, component_params=comp_params, witnesses=witnesses
    )
    return finish_space(space, caps)


def _W_variant(params, caps, kind, shift):
    _check_extras(params, kind, {"p", "delta", "omega", "n"})
    p = float(params.get("p", 0.0))
    if not (1.0 < p < math.inf):
        raise BuildError(f"{kind}: p must lie in (1, inf)")
    if params.get("delta") is None or params.get("omega") is None:
        raise BuildError(f"{kind}: delta and omega are required")
    delta = float(params["delta"])
    omega = float(params["omega"])
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    a_n, b_n = n, n * n
    eps_n = 1.0 / (3 * n)
    d_n = math.hypot(a_n, b_n)
    gamma = a_n * (omega - shift / n) - b_n * delta + 3.0 * d_n * eps_n
    inner = {
        "p": p, "gamma": gamma, "a": a_n, "b": b_n,
        "R": float(n) ** n, "eps": eps_n, "n": n,
    }
    space = composite_W(inner, caps)
    par = dict(inner, delta=delta, omega=omega)
    return space.copy_with_metadata(family=kind, params=par)


def W_leq(params, caps):
    return _W_variant(params, caps, "W_leq", 0.0)


def W_less(params, caps):
    return _W_variant(params, caps, "W_less", 1.0)
