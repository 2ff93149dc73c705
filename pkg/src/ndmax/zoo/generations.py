"""Star and two-tier test spaces (first and second generation families)."""
from __future__ import annotations

import math

import numpy as np

from ..space import BuildError, PointClass
from . import check_class_budget, check_mass, finish

_SLACK = 1e-9


def _as_int(value, kind: str, name: str, minimum: int | None = None) -> int:
    if value is None:
        raise BuildError(f"{kind}: missing parameter {name!r}")
    if isinstance(value, bool):
        raise BuildError(f"{kind}: {name} must be an integer")
    if isinstance(value, float):
        if not value.is_integer():
            raise BuildError(f"{kind}: {name} must be an integer")
        value = int(value)
    if not isinstance(value, (int, np.integer)):
        raise BuildError(f"{kind}: {name} must be an integer")
    value = int(value)
    if minimum is not None and value < minimum:
        raise BuildError(f"{kind}: {name} must be >= {minimum}")
    return value


def _check_extras(params: dict, kind: str, allowed) -> None:
    extra = sorted(set(params) - set(allowed))
    if extra:
        raise BuildError(f"{kind}: unknown parameter(s) {', '.join(extra)}")


def _exponent(params, kind, name="p0", low=1.0, low_open=False, allow_inf=False):
    raw = params.get(name)
    if raw is None:
        raise BuildError(f"{kind}: missing parameter {name!r}")
    if isinstance(raw, str) and raw.lower() in ("inf", "infinity"):
        raw = math.inf
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise BuildError(f"{kind}: {name} must be a number") from None
    if math.isinf(value) and value > 0:
        if not allow_inf:
            raise BuildError(f"{kind}: {name} must be finite")
        return math.inf
    ok = value > low if low_open else value >= low
    if math.isnan(value) or not ok:
        bracket = "(" if low_open else "["
        raise BuildError(f"{kind}: {name} must lie in {bracket}{low}, inf)")
    return value


def _floor_power_ratio(base: int, p0: float, den: int, kind: str) -> int:
    """floor(base**p0 / den), exact in integers whenever p0 is integral."""
    if float(p0).is_integer():
        return base ** int(p0) // den
    value = float(base) ** p0
    if not math.isfinite(value):
        raise BuildError(f"{kind}: power overflow in tau")
    return math.floor(value / den)


# -- first generation ----------------------------------------------------


def _star_compressed(kind, tau, d, m, params_out, caps):
    classes = [PointClass("x0", 1, 1.0), PointClass("leaf", tau, float(m))]
    within = np.array([0.0, d])
    between = np.array([[0.0, 1.0], [1.0, 0.0]])
    meta = {
        "family": kind,
        "params": params_out,
        "witnesses": {"hub-indicator": [1.0, 0.0]},
    }
    return finish(classes, within, between, meta, caps)


def _star_singletons(kind, leaf_masses, d, params_out, caps):
    tau = len(leaf_masses)
    check_class_budget(tau + 1, caps, kind)
    classes = [PointClass("x0", 1, 1.0)]
    classes += [
        PointClass(f"x{i}", 1, float(v)) for i, v in enumerate(leaf_masses, start=1)
    ]
    C = tau + 1
    between = np.full((C, C), float(d))
    between[0, :] = 1.0
    between[:, 0] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.zeros(C)
    meta = {
        "family": kind,
        "params": params_out,
        "witnesses": {"hub-indicator": [1.0] + [0.0] * tau},
    }
    return finish(classes, within, between, meta, caps)


def gen1_star(params, caps):
    """Hub plus tau leaves at distance 1; leaves are d apart from each other."""
    kind = "gen1_star"
    _check_extras(params, kind, {"tau", "d", "m", "F"})
    tau = _as_int(params.get("tau"), kind, "tau", minimum=1)
    d = float(params.get("d", 2.0))
    if not 1.0 < d <= 2.0:
        raise BuildError(f"{kind}: d must lie in (1, 2], got {d}")
    if ("m" in params) == ("F" in params):
        raise BuildError(f"{kind}: give exactly one of m and F")
    if "m" in params:
        m = float(params["m"])
        if not m >= 1.0:
            raise BuildError(f"{kind}: m must be >= 1")
        return _star_compressed(kind, tau, d, m, {"tau": tau, "d": d, "m": m}, caps)
    F = [float(v) for v in params["F"]]
    if len(F) != tau:
        raise BuildError(f"{kind}: F must list tau={tau} leaf masses")
    if not all(v > 0 for v in F):
        raise BuildError(f"{kind}: leaf masses must be positive")
    return _star_singletons(kind, F, d, {"tau": tau, "d": d, "F": F}, caps)


def gen1_s1(params, caps):
    kind = "gen1_s1"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind, allow_inf=True)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    tau = 2**n if math.isinf(p0) else _floor_power_ratio(n + 1, p0, n, kind)
    par = {"p0": p0, "n": n, "tau": tau}
    return _star_compressed(kind, tau, 2.0, float(n), par, caps)


def gen1_s1_log(params, caps):
    kind = "gen1_s1_log"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    base = float(n + 1) ** p0
    if not math.isfinite(base):
        raise BuildError(f"{kind}: power overflow in tau")
    tau = math.floor((math.log(n) + 1.0) * base / n)
    par = {"p0": p0, "n": n, "tau": tau}
    return _star_compressed(kind, tau, 2.0, float(n), par, caps)


def gen1_s2_1(params, caps):
    kind = "gen1_s2_1"
    _check_extras(params, kind, {"n"})
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    check_mass(2**n, caps, kind)
    masses = [float(2**i) for i in range(1, n + 1)]
    return _star_singletons(kind, masses, 2.0, {"n": n, "tau": n}, caps)


def _doubling_blocks(p0: float, n: int, kind: str):
    """Leaf blocks with dyadically decreasing masses and minimal sizes.

    Block j in [e] has m_j points of unit mass close to 2^((1-j)/p0)(n+1),
    sized so that the block masses s_j * m_j are comparable with 2^(-j).
    """
    c = _floor_power_ratio(n + 1, p0, n, kind)
    half_pow = ((n + 1) / 2.0) ** p0
    e = 1
    while 2**e <= c and 2.0**e <= half_pow * (1.0 + 1e-12):
        e += 1
    m_list: list[float] = []
    s_list: list[int] = []
    for j in range(1, e + 1):
        m_j = 2.0 ** ((1 - j) / p0) * (n + 1) - 1.0
        if not (1.0 - _SLACK <= m_j <= n * (1.0 + _SLACK)):
            raise BuildError(f"{kind}: leaf mass m_{j}={m_j} escapes [1, n]")
        lo = 2.0 ** (2 - j) * n * float(c)
        if not math.isfinite(lo):
            raise BuildError(f"{kind}: block size overflow")
        s_j = math.ceil(lo / m_j)
        if not (lo * (1.0 - _SLACK) <= s_j * m_j <= 2.0 * lo * (1.0 + _SLACK)):
            raise BuildError(f"{kind}: block mass window violated at j={j}")
        m_list.append(m_j)
        s_list.append(s_j)
    return c, e, m_list, s_list


def gen1_s2(params, caps):
    kind = "gen1_s2"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind, low_open=True)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    c, e, m_list, s_list = _doubling_blocks(p0, n, kind)
    tau = sum(s_list)
    check_class_budget(e + 1, caps, kind)
    classes = [PointClass("x0", 1, 1.0)]
    classes += [
        PointClass(f"leaf{j}", s_list[j - 1], m_list[j - 1]) for j in range(1, e + 1)
    ]
    C = e + 1
    between = np.full((C, C), 2.0)
    between[0, :] = 1.0
    between[:, 0] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.concatenate([[0.0], np.full(e, 2.0)])
    meta = {
        "family": kind,
        "params": {"p0": p0, "n": n, "c": c, "e": e, "m": m_list, "s": s_list, "tau": tau},
        "witnesses": {"hub-indicator": [1.0] + [0.0] * e},
    }
    return finish(classes, within, between, meta, caps)


def _pyramid_data(p0: float, n: int, kind: str):
    """Level masses and leaf-count sequence shared by the pyramid spaces.

    Level i carries 2^(i-1) centers of mass 2^((i-n)/(p0-1)) each; tau_i
    counts the level-i satellites; the heavy unit is m_n per step of i.
    """
    q = p0 - 1.0
    ip = math.floor(p0)
    fact = math.factorial(n)
    log2_m = (2 * n * ip - n) / q + math.log2(fact) / q
    if log2_m > 995.0:
        raise BuildError(f"{kind}: heavy mass overflow")
    m_n = 2.0 ** ((2 * n * ip - n) / q) * fact ** (1.0 / q)
    if float(p0).is_integer():
        a_floor = [i ** int(p0) - (i - 1) ** int(p0) for i in range(1, n + 1)]
        partial = 0
        for i, a in enumerate(a_floor, start=1):
            partial += a
            assert partial == i ** int(p0)
    else:
        a_vals = [float(i) ** p0 - float(i - 1) ** p0 for i in range(1, n + 1)]
        partial = 0.0
        for i, a in enumerate(a_vals, start=1):
            partial += a
            assert math.isclose(partial, float(i) ** p0, rel_tol=1e-9)
        a_floor = [math.floor(v) for v in a_vals]
    pow2 = 2 ** (2 * n * ip)
    tau_list = []
    for i, a in enumerate(a_floor, start=1):
        num = a * pow2 * fact
        assert num % i == 0
        t = num // i
        assert t % 2 ** (i - 1) == 0
        tau_list.append(t)
    centers_mass = math.fsum(2.0 ** (i - 1) * 2.0 ** ((i - n) / q) for i in range(1, n + 1))
    assert m_n >= 2.0**n >= centers_mass
    return q, m_n, tau_list


def gen1_s3(params, caps):
    kind = "gen1_s3"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind, low_open=True)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    q, m_n, tau_list = _pyramid_data(p0, n, kind)
    C = 2 ** (n + 1) - 2
    check_class_budget(C, caps, kind)

    classes = []
    center_idx = {}
    for i in range(1, n + 1):
        F_i = 2.0 ** ((i - n) / q)
        for j in range(1, 2 ** (i - 1) + 1):
            center_idx[(i, j)] = len(classes)
            classes.append(PointClass(f"x{i}.{j}", 1, F_i))
    leaf_idx = {}
    for i in range(1, n + 1):
        count = tau_list[i - 1] // 2 ** (i - 1)
        check_mass(count, caps, kind, "leaf count")
        unit = m_n * i
        check_mass(unit, caps, kind)
        for j in range(1, 2 ** (i - 1) + 1):
            leaf_idx[(i, j)] = len(classes)
            classes.append(PointClass(f"leaf{i}.{j}", count, unit))

    between = np.full((C, C), 2.0)
    np.fill_diagonal(between, 0.0)
    for lv in range(1, n + 1):
        for jp in range(1, 2 ** (lv - 1) + 1):
            col = leaf_idx[(lv, jp)]
            for i in range(1, lv + 1):
                j = (jp + (1 << (lv - i)) - 1) >> (lv - i)
                row = center_idx[(i, j)]
                between[row, col] = 1.0
                between[col, row] = 1.0
    within = np.zeros(C)
    for (i, _j), k in leaf_idx.items():
        if classes[k].count > 1:
            within[k] = 2.0

    weighted = np.zeros(C)
    for (i, _j), k in center_idx.items():
        weighted[k] = 2.0 ** ((n - i) / q)
    meta = {
        "family": kind,
        "params": {"p0": p0, "n": n, "m": m_n, "tau": tau_list},
        "witnesses": {"level-weighted": weighted.tolist()},
    }
    return finish(classes, within, between, meta, caps)


# -- second generation ---------------------------------------------------


def _two_tier(kind, tau, tops, params_out, caps, witnesses=None):
    """Hub y0, tau light middles y_i, tau tops z_i; only paired links short."""
    C = 2 * tau + 1
    check_class_budget(C, caps, kind)
    classes = [PointClass("y0", 1, 1.0)]
    classes += [PointClass(f"y{i}", 1, 1.0 / tau) for i in range(1, tau + 1)]
    classes += [PointClass(f"z{i}", 1, float(tops[i - 1])) for i in range(1, tau + 1)]
    between = np.full((C, C), 2.0)
    idx = np.arange(1, tau + 1)
    between[0, idx] = 1.0
    between[idx, 0] = 1.0
    between[idx, idx + tau] = 1.0
    between[idx + tau, idx] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.zeros(C)
    if witnesses is None:
        witnesses = {}
    witnesses.setdefault("hub-indicator", [1.0] + [0.0] * (2 * tau))
    meta = {"family": kind, "params": params_out, "witnesses": witnesses}
    return finish(classes, within, between, meta, caps)


def gen2_simple(params, caps):
    kind = "gen2_simple"
    _check_extras(params, kind, {"tau", "F"})
    tau = _as_int(params.get("tau"), kind, "tau", minimum=1)
    if "F" not in params:
        raise BuildError(f"{kind}: missing parameter 'F'")
    F = [float(v) for v in params["F"]]
    if len(F) != tau:
        raise BuildError(f"{kind}: F must list tau={tau} top masses")
    if not all(v > 0 for v in F):
        raise BuildError(f"{kind}: top masses must be positive")
    return _two_tier(kind, tau, F, {"tau": tau, "F": F}, caps)


def gen2_basic(params, caps):
    kind = "gen2_basic"
    _check_extras(params, kind, {"tau", "d", "m"})
    tau = _as_int(params.get("tau"), kind, "tau", minimum=1)
    d = float(params.get("d", 3.0))
    if not 1.0 < d <= 3.0:
        raise BuildError(f"{kind}: d must lie in (1, 3], got {d}")
    m = float(params.get("m", 1.0))
    if not m >= 1.0:
        raise BuildError(f"{kind}: m must be >= 1")
    C = 2 * tau + 1
    check_class_budget(C, caps, kind)
    mid = (d + 1.0) / 2.0
    classes = [PointClass("y0", 1, 1.0)]
    classes += [PointClass(f"y{i}", 1, 1.0 / tau) for i in range(1, tau + 1)]
    classes += [PointClass(f"z{i}", 1, m) for i in range(1, tau + 1)]
    between = np.full((C, C), mid)
    idx = np.arange(1, tau + 1)
    between[1 : tau + 1, tau + 1 :] = d
    between[tau + 1 :, 1 : tau + 1] = d
    between[0, idx] = 1.0
    between[idx, 0] = 1.0
    between[idx, idx + tau] = 1.0
    between[idx + tau, idx] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.zeros(C)
    meta = {
        "family": kind,
        "params": {"tau": tau, "d": d, "m": m},
        "witnesses": {"hub-indicator": [1.0] + [0.0] * (2 * tau)},
    }
    return finish(classes, within, between, meta, caps)


def gen2_t1(params, caps):
    kind = "gen2_t1"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind, low_open=True, allow_inf=True)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    tau = 2**n if math.isinf(p0) else _floor_power_ratio(n + 1, p0, n, kind)
    par = {"p0": p0, "n": n, "tau": tau}
    return _two_tier(kind, tau, [float(n)] * tau, par, caps)


def gen2_t1_log(params, caps):
    kind = "gen2_t1_log"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind, low_open=True)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    base = float(n + 1) ** p0
    if not math.isfinite(base):
        raise BuildError(f"{kind}: power overflow in tau")
    tau = math.floor((math.log(n) + 1.0) * base / n)
    par = {"p0": p0, "n": n, "tau": tau}
    return _two_tier(kind, tau, [float(n)] * tau, par, caps)


def gen2_t2(params, caps):
    kind = "gen2_t2"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    if p0 == 1.0:
        check_mass(2**n, caps, kind)
        tops = [float(2**i) for i in range(1, n + 1)]
        par = {"p0": p0, "n": n, "tau": n}
        return _two_tier(kind, n, tops, par, caps)
    c, e, m_list, s_list = _doubling_blocks(p0, n, kind)
    tau = sum(s_list)
    tops: list[float] = []
    for m_j, s_j in zip(m_list, s_list):
        tops.extend([m_j] * s_j)
    par = {"p0": p0, "n": n, "c": c, "e": e, "m": m_list, "s": s_list, "tau": tau}
    return _two_tier(kind, tau, tops, par, caps)


def gen2_t3(params, caps):
    kind = "gen2_t3"
    _check_extras(params, kind, {"p0", "n"})
    p0 = _exponent(params, kind, low_open=True)
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    q, m_n, tau_list = _pyramid_data(p0, n, kind)
    total_tau = sum(tau_list)
    C = 2**n - 1 + 2 * total_tau
    check_class_budget(C, caps, kind)

    G = 2.0 ** ((1 - n) / q) / total_tau
    if not G > 0:
        raise BuildError(f"{kind}: middle mass underflow")
    assert math.isclose(G * total_tau, 2.0 ** ((1 - n) / q), rel_tol=1e-12)

    classes = []
    base_idx = {}
    for i in range(1, n + 1):
        F_i = 2.0 ** ((i - n) / q)
        for j in range(1, 2 ** (i - 1) + 1):
            base_idx[(i, j)] = len(classes)
            classes.append(PointClass(f"y{i}.{j}", 1, F_i))
    n_base = len(classes)
    mid_idx = {}
    for i in range(1, n + 1):
        for k in range(1, tau_list[i - 1] + 1):
            mid_idx[(i, k)] = len(classes)
            classes.append(PointClass(f"m{i}.{k}", 1, G))
    up_idx = {}
    for i in range(1, n + 1):
        unit = m_n * i
        check_mass(unit, caps, kind)
        for k in range(1, tau_list[i - 1] + 1):
            up_idx[(i, k)] = len(classes)
            classes.append(PointClass(f"u{i}.{k}", 1, unit))

    base_mass = math.fsum(classes[k].unit_mass for k in range(n_base))
    mid_mass = G * total_tau
    assert m_n >= 2.0**n >= base_mass + mid_mass

    between = np.full((C, C), 2.0)
    between[:n_base, :n_base] = 1.0
    np.fill_diagonal(between, 0.0)
    for lv in range(1, n + 1):
        t_lv = tau_list[lv - 1]
        for k in range(1, t_lv + 1):
            mcol = mid_idx[(lv, k)]
            for i in range(1, lv + 1):
                j = (k * 2 ** (i - 1) + t_lv - 1) // t_lv
                row = base_idx[(i, j)]
                between[row, mcol] = 1.0
                between[mcol, row] = 1.0
            ucol = up_idx[(lv, k)]
            between[mcol, ucol] = 1.0
            between[ucol, mcol] = 1.0
    within = np.zeros(C)

    weighted = np.zeros(C)
    for (i, _j), k in base_idx.items():
        weighted[k] = 2.0 ** ((n - i) / q)
    meta = {
        "family": kind,
        "params": {"p0": p0, "n": n, "m": m_n, "tau": tau_list, "G": G},
        "witnesses": {"level-weighted": weighted.tolist()},
    }
    return finish(classes, within, between, meta, caps)


def gen2_modified(params, caps):
    """Two-tier masses under the stretched metric that decouples the tops."""
    kind = "gen2_modified"
    _check_extras(params, kind, {"subtype", "p0", "n"})
    subtype = _as_int(params.get("subtype"), kind, "subtype")
    if subtype not in (1, 2):
        raise BuildError(f"{kind}: subtype must be 1 or 2")
    n = _as_int(params.get("n"), kind, "n", minimum=1)
    if subtype == 1:
        p0 = _exponent(params, kind, low_open=True, allow_inf=True)
        tau = 2**n if math.isinf(p0) else _floor_power_ratio(n + 1, p0, n, kind)
        tops = [float(n)] * tau
    else:
        p0 = _exponent(params, kind)
        if p0 == 1.0:
            check_mass(2**n, caps, kind)
            tau = n
            tops = [float(2**i) for i in range(1, n + 1)]
        else:
            _c, _e, m_list, s_list = _doubling_blocks(p0, n, kind)
            tau = sum(s_list)
            tops = []
            for m_j, s_j in zip(m_list, s_list):
                tops.extend([m_j] * s_j)
    C = 2 * tau + 1
    check_class_budget(C, caps, kind)
    classes = [PointClass("y0", 1, 1.0)]
    classes += [PointClass(f"y{i}", 1, 1.0 / tau) for i in range(1, tau + 1)]
    classes += [PointClass(f"z{i}", 1, tops[i - 1]) for i in range(1, tau + 1)]
    between = np.zeros((C, C))
    idx = np.arange(1, tau + 1)
    between[0, 1 : tau + 1] = 1.0
    between[1 : tau + 1, 0] = 1.0
    between[0, tau + 1 :] = 2.0
    between[tau + 1 :, 0] = 2.0
    between[1 : tau + 1, 1 : tau + 1] = 2.0
    between[1 : tau + 1, tau + 1 :] = 3.0
    between[tau + 1 :, 1 : tau + 1] = 3.0
    between[tau + 1 :, tau + 1 :] = 3.0
    between[idx, idx + tau] = 1.0
    between[idx + tau, idx] = 1.0
    np.fill_diagonal(between, 0.0)
    within = np.zeros(C)
    meta = {
        "family": kind,
        "params": {"subtype": subtype, "p0": p0, "n": n, "tau": tau},
        "witnesses": {"hub-indicator": [1.0] + [0.0] * (2 * tau)},
    }
    return finish(classes, within, between, meta, caps)
