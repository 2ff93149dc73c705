"""Catalog of finite nondoubling test spaces.

Every constructor is deterministic: a recipe names exactly one space,
including its metadata and registered witness functions. Derived integer
sequences follow a greedy minimal-admissible rule, so there is no hidden
choice left to the caller. Constraint violations, class-count blowups and
mass overflows raise BuildError instead of returning a partially built
space.

Witnesses are stored in ``space.metadata["witnesses"]`` as plain value
lists aligned with the class order, which is the format the constant
searches consume directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..maximal import ClassFunction
from ..space import BuildError, Space

__all__ = [
    "SpaceRecipe",
    "KINDS",
    "DEFAULT_CAPS",
    "build",
    "witness",
    "list_kinds",
    "kind_schema",
    "bmo_b15_sequence",
]

DEFAULT_CAPS = {"max_classes": 6000, "max_mass": 1e300}


@dataclass(frozen=True)
class SpaceRecipe:
    kind: str
    params: dict = field(default_factory=dict)


def resolve_caps(caps: dict | None) -> dict:
    out = dict(DEFAULT_CAPS)
    if caps:
        for key in caps:
            if key not in DEFAULT_CAPS:
                raise BuildError(f"unknown cap {key!r}")
        out.update({k: float(v) if k == "max_mass" else int(v) for k, v in caps.items()})
    if out["max_classes"] < 1 or out["max_mass"] <= 0:
        raise BuildError("caps must be positive")
    return out


def check_class_budget(n: int, caps: dict, kind: str) -> None:
    if n > caps["max_classes"]:
        raise BuildError(f"{kind}: needs {n} classes, cap is {caps['max_classes']}")


def check_mass(value: float, caps: dict, kind: str, what: str = "mass") -> float:
    """Guard a would-be mass value before it ever meets float conversion."""
    try:
        v = float(value)
    except OverflowError:
        raise BuildError(f"{kind}: {what} overflow") from None
    if not math.isfinite(v) or v > caps["max_mass"]:
        raise BuildError(f"{kind}: {what} overflow ({what} > {caps['max_mass']:g})")
    return v


# -- metric sanity at build time ----------------------------------------
#
# Class-level triangle checks are complete for these compressed metrics:
# a point-level violation always shows up either between three distinct
# classes or as within[i] > 2 * between[i, j]. Full cubic scans are cheap
# for small tables; large tables are accepted either via the interval
# shortcut (all positive distances inside a factor-2 band make triangles
# automatic) or a seeded sample.

_FULL_TRIANGLE_LIMIT = 400
_SAMPLE_TRIPLES = 200_000


def _metric_issues(space: Space) -> list[str]:
    C = len(space)
    B = space.between
    W = space.within
    issues: list[str] = []
    if not np.allclose(B, B.T, rtol=1e-12, atol=0.0):
        issues.append("between table not symmetric")
    if C > 1:
        off = B[~np.eye(C, dtype=bool)]
        if not np.all(off > 0):
            issues.append("nonpositive between distance")
        if not np.all(np.isfinite(off)):
            issues.append("nonfinite between distance")
    counts = space.counts
    multi = counts > 1
    if np.any(multi) and not np.all(W[multi] > 0):
        issues.append("nonpositive within distance on a multi-point class")
    if issues:
        return issues

    pos = [B[~np.eye(C, dtype=bool)]] if C > 1 else []
    if np.any(multi):
        pos.append(W[multi])
    if not pos:
        return issues
    vals = np.concatenate(pos)
    dmin, dmax = float(vals.min()), float(vals.max())
    if dmax <= 2.0 * dmin * (1.0 + 1e-12):
        return issues

    # within vs between: within[i] <= 2 * between[i, j] for all j != i
    if np.any(multi):
        big = dmax * np.eye(C)
        bad = W[:, None] > 2.0 * (B + big) + 1e-12 * max(1.0, dmax)
        bad &= multi[:, None]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            issues.append(
                f"within[{space.classes[i].id}] > 2*between[.,{space.classes[j].id}]"
            )

    slack = 1e-12 * max(1.0, dmax)
    if C <= _FULL_TRIANGLE_LIMIT:
        for k in range(C):
            via = B[:, k][:, None] + B[k, :][None, :]
            bad = B > via + slack
            bad[k, :] = False
            bad[:, k] = False
            np.fill_diagonal(bad, False)
            if bad.any():
                a, b = np.argwhere(bad)[0]
                issues.append(
                    f"triangle violated ({space.classes[a].id},{space.classes[b].id})"
                    f" via {space.classes[k].id}"
                )
                return issues
    else:
        rng = np.random.default_rng(987654321)
        a, b, k = rng.integers(0, C, size=(3, _SAMPLE_TRIPLES))
        distinct = (a != b) & (b != k) & (a != k)
        a, b, k = a[distinct], b[distinct], k[distinct]
        bad = B[a, b] > B[a, k] + B[k, b] + slack
        if bad.any():
            w = int(np.argmax(bad))
            issues.append(
                f"triangle violated ({space.classes[a[w]].id},{space.classes[b[w]].id})"
                f" via {space.classes[k[w]].id} (sampled)"
            )
    return issues


def finish(classes, within, between, metadata, caps) -> Space:
    """Shared tail of every builder: construct, cap-check, metric-check."""
    kind = metadata.get("family", "space")
    check_class_budget(len(classes), caps, kind)
    for c in classes:
        check_mass(c.count, caps, kind, "class size")
        try:
            class_mass = c.count * c.unit_mass
        except OverflowError:
            raise BuildError(f"{kind}: mass overflow") from None
        check_mass(class_mass, caps, kind)
    space = Space(classes, within, between, metadata)
    issues = _metric_issues(space)
    if issues:
        raise BuildError(f"{kind}: " + "; ".join(issues))
    return space


def finish_space(space: Space, caps) -> Space:
    """Same checks as finish() for a space that is already assembled."""
    kind = space.metadata.get("family", "space")
    check_class_budget(len(space), caps, kind)
    for c in space.classes:
        check_mass(c.count, caps, kind, "class size")
        check_mass(c.mass, caps, kind)
    issues = _metric_issues(space)
    if issues:
        raise BuildError(f"{kind}: " + "; ".join(issues))
    return space


# -- registry ------------------------------------------------------------

from . import bmo_spaces, generations, lattices, layered, segments  # noqa: E402

bmo_b15_sequence = bmo_spaces.bmo_b15_sequence

KINDS: dict[str, tuple] = {
    "gen1_star": (generations.gen1_star, "tau:int, d:(1,2]=2, m:[1,inf) or F:list"),
    "gen1_s1": (generations.gen1_s1, "p0:[1,inf], n:int"),
    "gen1_s1_log": (generations.gen1_s1_log, "p0:[1,inf), n:int"),
    "gen1_s2_1": (generations.gen1_s2_1, "n:int"),
    "gen1_s2": (generations.gen1_s2, "p0:(1,inf), n:int"),
    "gen1_s3": (generations.gen1_s3, "p0:(1,inf), n:int"),
    "gen2_simple": (generations.gen2_simple, "tau:int, F:list"),
    "gen2_basic": (generations.gen2_basic, "tau:int, d:(1,3], m:[1,inf)"),
    "gen2_t1": (generations.gen2_t1, "p0:(1,inf], n:int"),
    "gen2_t1_log": (generations.gen2_t1_log, "p0:(1,inf), n:int"),
    "gen2_t2": (generations.gen2_t2, "p0:[1,inf), n:int"),
    "gen2_t3": (generations.gen2_t3, "p0:(1,inf), n:int"),
    "gen2_modified": (generations.gen2_modified, "subtype:{1,2}, p0, n:int"),
    "segment": (segments.segment, "n:int, subtype:{1,2}, kappa (>=2 / >=3)"),
    "composite_prefix": (
        segments.composite_prefix,
        "family:{s_tilde,s_hat,t_tilde,t_hat} + family parameters, n:int",
    ),
    "typeI": (layered.typeI, "m_seq:list[int]"),
    "typeI_p1": (layered.typeI_p1, "m_seq:list[int] nondecreasing, m_seq[0]=1"),
    "typeII": (layered.typeII, "p:(1,inf), q<=r, r:(1,inf), l:int"),
    "typeII_inf": (layered.typeII_inf, "p:(1,inf), q:[1,inf), l:int"),
    "typeIII": (layered.typeIII, "p:(1,inf), N:int, M:int, K:[1,inf), L:int"),
    "typeIII_cor": (layered.typeIII_cor, "p:(1,inf), lam:(0,inf), a:int, b:int, kappa:int"),
    "composite_W": (layered.composite_W, "p, gamma, a:int, b:int, R:(1,inf), eps:(0,inf), n:int"),
    "W_leq": (layered.W_leq, "p, delta, omega, n:int"),
    "W_less": (layered.W_less, "p, delta, omega, n:int"),
    "bmo_matrix": (bmo_spaces.bmo_matrix, "M:list of rows (row n has n positive ints, M[0]=[1])"),
    "bmo_c1": (bmo_spaces.bmo_c1, "p0:[1,inf), depth:int"),
    "bmo_c1_log": (bmo_spaces.bmo_c1_log, "p0:[1,inf), depth:int"),
    "bmo_c1_var": (bmo_spaces.bmo_c1_var, "P:list of exponents for steps 2..depth, depth:int"),
    "bmo_lacunary": (bmo_spaces.bmo_lacunary, "depth:int"),
    "lattice": (lattices.lattice, "example:{C,D,A-discrete,B-discrete,custom}, R:int, weights?"),
}


def list_kinds() -> list[str]:
    return sorted(KINDS)


def kind_schema(kind: str) -> str:
    if kind not in KINDS:
        raise BuildError(f"unknown kind {kind!r}")
    return KINDS[kind][1]


def build(recipe: SpaceRecipe, caps: dict | None = None) -> Space:
    if recipe.kind not in KINDS:
        raise BuildError(f"unknown kind {recipe.kind!r}")
    builder = KINDS[recipe.kind][0]
    return builder(dict(recipe.params), resolve_caps(caps))


def witness(source, name: str) -> ClassFunction:
    """Registered witness function, from a recipe or an already built space."""
    space = source if isinstance(source, Space) else build(source)
    table = space.metadata.get("witnesses", {})
    if name not in table:
        known = ", ".join(sorted(table)) or "none"
        raise BuildError(f"unknown witness {name!r} (registered: {known})")
    return ClassFunction.of(space, np.asarray(table[name], dtype=float))
