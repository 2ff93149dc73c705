"""Finite weighted metric spaces in orbit-compressed form.

A space is stored as a list of point classes. All members of a class are
interchangeable: they carry the same mass and the same distance profile.
``within[i]`` is the distance between two distinct members of class i,
``between[i][j]`` the distance between any member of i and any member of j.
This compression is what keeps the deep constructions here tractable: a class
may stand for astronomically many points while every ball, average and norm
remains computable from (count, unit_mass) pairs.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "TOL",
    "BuildError",
    "PointClass",
    "Space",
    "Ball",
    "ValidationReport",
    "leq",
    "close",
    "combine",
    "space_to_json",
    "space_from_json",
]

TOL = 1e-12


class BuildError(ValueError):
    """Raised when a construction cannot be realized within its caps."""


def leq(a: float, b: float, tol: float = TOL) -> bool:
    """a <= b up to relative/absolute tolerance (ties count as <=)."""
    return a <= b + tol * max(1.0, abs(a), abs(b))


def close(a: float, b: float, tol: float = TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class PointClass:
    id: str
    count: int
    unit_mass: float

    @property
    def mass(self) -> float:
        return self.count * self.unit_mass


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    expanded_checked: bool = False


@dataclass
class Ball:
    """A closed metric ball described per class.

    ``members`` maps class id to the number of included points. The center
    class always contributes at least the center itself.
    """

    center_class: str
    threshold: float
    members: dict[str, int]
    center_included: int = 1

    def mass(self, space: "Space") -> float:
        return math.fsum(
            self.members[c.id] * c.unit_mass for c in space.classes if self.members.get(c.id)
        )

    def key(self) -> tuple[int, ...]:
        # identity of the ball as a weighted set, independent of which
        # (center, radius) pair produced it
        return tuple(sorted((cid, n) for cid, n in self.members.items() if n))


class Space:
    def __init__(
        self,
        classes: Sequence[PointClass],
        within: Sequence[float],
        between: Sequence[Sequence[float]],
        metadata: Mapping | None = None,
    ):
        self.classes = list(classes)
        n = len(self.classes)
        if n == 0:
            raise BuildError("space needs at least one class")
        self.within = np.asarray(within, dtype=float).copy()
        self.between = np.asarray(between, dtype=float).copy()
        if self.within.shape != (n,) or self.between.shape != (n, n):
            raise BuildError("inconsistent distance table shapes")
        seen = set()
        for c in self.classes:
            if c.count < 1:
                raise BuildError(f"class {c.id}: count must be >= 1")
            if not (math.isfinite(c.unit_mass) and c.unit_mass > 0):
                raise BuildError(f"class {c.id}: unit_mass must be positive and finite")
            if c.unit_mass > 1e300 or c.mass > 1e300:
                raise BuildError(f"class {c.id}: mass overflow")
            if c.id in seen:
                raise BuildError(f"duplicate class id {c.id}")
            seen.add(c.id)
        self.metadata = dict(metadata or {})
        self._index = {c.id: k for k, c in enumerate(self.classes)}
        self._cache: dict = {}

    # -- basic accessors -------------------------------------------------

    def __len__(self) -> int:
        return len(self.classes)

    def index(self, class_id: str) -> int:
        return self._index[class_id]

    @property
    def counts(self) -> np.ndarray:
        return np.array([c.count for c in self.classes], dtype=float)

    @property
    def unit_masses(self) -> np.ndarray:
        return np.array([c.unit_mass for c in self.classes], dtype=float)

    @property
    def class_masses(self) -> np.ndarray:
        return self.counts * self.unit_masses

    @property
    def total_mass(self) -> float:
        return math.fsum(c.mass for c in self.classes)

    @property
    def point_count(self) -> int:
        return sum(c.count for c in self.classes)

    def diameter(self) -> float:
        n = len(self.classes)
        best = 0.0
        for i in range(n):
            if self.classes[i].count > 1:
                best = max(best, float(self.within[i]))
            for j in range(i + 1, n):
                best = max(best, float(self.between[i, j]))
        return best

    def min_unit_mass(self) -> float:
        return min(c.unit_mass for c in self.classes)

    # -- validation ------------------------------------------------------

    def validate(self, expand_limit: int = 2000) -> ValidationReport:
        """Report metric-axiom violations without raising.

        Symmetry and positivity are always checked on the class tables. The
        triangle inequality is checked on the fully expanded point set when
        that is small enough, otherwise on the class metric (which covers the
        same triples: within-distances play the role of same-class pairs).
        """
        v: list[str] = []
        n = len(self.classes)
        for i in range(n):
            if self.classes[i].count > 1 and not self.within[i] > 0:
                v.append(f"within[{self.classes[i].id}] not positive")
            for j in range(n):
                if i == j:
                    continue
                if not self.between[i, j] > 0:
                    v.append(f"between[{self.classes[i].id},{self.classes[j].id}] not positive")
                if not close(self.between[i, j], self.between[j, i]):
                    v.append(f"between[{self.classes[i].id},{self.classes[j].id}] asymmetric")
        expanded = self.point_count <= expand_limit
        if expanded:
            dist, _, _ = self.expanded_arrays()
            v.extend(_triangle_violations(dist, [f"pt{a}" for a in range(dist.shape[0])]))
        else:
            v.extend(_triangle_violations(self.between, [c.id for c in self.classes]))
            for i in range(n):
                if self.classes[i].count <= 1:
                    continue
                for j in range(n):
                    if j != i and not leq(self.within[i], 2 * self.between[i, j]):
                        v.append(
                            f"triangle violated within {self.classes[i].id} via {self.classes[j].id}"
                        )
        return ValidationReport(ok=not v, violations=v, expanded_checked=expanded)

    # -- expansion -------------------------------------------------------

    def expand(self, cap: int = 100_000) -> "Space":
        """Equivalent space with every count equal to 1."""
        if self.point_count > cap:
            raise BuildError(f"expansion cap exceeded: {self.point_count} > {cap}")
        classes = []
        parent = []
        for k, c in enumerate(self.classes):
            for a in range(c.count):
                classes.append(PointClass(f"{c.id}#{a}" if c.count > 1 else c.id, 1, c.unit_mass))
                parent.append(k)
        m = len(classes)
        between = np.zeros((m, m))
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                i, j = parent[a], parent[b]
                between[a, b] = self.within[i] if i == j else self.between[i, j]
        meta = dict(self.metadata)
        meta["expanded_from"] = [c.id for c in self.classes]
        meta["parent_class"] = parent
        return Space(classes, np.zeros(m), between, meta)

    def expanded_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(distance matrix, mass vector, parent-class vector) over points."""
        parent = np.repeat(
            np.arange(len(self.classes)), [c.count for c in self.classes]
        )
        masses = self.unit_masses[parent]
        d = self.between[np.ix_(parent, parent)].copy()
        same = parent[:, None] == parent[None, :]
        d[same] = self.within[parent][:, None].repeat(len(parent), axis=1)[same]
        np.fill_diagonal(d, 0.0)
        return d, masses, parent

    # -- balls -----------------------------------------------------------

    def critical_radii(self, center: str) -> np.ndarray:
        """All thresholds at which the closed ball at ``center`` can change."""
        i = self.index(center)
        vals = [0.0]
        if self.classes[i].count > 1:
            vals.append(float(self.within[i]))
        vals.extend(float(self.between[i, j]) for j in range(len(self.classes)) if j != i)
        vals.sort()
        out = [vals[0]]
        for x in vals[1:]:
            if not close(x, out[-1]):
                out.append(x)
        return np.array(out)

    def closed_ball(self, center: str, d: float) -> Ball:
        if d < 0:
            raise ValueError("radius must be nonnegative")
        i = self.index(center)
        members: dict[str, int] = {}
        for j, c in enumerate(self.classes):
            if j == i:
                members[c.id] = c.count if (c.count > 1 and leq(self.within[i], d)) else 1
            elif leq(self.between[i, j], d):
                members[c.id] = c.count
        return Ball(center_class=center, threshold=float(d), members=members)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return space_to_json(self)

    def copy_with_metadata(self, **extra) -> "Space":
        meta = dict(self.metadata)
        meta.update(extra)
        return Space(self.classes, self.within, self.between, meta)


def _triangle_violations(dist: np.ndarray, labels: list[str], report_cap: int = 5) -> list[str]:
    """Vectorized triangle-inequality scan over a full distance matrix."""
    out: list[str] = []
    total = 0
    m = dist.shape[0]
    for k in range(m):
        via = dist[:, k][:, None] + dist[k, :][None, :]
        slack = TOL * np.maximum(1.0, np.maximum(np.abs(dist), np.abs(via)))
        bad = dist > via + slack
        if bad.any():
            total += int(bad.sum())
            for a, b in zip(*np.nonzero(bad)):
                if len(out) < report_cap:
                    out.append(
                        f"triangle violated ({labels[a]},{labels[b]}) via {labels[k]}: "
                        f"{dist[a, b]:.6g} > {via[a, b]:.6g}"
                    )
    if total > len(out):
        out.append(f"... {total} triangle violations in total")
    return out


def space_to_json(space: Space) -> str:
    payload = {
        "classes": [
            {"id": c.id, "count": c.count, "unit_mass": c.unit_mass} for c in space.classes
        ],
        "within": [float(w) for w in space.within],
        "between": [[float(x) for x in row] for row in space.between],
    }
    return json.dumps(payload, indent=2)


def space_from_json(text: str) -> Space:
    payload = json.loads(text)
    classes = [
        PointClass(str(c["id"]), int(c["count"]), float(c["unit_mass"]))
        for c in payload["classes"]
    ]
    return Space(classes, payload["within"], payload["between"])


def _rescaled_tables(space: Space) -> tuple[np.ndarray, np.ndarray, float]:
    diam = space.diameter()
    scale = 1.0 / (2.0 * diam) if diam > 0 else 1.0
    return space.within * scale, space.between * scale, scale


def combine(
    components: Sequence[Space],
    mode: str = "plain",
    kappa0: float | None = None,
) -> Space:
    """Glue components into one space, components mutually far apart.

    Every component is shrunk to diameter < 1 (factor 1/(2*diam)) and gets its
    mass rescaled; points of different components sit at one common cross
    distance. Modes:

    * ``plain``   — component n has total mass exactly 2^-n, cross distance 2.
    * ``kappa``   — same masses, cross distance kappa0 + 1.
    * ``lorentz`` — masses form a cascade, 2*total(n+1) = min unit mass(n),
      cross distance 1.
    """
    if not components:
        raise BuildError("combine needs at least one component")
    if mode not in ("plain", "kappa", "lorentz"):
        raise BuildError(f"unknown combine mode {mode!r}")
    if mode == "kappa":
        if kappa0 is None or kappa0 < 1:
            raise BuildError("kappa mode needs kappa0 >= 1")
        cross = kappa0 + 1.0
    else:
        cross = 2.0 if mode == "plain" else 1.0

    classes: list[PointClass] = []
    component_of: list[int] = []
    ranges: list[tuple[int, int]] = []
    metric_scales: list[float] = []
    mass_scales: list[float] = []
    blocks_within: list[np.ndarray] = []
    blocks_between: list[np.ndarray] = []

    prev_min_unit = None
    for n, comp in enumerate(components, start=1):
        total = comp.total_mass
        if not total > 0:
            raise BuildError(f"component {n} has zero mass")
        w, b, mscale = _rescaled_tables(comp)
        if mode in ("plain", "kappa"):
            mass_scale = 2.0 ** (-n) / total
        else:
            if n == 1:
                mass_scale = 1.0 / total
            else:
                mass_scale = prev_min_unit / (2.0 * total)
        start = len(classes)
        for c in comp.classes:
            classes.append(PointClass(f"c{n}:{c.id}", c.count, c.unit_mass * mass_scale))
            component_of.append(n - 1)
        ranges.append((start, len(classes)))
        metric_scales.append(mscale)
        mass_scales.append(mass_scale)
        blocks_within.append(w)
        blocks_between.append(b)
        prev_min_unit = min(c.unit_mass for c in classes[start:])

    m = len(classes)
    within = np.zeros(m)
    between = np.full((m, m), cross)
    np.fill_diagonal(between, 0.0)
    for (start, end), w, b in zip(ranges, blocks_within, blocks_between):
        within[start:end] = w
        between[start:end, start:end] = b
    meta = {
        "combine_mode": mode,
        "cross_distance": cross,
        "component_of": component_of,
        "component_ranges": ranges,
        "metric_scales": metric_scales,
        "mass_scales": mass_scales,
    }
    if mode == "kappa":
        meta["kappa0"] = kappa0
    return Space(classes, within, between, meta)
