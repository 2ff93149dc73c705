"""Slow reference implementations used as oracles in tests.

Everything here works on the fully expanded point set, straight from the
definitions, with no sorting tricks or caching. Keep it dumb.
"""
from __future__ import annotations

import math

import numpy as np


def expand_points(space):
    """(dist, mass, parent_class) for the expanded point set."""
    ids = [c.id for c in space.classes]
    parent = []
    mass = []
    for k, c in enumerate(space.classes):
        parent.extend([k] * c.count)
        mass.extend([c.unit_mass] * c.count)
    P = len(parent)
    dist = np.zeros((P, P))
    for a in range(P):
        for b in range(P):
            if a == b:
                continue
            ca, cb = parent[a], parent[b]
            if ca == cb:
                dist[a, b] = space.within[ca]
            else:
                dist[a, b] = space.between[ca, cb]
    return dist, np.array(mass), parent


def maximal_brute(space, values, kappa=1.0, centered=True, tol=1e-12):
    """Pointwise maximal function from the definition; returns class values.

    Also asserts that points of one class all get the same value, which any
    correct implementation must satisfy by symmetry.
    """
    dist, mass, parent = expand_points(space)
    P = len(parent)
    vals = np.array([values[parent[a]] for a in range(P)])
    out_pts = np.zeros(P)
    for x in range(P):
        centers = [x] if centered else range(P)
        best = -math.inf
        for y in centers:
            for s in sorted(set(dist[y])):
                if dist[y, x] > s + tol * max(1.0, s):
                    continue
                in_ball = dist[y] <= s + tol * np.maximum(1.0, s)
                big = dist[y] <= kappa * s + tol * max(1.0, kappa * s)
                num = float(np.sum(mass[in_ball] * vals[in_ball]))
                den = float(np.sum(mass[big]))
                best = max(best, num / den)
        out_pts[x] = best
    out = np.zeros(len(space))
    for a in range(P):
        k = parent[a]
        if out[k] == 0.0:
            out[k] = out_pts[a]
        else:
            assert abs(out[k] - out_pts[a]) <= 1e-9 * max(1.0, out[k])
    return out


def lorentz_brute(space, values, p, q):
    """Lorentz norm from the point-level decreasing rearrangement."""
    dist, mass, parent = expand_points(space)
    pairs = sorted(
        ((float(values[parent[a]]), float(mass[a])) for a in range(len(parent))),
        key=lambda t: -t[0],
    )
    pairs = [(v, m) for v, m in pairs if v > 0]
    if not pairs:
        return 0.0
    if math.isinf(q):
        t = 0.0
        best = 0.0
        for v, m in pairs:
            t += m
            best = max(best, v * t ** (1.0 / p))
        return best
    acc = 0.0
    t_prev = 0.0
    t = 0.0
    for v, m in pairs:
        t += m
        acc += (v**q) * (t ** (q / p) - t_prev ** (q / p))
        t_prev = t
    return ((p / q) * acc) ** (1.0 / q)


def balls_brute(space, tol=1e-12):
    """All distinct closed balls as frozensets of point indices."""
    dist, mass, parent = expand_points(space)
    P = len(parent)
    out = set()
    for y in range(P):
        for s in sorted(set(dist[y])):
            members = frozenset(
                a for a in range(P) if dist[y, a] <= s + tol * max(1.0, s)
            )
            out.add(members)
    return out, mass, parent
