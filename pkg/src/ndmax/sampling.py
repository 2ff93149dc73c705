"""Random finite spaces and functions for measurement sweeps.

Several constants in this package (the dyadic-profile comparability factor,
the split-inequality baselines) are measured over seeded random inputs and
then frozen as regression corridors.  The generator here is therefore part
of the contract: the draw order below must stay fixed, or the frozen
numbers stop being reproducible.

Per space, in order: class count, planar coordinates (class distances are
Euclidean, so the triangle inequality is automatic), per-class point counts,
log-uniform unit masses, then a uniform vector scaling each within-class
diameter against twice the nearest-neighbour distance.  Function values are
drawn log-uniform with a fixed zero probability.
"""

from __future__ import annotations

import numpy as np

from .space import PointClass, Space
from .zoo import finish, resolve_caps

__all__ = ["random_space", "random_values"]


def random_space(
    rng: np.random.Generator,
    max_classes: int = 20,
    max_count: int = 5,
    unit_exp_range: tuple[float, float] = (-4.0, 4.0),
) -> Space:
    """One random orbit-compressed space with a valid (Euclidean) metric."""
    C = int(rng.integers(1, max_classes + 1))
    for _ in range(100):
        coords = rng.uniform(0.0, 1.0, size=(C, 2))
        diff = coords[:, None, :] - coords[None, :, :]
        between = np.hypot(diff[..., 0], diff[..., 1])
        if C == 1 or between[~np.eye(C, dtype=bool)].min() > 1e-6:
            break
    else:
        raise RuntimeError("could not separate random class positions")

    counts = rng.integers(1, max_count + 1, size=C)
    lo, hi = unit_exp_range
    units = 10.0 ** rng.uniform(lo, hi, size=C)
    scale = rng.uniform(0.1, 1.0, size=C)

    within = np.zeros(C)
    if C > 1:
        off = between + np.eye(C) * (between.max() + 1.0)
        nearest = off.min(axis=1)
        multi = counts > 1
        within[multi] = 2.0 * scale[multi] * nearest[multi]
    elif counts[0] > 1:
        within[0] = scale[0]

    classes = [
        PointClass(f"c{k}", int(counts[k]), float(units[k])) for k in range(C)
    ]
    return finish(classes, within, between, {"family": "random"}, resolve_caps(None))


def random_values(
    rng: np.random.Generator,
    space: Space,
    zero_prob: float = 0.15,
    exp_range: tuple[float, float] = (-4.0, 4.0),
) -> np.ndarray:
    """Nonnegative class values: zero with fixed probability, else log-uniform."""
    C = len(space)
    zero = rng.random(C) < zero_prob
    lo, hi = exp_range
    mags = 10.0 ** rng.uniform(lo, hi, size=C)
    return np.where(zero, 0.0, mags)
