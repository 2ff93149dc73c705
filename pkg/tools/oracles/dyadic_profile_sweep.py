"""Reference sweep for the dyadic-profile comparability constant.

For g on a finite weighted point set define the dyadic profile
S g(n) = 2^n * d_g(2^n)^(1/p), n in Z, where d_g is the distribution
function.  The sweep measures the worst two-sided ratio between
|S g|_{l^q} and |g|_{p,q} over random inputs whose masses and values
span many orders of magnitude.  The observed corridor is frozen into
the tests as a regression window.

Standalone, stdlib only.
"""
from __future__ import annotations

import math
import random

INF = math.inf

GRID = ((1.0, 1.0), (1.0, 2.0), (1.5, 1.5), (2.0, 1.0), (2.0, 2.0), (2.0, INF))
TRIALS = 500


def lorentz_norm(points: list[tuple[float, float]], p: float, q: float) -> float:
    pts = sorted(((v, w) for v, w in points if v > 0.0), key=lambda t: -t[0])
    if not pts:
        return 0.0
    levels: list[list[float]] = []
    total = 0.0
    for v, w in pts:
        total += w
        if levels and levels[-1][0] == v:
            levels[-1][1] = total
        else:
            levels.append([v, total])
    if q == INF:
        return max(v * t ** (1.0 / p) for v, t in levels)
    terms = []
    prev = 0.0
    for v, t in levels:
        terms.append(v ** q * (p / q) * (t ** (q / p) - prev ** (q / p)))
        prev = t
    return math.fsum(terms) ** (1.0 / q)


def distribution(points: list[tuple[float, float]], t: float) -> float:
    return math.fsum(w for v, w in points if v > t)


def profile_norm(points: list[tuple[float, float]], p: float, q: float) -> float:
    vmax = max((v for v, _ in points if v > 0.0), default=0.0)
    vmin = min((v for v, _ in points if v > 0.0), default=0.0)
    if vmax == 0.0:
        return 0.0
    n_min = math.floor(math.log2(vmin)) - 1
    n_max = math.ceil(math.log2(vmax)) + 1
    vals = []
    for n in range(n_min, n_max + 1):
        d = distribution(points, 2.0 ** n)
        if d > 0.0:
            vals.append(2.0 ** n * d ** (1.0 / p))
    if not vals:
        return 0.0
    if q == INF:
        return max(vals)
    return math.fsum(x ** q for x in vals) ** (1.0 / q)


def main() -> None:
    for seed in (1, 2):
        rng = random.Random(seed)
        print(f"== seed {seed} ==")
        for p, q in GRID:
            up = 0.0
            down = 0.0
            for _ in range(TRIALS):
                n = rng.randint(1, 15)
                pts = [
                    (10.0 ** rng.uniform(-5.0, 5.0), 10.0 ** rng.uniform(-5.0, 5.0))
                    for _ in range(n)
                ]
                g_norm = lorentz_norm(pts, p, q)
                s_norm = profile_norm(pts, p, q)
                if g_norm > 0.0 and s_norm > 0.0:
                    up = max(up, s_norm / g_norm)
                    down = max(down, g_norm / s_norm)
            print(f"p={p} q={q}: S/g max={up:.6f}  g/S max={down:.6f}")


if __name__ == "__main__":
    main()
