"""Reference sweep for the Lorentz-norm comparison constants.

Standalone script, pure stdlib, written and run before the library exists.
It measures, by random search, the worst observed ratios for

  * the quasi-triangle inequality     |f+g| vs |f| + |g|
  * the constant-average bound        |avg(f) * 1| vs |f|
  * the second-index embedding        |f|_{p,r} vs |f|_{p,q},  q <= r
  * disjoint-support comparability    |sum f_n| vs (sum |f_n|^q)^{1/q}
    under the mass-ordering hypothesis 2*mass(block n+1) <= min unit mass
    of block n, against the candidate ceiling 2^(1/p+1/q)

The printed ceilings get frozen into the test suite as regression bounds.
"""
from __future__ import annotations

import math
import random

INF = math.inf

PS = (1.0, 1.5, 2.0, 3.0)
QS = (1.0, 1.5, 2.0, INF)
TRIALS = 500
SEED = 20260823


def lorentz_norm(points: list[tuple[float, float]], p: float, q: float) -> float:
    """Quasinorm of a weighted value list: points = [(value, mass), ...]."""
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


def random_masses(rng: random.Random, n: int) -> list[float]:
    return [10.0 ** rng.uniform(-6.0, 6.0) for _ in range(n)]


def random_values(rng: random.Random, n: int) -> list[float]:
    return [
        10.0 ** rng.uniform(-6.0, 6.0) if rng.random() < 0.85 else 0.0
        for _ in range(n)
    ]


def sweep_triangle(p: float, q: float, rng: random.Random) -> float:
    worst = 0.0
    for _ in range(TRIALS):
        n = rng.randint(1, 12)
        w = random_masses(rng, n)
        a = random_values(rng, n)
        b = random_values(rng, n)
        den = lorentz_norm(list(zip(a, w)), p, q) + lorentz_norm(list(zip(b, w)), p, q)
        if den == 0.0:
            continue
        num = lorentz_norm([(a[i] + b[i], w[i]) for i in range(n)], p, q)
        worst = max(worst, num / den)
    return worst


def sweep_average(p: float, q: float, rng: random.Random) -> float:
    worst = 0.0
    for _ in range(TRIALS):
        n = rng.randint(1, 12)
        w = random_masses(rng, n)
        a = random_values(rng, n)
        den = lorentz_norm(list(zip(a, w)), p, q)
        if den == 0.0:
            continue
        favg = math.fsum(a[i] * w[i] for i in range(n)) / math.fsum(w)
        num = lorentz_norm([(favg, wi) for wi in w], p, q)
        worst = max(worst, num / den)
    return worst


def sweep_embedding(p: float, q: float, r: float, rng: random.Random) -> float:
    worst = 0.0
    for _ in range(TRIALS):
        n = rng.randint(1, 12)
        w = random_masses(rng, n)
        a = random_values(rng, n)
        den = lorentz_norm(list(zip(a, w)), p, q)
        if den == 0.0:
            continue
        worst = max(worst, lorentz_norm(list(zip(a, w)), p, r) / den)
    return worst


def random_cascade(rng: random.Random) -> list[list[tuple[float, float]]]:
    """Disjoint blocks with 2 * total(block n+1) <= min unit mass of block n."""
    blocks: list[list[tuple[float, float]]] = []
    cap = None
    for _ in range(rng.randint(2, 5)):
        n = rng.randint(1, 5)
        w = [rng.uniform(0.5, 2.0) for _ in range(n)]
        if cap is not None:
            scale = cap / (2.0 * math.fsum(w))
            w = [wi * scale for wi in w]
        v = [10.0 ** rng.uniform(-2.0, 2.0) for _ in range(n)]
        blocks.append(list(zip(v, w)))
        cap = min(w)
    return blocks


def sweep_disjoint(p: float, q: float, rng: random.Random) -> tuple[float, float]:
    worst_up = 0.0
    worst_down = 0.0
    for _ in range(TRIALS):
        blocks = random_cascade(rng)
        norms = [lorentz_norm(b, p, q) for b in blocks]
        if q == INF:
            stacked = max(norms)
        else:
            stacked = math.fsum(x ** q for x in norms) ** (1.0 / q)
        merged = lorentz_norm([pt for b in blocks for pt in b], p, q)
        if stacked > 0.0:
            worst_up = max(worst_up, merged / stacked)
        if merged > 0.0:
            worst_down = max(worst_down, stacked / merged)
    return worst_up, worst_down


def fmt(x: float) -> str:
    return f"{x:.6f}"


def main() -> None:
    rng = random.Random(SEED)
    print("== quasi-triangle: |f+g| / (|f|+|g|) ==")
    for p in PS:
        for q in QS:
            print(f"p={p} q={q}: {fmt(sweep_triangle(p, q, rng))}")
    print("== constant average: |avg(f)*1| / |f| ==")
    for p in PS:
        for q in QS:
            print(f"p={p} q={q}: {fmt(sweep_average(p, q, rng))}")
    print("== embedding, q <= r: |f|_pr / |f|_pq ==")
    for p in PS:
        for qi, q in enumerate(QS):
            for r in QS[qi:]:
                print(f"p={p} q={q} r={r}: {fmt(sweep_embedding(p, q, r, rng))}")
    print("== disjoint cascade vs 2^(1/p+1/q) ==")
    for p in PS:
        for q in QS:
            up, down = sweep_disjoint(p, q, rng)
            ceil = 2.0 ** (1.0 / p + (0.0 if q == INF else 1.0 / q))
            print(
                f"p={p} q={q}: up={fmt(up)} down={fmt(down)} "
                f"candidate={fmt(ceil)} ok={max(up, down) <= ceil + 1e-9}"
            )


if __name__ == "__main__":
    main()
