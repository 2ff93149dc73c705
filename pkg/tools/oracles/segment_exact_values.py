"""Exact rational evaluation of the modified centered maximal operator on
the geometric segment space (subtype 1, kappa = 2, step d_i = 3^i,
unit masses), applied to the indicator of the left endpoint.

Enumerates every candidate radius directly from the definition using
Fractions, so the result is exact.  The expected closed form frozen by
this oracle: value at x_j equals 1/(j+1) for every j.

Standalone, stdlib only.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import accumulate


def segment_distances(n: int, base: int) -> list[list[Fraction]]:
    steps = [Fraction(base) ** i for i in range(1, n + 1)]
    pos = [Fraction(0), *accumulate(steps)]
    return [[abs(pos[a] - pos[b]) for b in range(n + 1)] for a in range(n + 1)]


def centered_modified_maximal(
    dist: list[list[Fraction]], masses: list[Fraction], f: list[Fraction], kappa: int
) -> list[Fraction]:
    npts = len(masses)
    out = []
    for j in range(npts):
        best = Fraction(0)
        for d in sorted(set(dist[j])):
            num = sum(f[k] * masses[k] for k in range(npts) if dist[j][k] <= d)
            den = sum(masses[k] for k in range(npts) if dist[j][k] <= kappa * d)
            best = max(best, num / den)
        out.append(best)
    return out


def main() -> None:
    ok = True
    for n in range(1, 13):
        dist = segment_distances(n, base=3)
        masses = [Fraction(1)] * (n + 1)
        f = [Fraction(1)] + [Fraction(0)] * n
        values = centered_modified_maximal(dist, masses, f, kappa=2)
        expect = [Fraction(1, j + 1) for j in range(n + 1)]
        match = values == expect
        ok = ok and match
        print(f"n={n:2d} exact-match={match} values={[str(v) for v in values]}")
    print("ALL EXACT 1/(j+1):", ok)


if __name__ == "__main__":
    main()
