"""Hand oracle for the dyadic layer split on a 4-class unit-mass space.

f = (8, 4, 2, 1), p = 1, lambda = 3.  Computes the dyadic profile
S f(n) = 2^n * d_f(2^n), the exceedance set N_lambda, and the split
f = f0 + f1 where f0 keeps the layers selected by min N_lambda.
The frozen expectations: N_3 = {1, 2}, f0 = (8,4,2,0), f1 = (0,0,0,1).

Standalone, stdlib only.
"""
from __future__ import annotations

from fractions import Fraction


def main() -> None:
    f = [Fraction(8), Fraction(4), Fraction(2), Fraction(1)]
    masses = [Fraction(1)] * 4
    lam = Fraction(3)

    def dist(t: Fraction) -> Fraction:
        return sum(m for v, m in zip(f, masses) if v > t)

    # window: 2^{n_min} < min positive value = 1, 2^{n_max} >= max = 8
    n_min, n_max = -1, 3
    profile = {n: Fraction(2) ** n * dist(Fraction(2) ** n) for n in range(n_min, n_max + 1)}
    print("profile:", {n: str(v) for n, v in profile.items()})

    exceed = sorted(n for n, v in profile.items() if v > lam)
    print("N_lambda:", exceed)
    assert exceed == [1, 2]

    n_m = exceed[0]
    # f0 keeps the layers of f above level 2^{n_m}; the telescoping union of
    # E_{n_k} \ E_{n_{k-1}} slabs collapses to E_{n_m} = {f >= 2^{n_m}}
    f0 = [v if v >= Fraction(2) ** n_m else Fraction(0) for v in f]
    f1 = [v - v0 for v, v0 in zip(f, f0)]
    print("f0:", [str(x) for x in f0])
    print("f1:", [str(x) for x in f1])
    assert f0 == [8, 4, 2, 0] and f1 == [0, 0, 0, 1]

    # exact dichotomy of the split profile
    def dist0(t: Fraction) -> Fraction:
        return sum(m for v, m in zip(f0, masses) if v > t)

    for n in range(n_min, n_max + 1):
        s0 = Fraction(2) ** n * dist0(Fraction(2) ** n)
        if n >= n_m:
            assert s0 == profile[n], (n, s0, profile[n])
        else:
            assert s0 <= min(lam, profile[n]), (n, s0)
    print("split dichotomy: exact (equality for n >= min exceedance, cap below)")


if __name__ == "__main__":
    main()
