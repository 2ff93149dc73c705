"""Minimal admissible exponent pair for the counting-measure star family.

Given multiplicities m = (1, 2), find the lexicographically smallest
strictly increasing positive integers (h1, h2) with
floor(2^{h2} / m2) > 2^{h1}.  Frozen expectation: (1, 3).

Standalone, stdlib only.
"""
from __future__ import annotations


def minimal_h(m: list[int]) -> list[int]:
    h = [1]
    for j in range(1, len(m)):
        hj = h[-1] + 1
        while (2 ** hj) // m[j] <= 2 ** h[-1]:
            hj += 1
        h.append(hj)
    return h


def main() -> None:
    h = minimal_h([1, 2])
    print("minimal h for m=(1,2):", tuple(h))
    assert tuple(h) == (1, 3)
    # a couple more for regression flavor
    print("minimal h for m=(1,2,4):", tuple(minimal_h([1, 2, 4])))
    print("minimal h for m=(1,3,9):", tuple(minimal_h([1, 3, 9])))


if __name__ == "__main__":
    main()
