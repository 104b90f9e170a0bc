"""Literal nested-loop evaluations of the counted quantities.

Deliberately naive: each function is a direct transcription of the defining
count and shares no code with the fast kernels it is used to check.
"""

from __future__ import annotations

from itertools import product


def energy_add_naive(A, B, p: int) -> int:
    return sum(
        1
        for a1, a2, b1, b2 in product(A, A, B, B)
        if (a1 + b1 - a2 - b2) % p == 0
    )


def energy_mult_naive(A, B, p: int) -> int:
    return sum(
        1
        for a1, a2, b1, b2 in product(A, A, B, B)
        if (a1 * b1 - a2 * b2) % p == 0
    )


def t_naive(A, B, C, D, p: int) -> int:
    """sum over c, d of #{(a1, a2, b1, b2) : (a1-c)(b1-d) = (a2-c)(b2-d)}."""
    total = 0
    for c, d in product(C, D):
        for a1, a2, b1, b2 in product(A, A, B, B):
            if ((a1 - c) * (b1 - d) - (a2 - c) * (b2 - d)) % p == 0:
                total += 1
    return total


def dual_energy_naive(A, B, C, p: int) -> int:
    return t_naive(A, B, C, [0], p)


def cf3_naive(C, A1, A2, x: int, y: int, p: int) -> int:
    """Cf_3(C, A1, A2)(x, y) = sum_z C(z) A1(z + x) A2(z + y)."""
    s1, s2 = set(A1), set(A2)
    return sum(1 for z in C if (z + x) % p in s1 and (z + y) % p in s2)


def t_star_naive(A, C, p: int) -> int:
    total = 0
    for lam in range(p):
        inner = sum(cf3_naive(C, A, A, x, lam * x % p, p) for x in range(1, p))
        total += inner * inner
    return total


def diff_count_naive(A, p: int) -> list[int]:
    """(A∘A)(x) for every x."""
    out = [0] * p
    for a, b in product(A, A):
        out[(b - a) % p] += 1
    return out
