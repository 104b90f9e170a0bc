"""Additive and multiplicative representation counts and exact energies.

All results are exact integers. The direct kernels histogram the |A||B|
pair sums; a dense FFT kernel takes over when |A||B| exceeds p*log2(p) and
its rounded output is checked against the pair count before it is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log2
from typing import Sequence

import numpy as np

from .errors import BadArity, FieldMismatch
from .fields import FpSet, PrimeField, check_same_field

# rounding of float FFT output is safe well below this magnitude
_FFT_SAFE = 2.0**45


@dataclass(frozen=True, eq=False)
class CountVector:
    """Length-p vector of representation counts indexed by residue."""

    field: PrimeField
    values: np.ndarray

    def __getitem__(self, x: int) -> int:
        return int(self.values[x % self.field.p])

    def total(self) -> int:
        return int(self.values.sum())

    def support(self) -> list[int]:
        return [int(x) for x in np.flatnonzero(self.values)]

    def to_json(self) -> dict:
        nz = np.flatnonzero(self.values)
        return {"p": self.field.p, "values": {str(int(x)): int(self.values[x]) for x in nz}}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountVector):
            return NotImplemented
        return self.field == other.field and bool(np.array_equal(self.values, other.values))


def _use_dense(na: int, nb: int, n: int) -> bool:
    return na * nb > n * max(1.0, log2(n)) and n * min(na, nb) < _FFT_SAFE


def _cyclic(fa: np.ndarray, fb: np.ndarray, *, correlate: bool) -> np.ndarray:
    n = len(fa)
    Fa = np.fft.rfft(fa)
    Fb = np.fft.rfft(fb)
    prod = np.conj(Fa) * Fb if correlate else Fa * Fb
    return np.rint(np.fft.irfft(prod, n)).astype(np.int64)


def _pair_histogram(xs: np.ndarray, ys: np.ndarray, n: int, *, correlate: bool) -> np.ndarray:
    """Histogram of y - x (correlate) or x + y mod n over all pairs."""
    if len(xs) == 0 or len(ys) == 0:
        return np.zeros(n, dtype=np.int64)
    if _use_dense(len(xs), len(ys), n):
        fa = np.bincount(xs, minlength=n).astype(np.float64)
        fb = np.bincount(ys, minlength=n).astype(np.float64)
        out = _cyclic(fa, fb, correlate=correlate)
        if int(out.sum()) == len(xs) * len(ys) and out.min() >= 0:
            return out
    idx = (ys[None, :] - xs[:, None]) if correlate else (ys[None, :] + xs[:, None])
    return np.bincount((idx % n).ravel(), minlength=n).astype(np.int64)


def corr_add(A: FpSet, B: FpSet, mode: str = "convolve") -> CountVector:
    """(A*B)(x) = #{a+b = x} or, with mode="correlate", (A∘B)(x) = #{b-a = x}."""
    check_same_field(A, B)
    if mode not in ("convolve", "correlate"):
        raise ValueError(f"unknown mode {mode!r}")
    vals = _pair_histogram(A.array(), B.array(), A.p, correlate=mode == "correlate")
    return CountVector(A.field, vals)


def log_image(A: FpSet) -> np.ndarray:
    """Discrete logs of the nonzero elements of A, as an int64 array."""
    arr = A.array()
    arr = arr[arr != 0]
    return A.field.dlog_table[arr]


def corr_mult(A: FpSet, B: FpSet) -> CountVector:
    """values[x] = #{(a, b) in A x B : a*b = x}, zero products included."""
    check_same_field(A, B)
    field = A.field
    p = field.p
    la, lb = log_image(A), log_image(B)
    hist = _pair_histogram(la, lb, p - 1, correlate=False)
    vals = np.zeros(p, dtype=np.int64)
    vals[field.pow_table] = hist
    vals[0] = len(A) * len(B) - len(la) * len(lb)
    return CountVector(field, vals)


def cf_eval(sets: Sequence[FpSet], offsets: Sequence[int]) -> int:
    """Cf_{k+1}(f_1..f_{k+1})(x_1..x_k) = sum_z f_1(z) f_2(z+x_1) ... f_{k+1}(z+x_k)."""
    k = len(offsets)
    if len(sets) != k + 1 or not 1 <= k <= 8:
        raise BadArity(f"need k+1 sets for k offsets with 1 <= k <= 8, got {len(sets)} and {k}")
    check_same_field(*sets)
    mask = sets[0].mask
    for A, x in zip(sets[1:], offsets):
        mask &= A.translate(-x).mask
    return mask.bit_count()


def energy_add(A: FpSet, B: FpSet | None = None) -> int:
    """E+(A, B) = #{a1 + b1 = a2 + b2}."""
    B = A if B is None else B
    v = corr_add(A, B, "convolve").values
    return int(np.dot(v, v))


def energy_mult(A: FpSet, B: FpSet | None = None) -> int:
    """E×(A, B) = #{a1 b1 = a2 b2}; quadruples with zero products are counted."""
    B = A if B is None else B
    v = corr_mult(A, B).values
    return int(np.dot(v, v))


def ratio_histogram(A: FpSet) -> np.ndarray:
    """r(u) = #{(a1, a2) in A* x A* : a2/a1 = g^u}, indexed by discrete log u.

    E×(A, B) restricted to nonzero elements equals sum_u r_A(u) r_B(u).
    """
    la = log_image(A)
    return _pair_histogram(la, la, A.p - 1, correlate=True)


def energy_bound_cs(na: int, nb: int) -> int:
    """min{|A|^2|B|, |B|^2|A|, ceil(|A|^{3/2}|B|^{3/2})} computed in integers."""
    prod3 = (na * nb) ** 3
    r = isqrt(prod3)
    if r * r < prod3:
        r += 1
    return min(na * na * nb, nb * nb * na, r)


__all__ = [
    "CountVector",
    "FieldMismatch",
    "cf_eval",
    "corr_add",
    "corr_mult",
    "energy_add",
    "energy_bound_cs",
    "energy_mult",
    "log_image",
    "ratio_histogram",
]
