"""Prime fields, multiplicative subgroups, cosets and subsets of F_p.

Sets are stored twice: as a Python integer bitmask (bit x set iff x is a
member) for fast intersections and rotations, and as a sorted tuple of
residues for iteration.
"""

from __future__ import annotations

import os
from functools import cached_property, lru_cache
from math import isqrt
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import FieldMismatch, NotADivisor, NotPrime, ParseError, TooLarge, ZeroDilation

DEFAULT_MAX_P = 10**7


def max_p() -> int:
    """Table limit, overridable through SUBGROUP_LAB_MAX_P."""
    raw = os.environ.get("SUBGROUP_LAB_MAX_P")
    return int(raw) if raw else DEFAULT_MAX_P


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def smallest_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise NotPrime(p)


def _power_table(g: int, p: int) -> np.ndarray:
    # table[j*B + i] = g^(jB) * g^i, vectorized over i; products stay below 2^62
    m = p - 1
    block = max(1, isqrt(m))
    head = np.empty(block, dtype=np.int64)
    x = 1
    for i in range(block):
        head[i] = x
        x = x * g % p
    step = x
    rows = -(-m // block)
    out = np.empty(rows * block, dtype=np.int64)
    lead = 1
    for j in range(rows):
        out[j * block:(j + 1) * block] = head * lead % p
        lead = lead * step % p
    return out[:m]


class PrimeField:
    """F_p together with its smallest primitive root and power/log tables.

    ``pow_table[i] = g**i % p`` for ``0 <= i < p-1`` and
    ``dlog_table[pow_table[i]] = i``; ``dlog_table[0]`` is -1.
    """

    def __init__(self, p: int):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p > max_p():
            raise TooLarge(f"p={p} exceeds table limit {max_p()}")
        self.p = p
        self.g = smallest_primitive_root(p)
        self.pow_table = _power_table(self.g, p)
        dlog = np.full(p, -1, dtype=np.int64)
        dlog[self.pow_table] = np.arange(p - 1, dtype=np.int64)
        self.dlog_table = dlog
        self.pow_table.flags.writeable = False
        self.dlog_table.flags.writeable = False

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return self.p - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField(p={self.p}, g={self.g})"

    def inv(self, x: int) -> int:
        return pow(x % self.p, -1, self.p)

    def dlog(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ValueError("0 has no discrete logarithm")
        return int(self.dlog_table[x])

    def set(self, elements: Iterable[int]) -> "FpSet":
        return FpSet(self, elements)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.p) - 1


@lru_cache(maxsize=64)
def _cached_field(p: int) -> PrimeField:
    return PrimeField(p)


def make_field(p: int) -> PrimeField:
    """Cached PrimeField; the table limit is re-checked on every call."""
    if p < 2:
        raise NotPrime(f"{p} is not prime")
    if p > max_p():
        raise TooLarge(f"p={p} exceeds table limit {max_p()}")
    return _cached_field(p)


make_field.cache_clear = _cached_field.cache_clear


def _mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


class FpSet:
    """Immutable subset of F_p."""

    __slots__ = ("field", "elements", "mask", "_hash")

    def __init__(self, field: PrimeField, elements: Iterable[int] = ()):
        p = field.p
        elems = tuple(sorted({int(x) % p for x in elements}))
        self.field = field
        self.elements = elems
        self.mask = _mask_of(elems)
        self._hash = None

    @classmethod
    def from_mask(cls, field: PrimeField, mask: int) -> "FpSet":
        out = cls.__new__(cls)
        out.field = field
        out.mask = mask
        elems = []
        x = 0
        m = mask
        while m:
            low = m & -m
            x = low.bit_length() - 1
            elems.append(x)
            m ^= low
        out.elements = tuple(elems)
        out._hash = None
        return out

    @property
    def p(self) -> int:
        return self.field.p

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and (self.mask >> (int(x) % self.p)) & 1 == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpSet):
            return NotImplemented
        return self.field.p == other.field.p and self.mask == other.mask

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.p, self.mask))
        return self._hash

    def __repr__(self) -> str:
        return f"FpSet(p={self.p}, {{{', '.join(map(str, self.elements))}}})"

    def __le__(self, other: "FpSet") -> bool:
        _same_field(self, other)
        return self.mask & ~other.mask == 0

    def __and__(self, other: "FpSet") -> "FpSet":
        _same_field(self, other)
        return FpSet.from_mask(self.field, self.mask & other.mask)

    def __or__(self, other: "FpSet") -> "FpSet":
        _same_field(self, other)
        return FpSet.from_mask(self.field, self.mask | other.mask)

    def __sub__(self, other: "FpSet | int") -> "FpSet":
        """Translation ``A - s`` for a residue, or the difference set ``A - B``."""
        if isinstance(other, FpSet):
            return sumset(self, other.dilate(-1))
        return self.translate(-int(other))

    def __add__(self, other: "FpSet | int") -> "FpSet":
        if isinstance(other, FpSet):
            return sumset(self, other)
        return self.translate(int(other))

    def array(self) -> np.ndarray:
        return np.fromiter(self.elements, dtype=np.int64, count=len(self.elements))

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.p, dtype=np.int64)
        out[list(self.elements)] = 1
        return out

    def translate(self, s: int) -> "FpSet":
        p = self.p
        s %= p
        if s == 0:
            return self
        m = self.mask
        rotated = ((m << s) | (m >> (p - s))) & self.field.full_mask
        return FpSet.from_mask(self.field, rotated)

    def dilate(self, lam: int) -> "FpSet":
        lam %= self.p
        if lam == 0:
            raise ZeroDilation("dilation by 0")
        if lam == 1:
            return self
        return FpSet(self.field, (lam * a for a in self.elements))

    def transform(self, lam: int, s: int = 0) -> "FpSet":
        """``{lam*a + s : a in A}``."""
        return self.dilate(lam).translate(s)

    def nonzero(self) -> "FpSet":
        return FpSet.from_mask(self.field, self.mask & ~1)


def transform(A: FpSet, lam: int, s: int = 0) -> FpSet:
    return A.transform(lam, s)


def sumset(A: FpSet, B: FpSet) -> FpSet:
    _same_field(A, B)
    if len(A) > len(B):
        A, B = B, A
    out = 0
    for a in A.elements:
        out |= B.translate(a).mask
    return FpSet.from_mask(A.field, out)


def _same_field(*sets: FpSet) -> None:
    p = sets[0].field.p
    for s in sets[1:]:
        if s.field.p != p:
            raise FieldMismatch(f"sets live in F_{p} and F_{s.field.p}")


check_same_field = _same_field


class Subgroup:
    """The unique subgroup of order t of F_p^*: ``{g^(n*l) : 0 <= l < t}``."""

    def __init__(self, field: PrimeField, t: int):
        if t < 1 or (field.p - 1) % t:
            raise NotADivisor(f"{t} does not divide p-1={field.p - 1}")
        self.field = field
        self.t = t
        self.n = (field.p - 1) // t
        self.generator = int(field.pow_table[self.n % (field.p - 1)]) if field.p > 2 else 1
        # ordered by exponent l, which indexes the characters
        self.ordered = tuple(int(x) for x in field.pow_table[:: self.n][:t])
        self.elements = FpSet(field, self.ordered)

    @property
    def order(self) -> int:
        return self.t

    @property
    def index(self) -> int:
        return self.n

    def __len__(self) -> int:
        return self.t

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.elements

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and other.field == self.field and other.t == self.t

    def __hash__(self) -> int:
        return hash(("Subgroup", self.field.p, self.t))

    def __repr__(self) -> str:
        return f"Subgroup(p={self.field.p}, t={self.t})"

    def exponent(self, x: int) -> int:
        """l with x = g^(n*l); raises ValueError off the subgroup."""
        d = self.field.dlog(x)
        if d % self.n:
            raise ValueError(f"{x} is not in {self!r}")
        return d // self.n

    def coset(self, xi: int) -> "Coset":
        return Coset(self, xi)

    def cosets(self) -> list["Coset"]:
        seen: set[int] = set()
        out = []
        for x in range(1, self.field.p):
            c = Coset(self, x)
            if c.representative not in seen:
                seen.add(c.representative)
                out.append(c)
        return out

    def with_zero(self) -> FpSet:
        return FpSet.from_mask(self.field, self.elements.mask | 1)


def subgroup_of_order(field: PrimeField, t: int) -> Subgroup:
    return Subgroup(field, t)


def subgroups(field: PrimeField) -> list[Subgroup]:
    return [Subgroup(field, t) for t in divisors(field.p - 1)]


class Coset:
    """``xi * Gamma`` with the minimal residue as canonical representative."""

    def __init__(self, subgroup: Subgroup, xi: int):
        p = subgroup.field.p
        xi %= p
        if xi == 0:
            raise ZeroDilation("coset representative must be nonzero")
        self.subgroup = subgroup
        self.elements = subgroup.elements.dilate(xi)
        self.representative = self.elements.elements[0]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Coset)
            and other.subgroup == self.subgroup
            and other.representative == self.representative
        )

    def __hash__(self) -> int:
        return hash(("Coset", self.subgroup.field.p, self.subgroup.t, self.representative))

    def __repr__(self) -> str:
        return f"Coset({self.representative}*G, p={self.subgroup.field.p}, t={self.subgroup.t})"

    def __contains__(self, x: object) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return self.subgroup.t


def parse_set(field: PrimeField, text: str) -> FpSet:
    """Parse a set literal.

    ``"2,5,6"`` lists residues, ``"G:6"`` is the order-6 subgroup and ``|``
    takes unions, so ``"G:6|0"`` is the subgroup with zero adjoined.
    """
    out = 0
    for part in text.split("|"):
        part = part.strip()
        if not part:
            continue
        try:
            if part.upper().startswith("G:"):
                out |= Subgroup(field, int(part[2:])).elements.mask
            else:
                out |= FpSet(field, (int(x) for x in part.split(",") if x.strip())).mask
        except ValueError as exc:
            if isinstance(exc, NotADivisor):
                raise
            raise ParseError(f"bad set literal {text!r}") from exc
    return FpSet.from_mask(field, out)


def format_set(A: FpSet | Sequence[int]) -> str:
    return ",".join(str(x) for x in A)
