"""Shifted-subgroup intersections, incidence sums and exhaustive structure searches."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf, isqrt, log2, nextafter, sqrt
from typing import Iterable, Sequence

from .energy import corr_add
from .errors import BadShifts, TooLargeForExhaustive, ZeroDilation
from .fields import Coset, FpSet, PrimeField, Subgroup, check_same_field, sumset
from .records import CheckRecord, to_jsonable

DEFAULT_EXHAUSTIVE_LIMIT = 31


# -- intersections of shifted subgroups ---------------------------------------


@dataclass
class IntersectionRecord:
    count: int
    main_term: Fraction
    error_bound: float
    theta: float
    passed: bool
    k: int
    p: int
    t: int
    diagnostics: list[CheckRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "t": self.t,
            "k": self.k,
            "count": self.count,
            "main_term": to_jsonable(self.main_term),
            "error_bound": to_jsonable(self.error_bound),
            "theta": to_jsonable(self.theta),
            "pass": self.passed,
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }


def many_shifts_bound(t: int, k: int) -> float:
    return 4 * (k + 1) * (t ** (1 / (2 * k + 1)) + 1) ** (k + 1)


def shift_intersection(base: Subgroup | Coset, shifts: Sequence[int]) -> IntersectionRecord:
    """|X ∩ (X + x_1) ∩ ... ∩ (X + x_k)| against |Γ|^{k+1}/(p-1)^k ± k 2^{k+3} sqrt(p)."""
    G = base if isinstance(base, Subgroup) else base.subgroup
    X = base.elements
    p = G.field.p
    xs = [int(x) % p for x in shifts]
    k = len(xs)
    if k == 0:
        raise BadShifts("need at least one shift")
    if 0 in xs or len(set(xs)) != k:
        raise BadShifts("shifts must be nonzero and pairwise distinct")
    mask = X.mask
    for x in xs:
        mask &= X.translate(x).mask
    count = mask.bit_count()
    main = Fraction(G.t ** (k + 1), (p - 1) ** k)
    coef = k * 2 ** (k + 3)
    dev = count - main
    # |dev| <= coef*sqrt(p)  <=>  dev^2 <= coef^2 * p, decided exactly
    passed = dev * dev <= coef * coef * p
    err = nextafter(coef * sqrt(p), inf)
    diag_ctx = {
        "premise_size": 32 * k * 2 ** (20 * k * log2(k + 1)) <= G.t,
        "premise_p": p >= 4 * k * G.t * (G.t ** (1 / (2 * k + 1)) + 1),
    }
    diag = CheckRecord("many_shifts", count, many_shifts_bound(G.t, k), False, diag_ctx)
    return IntersectionRecord(count, main, err, float(dev) / err, passed, k, p, G.t, [diag])


# -- Mit'kin incidence sums ----------------------------------------------------


@dataclass
class MitkinResult:
    count: int
    pairs: list[tuple[int, int]]
    premise_size: bool
    premise_count: bool
    diagnostic: CheckRecord

    def __int__(self) -> int:
        return self.count

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "pairs": [list(pr) for pr in self.pairs],
            "premise_size": self.premise_size,
            "premise_count": self.premise_count,
            "diagnostic": self.diagnostic.to_json(),
        }


def mitkin_sum(G: Subgroup, P: Subgroup, theta: Iterable[tuple[int, int]]) -> MitkinResult:
    """sum over (u, v) of #{(x, y) in Γ x Π : u x + v y = 1}.

    Pairs are reduced to canonical coset representatives and deduplicated.
    """
    field_ = G.field
    check_same_field(G.elements, P.elements)
    p = field_.p
    reps = sorted({(Coset(G, u).representative, Coset(P, v).representative) for u, v in theta})
    total = 0
    for u, v in reps:
        vinv = pow(v, -1, p)
        for x in G:
            if ((1 - u * x) * vinv) % p in P.elements:
                total += 1
    n = len(reps)
    tg, tp = G.t, P.t
    diag = CheckRecord("mitkin", total, (tg * tp * n * n) ** (1 / 3), False, {"p": p, "orders": [tg, tp]})
    return MitkinResult(
        total,
        reps,
        premise_size=(tg * tp) ** 2 * n < p**3,
        premise_count=n * 33**3 <= tg * tp,
        diagnostic=diag,
    )


# -- Γ-invariant closure ------------------------------------------------------------


def gamma_closure(G: Subgroup, Q: FpSet) -> FpSet:
    """Smallest Γ-invariant set containing Q: the union of the dilates qΓ."""
    check_same_field(G.elements, Q)
    mask = Q.mask & 1
    seen = 0
    for q in Q:
        if q == 0 or (seen >> q) & 1:
            continue
        coset = G.elements.dilate(q).mask
        seen |= coset
        mask |= coset
    return FpSet.from_mask(Q.field, mask)


# -- additive decompositions ---------------------------------------------------------


@dataclass
class DecompositionResult:
    target: FpSet
    pairs: list[tuple[FpSet, FpSet]]
    exhaustive: bool
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def primitive(self) -> bool:
        return self.exhaustive and not self.pairs

    def to_json(self) -> dict:
        return {
            "p": self.target.p,
            "target": list(self.target.elements),
            "exhaustive": self.exhaustive,
            "primitive": self.primitive,
            "pairs": [[list(A.elements), list(B.elements)] for A, B in self.pairs],
            "checks": [c.to_json() for c in self.checks],
        }


def _translates_mask(S: FpSet, xs: Iterable[int], start: int | None = None) -> int:
    """mask of ∩_{x in xs} (S - x), starting from ``start`` (all of F_p by default)."""
    m = S.field.full_mask if start is None else start
    for x in xs:
        m &= S.translate(-x).mask
    return m


def _canonical_pair(A: FpSet, B: FpSet) -> tuple[tuple[int, ...], tuple[int, ...]]:
    best = None
    for X, Y in ((A, B), (B, A)):
        for y in Y:
            cand = (X.translate(y).elements, Y.translate(-y).elements)
            if best is None or cand < best:
                best = cand
    return best


def _closure(S: FpSet, bmask: int) -> int:
    """A_max(B) = ∩_{b in B}(S - b)."""
    a = S.mask
    m = bmask
    while m:
        low = m & -m
        a &= S.translate(-(low.bit_length() - 1)).mask
        m ^= low
    return a


def _closed_pairs(S: FpSet, min_size: int) -> list[tuple[int, int]]:
    """Close-by-one enumeration of pairs A ⊆ S, B ∋ 0 with A = A_max(B), B = B_max(A).

    A_max(B) = ∩_{b in B}(S - b) and B_max(A) = ∩_{a in A}(S - a). Every
    decomposition S = A + B translates into a pair contained in one of these.
    """
    elems = S.elements
    shifted = {x: S.translate(-x).mask for x in elems}
    out: list[tuple[int, int]] = []

    def grow(amask: int, bmask: int, start: int) -> None:
        for i in range(start, len(elems)):
            x = elems[i]
            if (amask >> x) & 1:
                continue
            b2 = bmask & shifted[x]
            if b2.bit_count() < min_size:
                continue
            a2 = _closure(S, b2)
            below = (1 << x) - 1
            # canonicity: closing must not add anything smaller than x
            if a2 & below != amask & below:
                continue
            out.append((a2, b2))
            grow(a2, b2, i + 1)

    grow(0, S.field.full_mask, 0)
    return out


def _sampled_pairs(S: FpSet, min_size: int, samples: int, seed: int) -> list[tuple[int, int]]:
    """Random greedy growth of A followed by closure."""
    rng = random.Random(seed)
    shifted = {x: S.translate(-x).mask for x in S.elements}
    out = []
    for _ in range(samples):
        order = list(S.elements)
        rng.shuffle(order)
        amask, bmask = 0, S.field.full_mask
        for x in order:
            b2 = bmask & shifted[x]
            if b2.bit_count() >= min_size:
                amask |= 1 << x
                bmask = b2
        out.append((_closure(S, bmask), bmask))
    return out


def find_decompositions(
    S: FpSet,
    min_size: int = 2,
    exhaustive: bool | None = None,
    limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    samples: int = 2000,
    seed: int = 0,
) -> DecompositionResult:
    """All S = A + B with |A|, |B| >= min_size, up to translation (A+s, B-s) and swap.

    Each reported pair is maximal: A = ∩_{b}(S - b) and B = ∩_{a}(S - a).
    Beyond ``limit`` an explicit ``exhaustive=True`` raises; otherwise a
    sampled search runs and the result is marked non-exhaustive.
    """
    p = S.p
    if len(S) < 2:
        raise ValueError("target must have at least two elements")
    if exhaustive is None:
        exhaustive = p <= limit
    elif exhaustive and p > limit:
        raise TooLargeForExhaustive(f"p={p} exceeds exhaustive limit {limit}")
    if exhaustive:
        raw = _closed_pairs(S, min_size)
    else:
        raw = _sampled_pairs(S, min_size, samples, seed)
    found = {}
    for amask, bmask in raw:
        A = FpSet.from_mask(S.field, amask)
        B = FpSet.from_mask(S.field, bmask)
        if len(A) < min_size or len(B) < min_size:
            continue
        if sumset(A, B) != S:
            continue
        key = _canonical_pair(A, B)
        if key not in found:
            found[key] = (FpSet(S.field, key[0]), FpSet(S.field, key[1]))
    pairs = [found[k] for k in sorted(found)]
    result = DecompositionResult(S, pairs, exhaustive)
    G = _subgroup_with_zero(S)
    if G is not None:
        worst = max((len(A) * len(B) for A, B in pairs), default=0)
        result.checks.append(CheckRecord("ab_p", worst, 4 * p - 1, True, {"p": p, "t": G.t}))
    return result


def _subgroup_with_zero(S: FpSet) -> Subgroup | None:
    t = len(S) - 1
    if 0 not in S or t < 1 or (S.p - 1) % t:
        return None
    G = Subgroup(S.field, t)
    return G if G.with_zero() == S else None


def naive_decompositions(S: FpSet, min_size: int = 2) -> list[tuple[FpSet, FpSet]]:
    """Every ordered pair (A, B) of subsets of F_p with A + B = S, by brute force.

    For each A only submasks of ∩_{a}(S - a) are tried as B, since any other
    B already has A + B outside S.
    """
    p = S.p
    out = []
    for am in range(1, 1 << p):
        if am.bit_count() < min_size:
            continue
        A = FpSet.from_mask(S.field, am)
        bmask = _translates_mask(S, A.elements)
        sub = bmask
        while sub:
            if sub.bit_count() >= min_size:
                B = FpSet.from_mask(S.field, sub)
                if sumset(A, B) == S:
                    out.append((A, B))
            sub = (sub - 1) & bmask
    return out


def ab_p_check(G: Subgroup) -> CheckRecord:
    """Largest |A||B_max(A)| over all A ⊆ F_p with |A|, |B_max| >= 2, S = Γ ⊔ {0}.

    B_max(A) = ∩_{a in A}(S - a) is the largest B with A + B ⊆ S, so this
    maximum bounds |A||B| for every pair with A + B ⊆ S. Passes iff < 4p.
    """
    S = G.with_zero()
    p = S.p
    shifted = [S.translate(-x).mask for x in range(p)]
    best = 0
    witness: tuple[int, int] = (0, 0)

    def walk(start: int, size: int, amask: int, bmask: int):
        nonlocal best, witness
        nb = bmask.bit_count()
        if size >= 2 and nb >= 2 and size * nb > best:
            best = size * nb
            witness = (amask, bmask)
        for x in range(start, p):
            b2 = bmask & shifted[x]
            if b2.bit_count() >= 2:
                walk(x + 1, size + 1, amask | (1 << x), b2)
            elif size + 1 < 2:
                walk(x + 1, size + 1, amask | (1 << x), b2)

    walk(0, 0, 0, S.field.full_mask)
    ctx = {
        "p": p,
        "t": G.t,
        "A": list(FpSet.from_mask(S.field, witness[0]).elements),
        "B": list(FpSet.from_mask(S.field, witness[1]).elements),
    }
    return CheckRecord("ab_p", best, 4 * p - 1, True, ctx)


# -- difference covers -------------------------------------------------------------------


def canonical_affine(A: FpSet) -> tuple[int, ...]:
    """Lexicographically least sorted image of A under x -> λx + s, λ != 0."""
    p = A.p
    elems = A.elements
    if not elems:
        return ()
    best = None
    for lam in range(1, p):
        for a0 in elems:
            img = tuple(sorted((lam * (x - a0)) % p for x in elems))
            if best is None or img < best:
                best = img
    return best


def same_affine_class(A: FpSet, B: FpSet) -> bool:
    check_same_field(A, B)
    return len(A) == len(B) and canonical_affine(A) == canonical_affine(B)


@dataclass
class PerfectDifferenceRecord:
    is_cover: bool
    c_constant: int | None
    identity_holds: bool

    def to_json(self) -> dict:
        return {"is_cover": self.is_cover, "c_constant": self.c_constant, "identity_holds": self.identity_holds}


def perfect_difference_check(A: FpSet, G: Subgroup, xi: int) -> PerfectDifferenceRecord:
    """Is A - A = ξΓ ⊔ {0}, is (A∘A) constant c on ξΓ, and does |A|^2 - |A| = c|Γ|?"""
    check_same_field(A, G.elements)
    if xi % A.p == 0:
        raise ZeroDilation("ξ must be nonzero")
    coset = G.elements.dilate(xi)
    target = FpSet.from_mask(A.field, coset.mask | 1)
    is_cover = len(A) > 0 and (A - A) == target
    r = corr_add(A, A, "correlate").values
    vals = {int(r[x]) for x in coset}
    c = vals.pop() if len(vals) == 1 else None
    identity = c is not None and len(A) ** 2 - len(A) == c * G.t
    return PerfectDifferenceRecord(is_cover, c, identity)


@dataclass
class CoverSolution:
    A: FpSet
    xi: int
    exact: bool
    c: int | None

    def to_json(self) -> dict:
        return {"A": list(self.A.elements), "xi": self.xi, "exact": self.exact, "c": self.c}


@dataclass
class DifferenceCoverResult:
    subgroup: Subgroup
    mode: str
    solutions: list[CoverSolution]
    max_size: int | None

    @property
    def c_value(self) -> int | None:
        cs = {s.c for s in self.solutions if s.exact}
        return cs.pop() if len(cs) == 1 else None

    def to_json(self) -> dict:
        return {
            "p": self.subgroup.field.p,
            "order": self.subgroup.t,
            "mode": self.mode,
            "max_size": self.max_size,
            "c_value": self.c_value,
            "solutions": [s.to_json() for s in self.solutions],
        }


def exact_size_bound(t: int) -> int:
    return 1 + isqrt(t + 1)


def _cliques_through_zero(G: Subgroup, max_size: int | None):
    """Sets A ∋ 0 with |A| >= 2 and every nonzero difference in Γ."""
    p = G.field.p
    gmask = G.elements.mask
    # y is compatible with a iff y - a and a - y both lie in Γ
    sym = gmask & G.elements.dilate(-1).mask
    compat = [FpSet.from_mask(G.field, sym).translate(a).mask for a in range(p)]

    def walk(members: list[int], cand: int):
        if len(members) >= 2:
            yield tuple(members)
        if max_size is not None and len(members) >= max_size:
            return
        m = cand
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            # only larger elements, so each set appears once
            yield from walk(members + [y], cand & compat[y] & ~((low << 1) - 1))

    yield from walk([0], compat[0])


def difference_cover_search(
    field_: PrimeField, G: Subgroup, mode: str = "exact", max_size: int | None = None
) -> DifferenceCoverResult:
    """Sets A with A - A ⊆ ξΓ ⊔ {0} (subset) or = ξΓ ⊔ {0} (exact), up to affine maps.

    The search fixes 0 ∈ A and ξ = 1, which loses nothing: translating and
    dilating A moves ξ within F_p^*. Exact mode caps |A| at
    1 + floor(sqrt(|Γ| + 1)) unless ``max_size`` is given. The cap presumes
    every difference occurs once; for Γ = F_p^* it drops covers with
    repeated differences (A = F_p, say), so pass ``max_size`` there.
    """
    if mode not in ("exact", "subset"):
        raise ValueError(f"unknown mode {mode!r}")
    if G.field != field_:
        raise ValueError("subgroup belongs to a different field")
    if mode == "exact" and max_size is None:
        max_size = exact_size_bound(G.t)
    target = G.with_zero()
    classes: dict[tuple[int, ...], CoverSolution] = {}
    for members in _cliques_through_zero(G, max_size):
        A = FpSet(field_, members)
        exact = (A - A) == target
        if mode == "exact" and not exact:
            continue
        key = canonical_affine(A)
        if key in classes:
            continue
        rep = FpSet(field_, key)
        xi = Coset(G, rep.elements[1] - rep.elements[0]).representative
        chk = perfect_difference_check(rep, G, xi)
        classes[key] = CoverSolution(rep, xi, chk.is_cover, chk.c_constant)
    sols = [classes[k] for k in sorted(classes, key=lambda k: (len(k), k))]
    return DifferenceCoverResult(G, mode, sols, max_size)


__all__ = [
    "CoverSolution",
    "DecompositionResult",
    "DifferenceCoverResult",
    "IntersectionRecord",
    "MitkinResult",
    "PerfectDifferenceRecord",
    "ab_p_check",
    "canonical_affine",
    "difference_cover_search",
    "exact_size_bound",
    "find_decompositions",
    "gamma_closure",
    "mitkin_sum",
    "naive_decompositions",
    "perfect_difference_check",
    "same_affine_class",
    "shift_intersection",
]
