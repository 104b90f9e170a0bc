"""Multiplicative characters of a subgroup and operators g(x - y) restricted to it.

Elements of Γ are indexed by their exponent: x_l = g^(n*l) for 0 <= l < t.
The normalized characters are f_α(x_l) = t^(-1/2) e(αl/t) for α = 1..t;
α = t is the principal one. Sums over characters are evaluated with FFTs
over the exponent index, which is the same finite character sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Union

import numpy as np

from .energy import corr_add
from .errors import HypothesisViolation, NotHermitian, NotInvariant, SupportViolation
from .fields import FpSet, Subgroup, check_same_field
from .records import CheckRecord, tolerance_record, to_jsonable

FunctionLike = Union[np.ndarray, FpSet, Mapping[int, complex]]

SPECTRAL_RTOL = 1e-6


class CharBasis:
    """Orthonormal characters of Γ, rows indexed by α - 1 for α = 1..t."""

    def __init__(self, subgroup: Subgroup):
        self.subgroup = subgroup
        self.t = subgroup.t
        self.points = np.array(subgroup.ordered, dtype=np.int64)
        # position of each residue inside Γ, -1 elsewhere
        pos = np.full(subgroup.field.p, -1, dtype=np.int64)
        pos[self.points] = np.arange(self.t)
        self.position = pos

    @property
    def principal(self) -> int:
        """Row index of the principal character."""
        return self.t - 1

    @cached_property
    def values(self) -> np.ndarray:
        t = self.t
        alpha = np.arange(1, t + 1)[:, None]
        l = np.arange(t)[None, :]
        return np.exp(2j * np.pi * ((alpha * l) % t) / t) / np.sqrt(t)

    def vector(self, alpha: int) -> np.ndarray:
        """f_α as a length-p vector vanishing off Γ."""
        out = np.zeros(self.subgroup.field.p, dtype=np.complex128)
        out[self.points] = self.values[alpha - 1]
        return out

    def restrict(self, phi: FunctionLike) -> np.ndarray:
        """Values of φ at x_0..x_{t-1}; φ must vanish off Γ."""
        p = self.subgroup.field.p
        if isinstance(phi, FpSet):
            check_same_field(phi, self.subgroup.elements)
            if not phi <= self.subgroup.elements:
                raise SupportViolation(f"{phi!r} is not contained in the subgroup")
            return self.position_indicator(phi)
        if isinstance(phi, Mapping):
            full = np.zeros(p, dtype=np.complex128)
            for x, v in phi.items():
                full[int(x) % p] += v
        else:
            full = np.asarray(phi)
            if full.shape != (p,):
                raise ValueError(f"expected a length-{p} vector")
        off = np.ones(p, dtype=bool)
        off[self.points] = False
        if np.any(full[off] != 0):
            raise SupportViolation("function is nonzero off the subgroup")
        return full[self.points]

    def position_indicator(self, A: FpSet) -> np.ndarray:
        out = np.zeros(self.t, dtype=np.float64)
        out[self.position[A.array()]] = 1.0
        return out

    def coeffs_of_values(self, vals: np.ndarray) -> np.ndarray:
        # c_α = t^(-1/2) sum_l φ_l e(-αl/t) = t^(-1/2) DFT(φ)[α mod t]
        F = np.fft.fft(vals)
        return np.roll(F, -1) / np.sqrt(self.t)


def char_basis(subgroup: Subgroup) -> CharBasis:
    return CharBasis(subgroup)


@dataclass
class CoeffVector:
    basis: CharBasis
    c: np.ndarray
    norm2: float

    def parseval_error(self) -> float:
        lhs = float(np.sum(np.abs(self.c) ** 2))
        return abs(lhs - self.norm2) / (self.norm2 or 1.0)


def coeffs(basis: CharBasis, phi: FunctionLike) -> CoeffVector:
    """c_α(φ) = <φ, f_α> for α = 1..t."""
    vals = basis.restrict(phi)
    return CoeffVector(basis, basis.coeffs_of_values(vals), float(np.sum(np.abs(vals) ** 2)))


class OperatorSpec:
    """The weight g of the operator T^g_Γ(x, y) = g(x - y) Γ(x) Γ(y)."""

    def __init__(self, subgroup: Subgroup, g: np.ndarray):
        p = subgroup.field.p
        g = np.asarray(g)
        if g.shape != (p,):
            raise ValueError(f"weight must be a length-{p} vector")
        self.subgroup = subgroup
        self.g = g
        x = np.arange(p)
        gen = subgroup.generator
        self.gamma_invariant = bool(np.allclose(g[(gen * x) % p], g, rtol=1e-12, atol=1e-12))
        self.even = bool(np.allclose(np.conj(g[(-x) % p]), g, rtol=1e-12, atol=1e-12))

    @property
    def p(self) -> int:
        return self.subgroup.field.p

    def matrix(self) -> np.ndarray:
        """T^g_Γ as a t x t matrix in exponent order."""
        pts = np.array(self.subgroup.ordered, dtype=np.int64)
        return self.g[(pts[:, None] - pts[None, :]) % self.p]


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    trace1_check: CheckRecord
    trace2_check: CheckRecord
    normality_check: CheckRecord
    normal: bool

    def to_json(self) -> dict:
        return {
            "eigenvalues": [[to_jsonable(float(z.real)), to_jsonable(float(z.imag))] for z in self.eigenvalues],
            "trace1": self.trace1_check.to_json(),
            "trace2": self.trace2_check.to_json(),
            "normality": self.normality_check.to_json(),
            "normal": self.normal,
        }


def eigenvalues(spec: OperatorSpec, at: int = 1) -> np.ndarray:
    """μ_α = conj(χ_α(x)) sum_{y in Γ} g(x - y) χ_α(y), evaluated at x = ``at`` in Γ."""
    G = spec.subgroup
    t, p = G.t, spec.p
    pts = np.array(G.ordered, dtype=np.int64)
    w = spec.g[(at - pts) % p]
    # sum_l w_l e(αl/t) for α = 1..t
    mu = np.roll(np.fft.ifft(w) * t, -1)
    l_at = G.exponent(at)
    alpha = np.arange(1, t + 1)
    return mu * np.exp(-2j * np.pi * ((alpha * l_at) % t) / t)


def dense_eigenvalues(spec: OperatorSpec) -> np.ndarray:
    """O(t^3) eigendecomposition, kept as an oracle."""
    return np.linalg.eigvals(spec.matrix())


def operator_spectrum(spec: OperatorSpec, at: int = 1) -> SpectralReport:
    if not spec.gamma_invariant:
        raise NotInvariant("weight is not Γ-invariant")
    if not spec.even:
        raise NotHermitian("weight does not satisfy conj(g(-x)) = g(x)")
    G = spec.subgroup
    mu = eigenvalues(spec, at)
    ctx = {"p": spec.p, "t": G.t}
    s1 = complex(np.sum(mu))
    trace1 = tolerance_record("trace1", s1, complex(spec.g[0]) * G.t, SPECTRAL_RTOL, **ctx)
    s2 = float(np.sum(np.abs(mu) ** 2))
    gamma_diff = corr_add(G.elements, G.elements, "correlate").values
    rhs2 = float(np.dot(np.abs(spec.g) ** 2, gamma_diff))
    trace2 = tolerance_record("trace2", s2, rhs2, SPECTRAL_RTOL, **ctx)
    frob = float(np.sum(np.abs(spec.matrix()) ** 2))
    normality = tolerance_record("normality", s2, frob, SPECTRAL_RTOL, **ctx)
    return SpectralReport(mu, trace1, trace2, normality, bool(normality.passed))


def eigenfunction_residual(spec: OperatorSpec, mu: np.ndarray | None = None) -> float:
    """max over α and coordinates of |T f_α - μ_α f_α|."""
    basis = CharBasis(spec.subgroup)
    mu = eigenvalues(spec) if mu is None else mu
    F = basis.values
    applied = F @ spec.matrix().T
    return float(np.max(np.abs(applied - mu[:, None] * F)))


def energy_mult_via_chars(basis: CharBasis, A: FpSet, B: FpSet) -> float:
    """|Γ| sum_α |c_α(A)|^2 |c_α(B)|^2 for A, B inside Γ."""
    ca = coeffs(basis, A).c
    cb = coeffs(basis, B).c
    return float(basis.t * np.sum(np.abs(ca) ** 2 * np.abs(cb) ** 2))


def differences_inside(A: FpSet, C: FpSet, G: Subgroup) -> bool:
    """a - c lies in Γ for every a in A and c in C."""
    return all(A.translate(-c) <= G.elements for c in C)


def t_via_chars(basis: CharBasis, A: FpSet, B: FpSet, C: FpSet, D: FpSet) -> float:
    """|Γ| sum_α sum_c sum_d |c_α(A-c)|^2 |c_α(B-d)|^2, needs A-C and B-D inside Γ."""
    G = basis.subgroup
    check_same_field(A, B, C, D, G.elements)
    if not (differences_inside(A, C, G) and differences_inside(B, D, G)):
        raise HypothesisViolation("A - C and B - D must lie inside the subgroup")
    sa = sum(np.abs(coeffs(basis, A.translate(-c)).c) ** 2 for c in C)
    sb = sum(np.abs(coeffs(basis, B.translate(-d)).c) ** 2 for d in D)
    return float(G.t * np.sum(sa * sb))


def average_action_identity(
    spec: OperatorSpec, h1: FunctionLike, h2: FunctionLike
) -> tuple[complex, complex]:
    """Both sides of the averaged-action identity for an arbitrary weight g.

    lhs = (1/t) sum_γ <T h1^γ, h2^γ> by direct summation over γ;
    rhs = sum_α c_α(h1) conj(c_α(h2)) <T f_α, f_α>.
    """
    basis = CharBasis(spec.subgroup)
    t = basis.t
    v1 = basis.restrict(h1).astype(np.complex128)
    v2 = basis.restrict(h2).astype(np.complex128)
    M = spec.matrix()
    lhs = 0j
    for s in range(t):
        # h^γ(x_l) = h(x_{l+s}) for γ = x_s
        a = np.roll(v1, -s)
        b = np.roll(v2, -s)
        lhs += np.vdot(b, M @ a)
    lhs /= t
    F = basis.values
    diag = np.einsum("ai,ij,aj->a", F.conj(), M, F)
    c1 = basis.coeffs_of_values(v1)
    c2 = basis.coeffs_of_values(v2)
    rhs = complex(np.sum(c1 * np.conj(c2) * diag))
    return complex(lhs), rhs


__all__ = [
    "CharBasis",
    "CoeffVector",
    "OperatorSpec",
    "SpectralReport",
    "average_action_identity",
    "char_basis",
    "coeffs",
    "dense_eigenvalues",
    "differences_inside",
    "eigenfunction_residual",
    "eigenvalues",
    "energy_mult_via_chars",
    "operator_spectrum",
    "t_via_chars",
]
