import json

import numpy as np
import pytest

from subgroup_lab.collinear import t_quantity
from subgroup_lab.energy import energy_mult
from subgroup_lab.errors import HypothesisViolation, NotHermitian, NotInvariant, SupportViolation
from subgroup_lab.fields import Subgroup, make_field
from subgroup_lab.harness import invariant_even_weight
from subgroup_lab.spectral import (
    CharBasis, OperatorSpec, average_action_identity, coeffs, dense_eigenvalues,
    eigenfunction_residual, eigenvalues, energy_mult_via_chars, operator_spectrum, t_via_chars,
)


@pytest.fixture
def g13():
    return Subgroup(make_field(13), 6)


def test_basis_is_orthonormal_dft(g13):
    B = CharBasis(g13)
    V = B.values
    assert np.allclose(V @ V.conj().T, np.eye(6))
    dft = np.exp(2j * np.pi * np.outer(np.arange(1, 7), np.arange(6)) / 6) / np.sqrt(6)
    assert np.allclose(V, dft)
    # x_l = 4^l, and dlog(4^l) = 2l with g = 2
    F = g13.field
    assert [int(F.dlog_table[x]) // 2 for x in g13.ordered] == list(range(6))


def test_trivial_subgroup_basis():
    B = CharBasis(Subgroup(make_field(7), 1))
    assert B.values.shape == (1, 1) and B.values[0, 0] == 1


def test_coeffs_examples(g13):
    B = CharBasis(g13)
    c = coeffs(B, g13.elements).c
    assert np.isclose(c[B.principal], np.sqrt(6))
    assert np.allclose(np.delete(c, B.principal), 0)
    point = coeffs(B, {1: 1.0}).c
    assert np.allclose(np.abs(point) ** 2, 1 / 6)
    rng = np.random.default_rng(3)
    phi = {x: float(s) for x, s in zip(g13.ordered, rng.choice([-1, 1], 6))}
    cv = coeffs(B, phi)
    assert abs(np.sum(np.abs(cv.c) ** 2) - 6) <= 1e-9
    assert cv.parseval_error() <= 1e-12


def test_coeffs_direct_inner_product(g13):
    B = CharBasis(g13)
    rng = np.random.default_rng(0)
    phi = np.zeros(13, dtype=complex)
    phi[list(g13.ordered)] = rng.normal(size=6) + 1j * rng.normal(size=6)
    c = coeffs(B, phi).c
    for alpha in range(1, 7):
        assert np.isclose(c[alpha - 1], np.vdot(B.vector(alpha), phi))


def test_support_violation(g13):
    with pytest.raises(SupportViolation):
        coeffs(CharBasis(g13), g13.field.set([2]))
    with pytest.raises(SupportViolation):
        coeffs(CharBasis(g13), {2: 1.0})


def test_identity_operator(g13):
    g = np.zeros(13)
    g[0] = 1
    rep = operator_spectrum(OperatorSpec(g13, g))
    assert np.allclose(rep.eigenvalues, 1)
    assert rep.trace1_check.passed and rep.normal


def test_indicator_weight_spectrum(g13):
    spec = OperatorSpec(g13, g13.elements.indicator())
    rep = operator_spectrum(spec)
    B = CharBasis(g13)
    assert np.isclose(rep.eigenvalues[B.principal], 2)
    assert len(set(g13.elements) & {(1 - x) % 13 for x in g13.elements}) == 2
    assert np.allclose(sorted(rep.eigenvalues.real), sorted(dense_eigenvalues(spec).real))
    for x in g13.ordered:
        assert np.allclose(eigenvalues(spec, at=x), rep.eigenvalues)


@pytest.mark.parametrize("p", [13, 31, 101])
def test_random_invariant_weights(p):
    F = make_field(p)
    rng = np.random.default_rng(p)
    for G in [Subgroup(F, t) for t in (2, 3, 5, 6, 10) if (p - 1) % t == 0]:
        spec = OperatorSpec(G, invariant_even_weight(rng, G))
        rep = operator_spectrum(spec)
        assert eigenfunction_residual(spec, rep.eigenvalues) <= 1e-8
        assert rep.trace1_check.passed and rep.trace2_check.passed and rep.normality_check.passed
        assert np.allclose(np.sort_complex(rep.eigenvalues), np.sort_complex(dense_eigenvalues(spec)), atol=1e-8)


def test_spectrum_guards(g13):
    g = np.zeros(13)
    g[1] = 1
    with pytest.raises(NotInvariant):
        operator_spectrum(OperatorSpec(g13, g))
    h = np.zeros(13, dtype=complex)
    h[list(g13.elements)] = 1j
    with pytest.raises(NotHermitian):
        operator_spectrum(OperatorSpec(g13, h))


def test_energy_via_chars(g13):
    F = g13.field
    B = CharBasis(g13)
    G = g13.elements
    assert np.isclose(energy_mult_via_chars(B, G, G), 216)
    S = F.set([3, 9, 12])
    assert np.isclose(energy_mult_via_chars(B, F.set([1]), S), 3)
    rng = np.random.default_rng(1)
    for _ in range(20):
        X = F.set(rng.choice(list(G), rng.integers(1, 7), replace=False).tolist())
        Y = F.set(rng.choice(list(G), rng.integers(1, 7), replace=False).tolist())
        assert abs(energy_mult_via_chars(B, X, Y) - energy_mult(X, Y)) <= 1e-9 * energy_mult(X, Y)


def test_t_via_chars(g13):
    F = g13.field
    B = CharBasis(g13)
    A, Bs, C, D = F.set([2, 5]), F.set([2]), F.set([6]), F.set([5])
    assert np.isclose(t_via_chars(B, A, Bs, C, D), 2)
    assert np.isclose(t_via_chars(B, F.set([4]), F.set([1]), F.set([3]), F.set([0])), 1)
    with pytest.raises(HypothesisViolation):
        t_via_chars(B, F.set([2]), Bs, F.set([0]), D)
    assert np.isclose(t_via_chars(B, A, Bs, C, D), t_quantity(A, Bs, C, D))


def test_average_action(g13):
    B = CharBasis(g13)
    rng = np.random.default_rng(5)
    pts = list(g13.ordered)
    h1 = np.zeros(13, dtype=complex)
    h2 = np.zeros(13, dtype=complex)
    h1[pts] = rng.normal(size=6) + 1j * rng.normal(size=6)
    h2[pts] = rng.normal(size=6) + 1j * rng.normal(size=6)
    delta = np.zeros(13)
    delta[0] = 1
    lhs, rhs = average_action_identity(OperatorSpec(g13, delta), h1, h2)
    assert np.isclose(lhs, np.vdot(h2, h1)) and np.isclose(rhs, lhs)
    g = rng.normal(size=13)
    spec = OperatorSpec(g13, g)
    assert not spec.gamma_invariant
    lhs, rhs = average_action_identity(spec, h1, h2)
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)
    f0 = B.vector(6)
    lhs, rhs = average_action_identity(spec, f0, f0)
    M = spec.matrix()
    direct = np.vdot(B.values[B.principal], M @ B.values[B.principal])
    assert np.isclose(lhs, direct) and np.isclose(rhs, direct)


def test_average_action_brute_force(g13):
    # literal version of the averaged side: h^γ(x) = h(γx)
    rng = np.random.default_rng(9)
    g = rng.normal(size=13) + 1j * rng.normal(size=13)
    h1 = {x: complex(rng.normal(), rng.normal()) for x in g13.elements}
    h2 = {x: complex(rng.normal(), rng.normal()) for x in g13.elements}
    G = list(g13.elements)
    total = 0j
    for gam in G:
        for x in G:
            for y in G:
                total += g[(x - y) % 13] * h1[gam * y % 13] * np.conj(h2[gam * x % 13])
    lhs, rhs = average_action_identity(OperatorSpec(g13, g), h1, h2)
    assert np.isclose(lhs, total / 6) and np.isclose(rhs, total / 6)


def test_report_json(g13):
    rep = operator_spectrum(OperatorSpec(g13, g13.elements.indicator()))
    d = rep.to_json()
    assert set(d) >= {"eigenvalues", "trace1", "trace2", "normal"}
    assert len(d["eigenvalues"]) == 6 and all(len(z) == 2 for z in d["eigenvalues"])
    json.dumps(d)
