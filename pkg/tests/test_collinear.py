import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from subgroup_lab import oracles
from subgroup_lab.collinear import (
    dual_energy_sum, error_budget, is_subgroup, line_slope_histogram, main_term,
    t_bounds_report, t_quantity, t_star,
)
from subgroup_lab.energy import corr_add, energy_mult
from subgroup_lab.errors import EmptySet, FieldMismatch
from subgroup_lab.fields import Subgroup, make_field

PRIMES = [3, 5, 7, 11, 13, 17, 19, 23]
small = st.lists(st.integers(0, 500), min_size=1, max_size=4)


def checks(report):
    return {r.name: r for r in report.bound_checks}


def test_t_examples():
    F5, F13 = make_field(5), make_field(13)
    A = F5.set([1, 2])
    assert t_quantity(A, A, A, A) == 40
    assert t_quantity(A, A, A, A, method="pairs") == 40
    assert t_quantity(F13.set([2, 5]), F13.set([2]), F13.set([6]), F13.set([5])) == 2
    for a, b, c, d in [(0, 0, 0, 0), (1, 2, 3, 4), (4, 4, 1, 0)]:
        assert t_quantity(F5.set([a]), F5.set([b]), F5.set([c]), F5.set([d])) == 1


def test_t_star_examples():
    F = make_field(5)
    A = F.set([1, 2])
    assert t_star(A, A) == 8
    assert t_star(F.set([3]), F.set([3])) == 0
    dd = corr_add(A, A, "correlate").values
    assert t_star(A, A) <= len(A - A) * int((dd ** 3).sum()) == 30


def test_dual_energy_examples():
    F = make_field(5)
    A, B = F.set([1, 2]), F.set([1])
    assert dual_energy_sum(A, B, F.set([0])) == 2
    C = F.set([3])
    assert dual_energy_sum(A, B, C) == energy_mult(A - 3, B)
    G = Subgroup(make_field(13), 6).elements
    g = list(G)
    assert dual_energy_sum(G, G, G) == oracles.dual_energy_naive(g, g, g, 13)


@settings(max_examples=120, deadline=None)
@given(p=st.sampled_from(PRIMES), a=small, b=small, c=small, d=small)
def test_t_matches_oracle(p, a, b, c, d):
    F = make_field(p)
    A, B, C, D = (F.set(x) for x in (a, b, c, d))
    expected = oracles.t_naive(list(A), list(B), list(C), list(D), p)
    assert t_quantity(A, B, C, D) == expected
    assert t_quantity(A, B, C, D, method="pairs") == expected
    assert t_quantity(A, B, C, D, zeros=False) == t_quantity(A, B, C, D, method="pairs", zeros=False)


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from(PRIMES), a=small, c=small)
def test_t_star_matches_oracle(p, a, c):
    F = make_field(p)
    A, C = F.set(a), F.set(c)
    assert t_star(A, C) == oracles.t_star_naive(list(A), list(C), p)


def test_line_slope_histogram_definition():
    F = make_field(11)
    A, C = F.set([1, 4, 5]), F.set([0, 4])
    M = line_slope_histogram(C, A)
    for lam in range(11):
        expected = sum(oracles.cf3_naive(list(C), list(A), list(A), x, lam * x % 11, 11) for x in range(1, 11))
        assert M[lam] == expected


@settings(max_examples=120, deadline=None)
@given(p=st.sampled_from(PRIMES), a=small, b=small, c=small, d=small)
def test_error_decomposition(p, a, b, c, d):
    F = make_field(p)
    A, B, C, D = (F.set(x) for x in (a, b, c, d))
    rep = t_bounds_report(A, B, C, D)
    assert 0 <= rep.t_value - rep.main_term <= rep.error_budget
    assert rep.t_value >= len(A) * len(B) * len(C) * len(D)
    assert rep.ok


def test_disjoint_sets_have_no_error():
    F = make_field(13)
    A, B, C, D = F.set([1, 2, 3]), F.set([4, 7]), F.set([5, 9]), F.set([0, 11])
    rep = t_bounds_report(A, B, C, D)
    assert rep.error_budget == error_budget(A, B, C, D) == 0
    assert rep.t_value == rep.main_term == main_term(A, B, C, D)


def test_sigma_l_subgroup_instance():
    F = make_field(13)
    G = Subgroup(F, 6)
    X = G.elements
    rep = t_bounds_report(X, X, X, X, subgroups=(G, G))
    c = checks(rep)
    assert c["sigma_l"].asserted and c["sigma_l"].passed
    assert c["sigma_l_literal"].lhs <= c["sigma_l_literal"].rhs
    assert c["T_star_general_2"].passed
    assert c["sigma_diag"].passed is None
    assert rep.t_star == t_star(X, X)


def test_sigma_l_zero_convention():
    # literal zero products break the bound; the zero-free count satisfies it
    F = make_field(17)
    A = Subgroup(F, 16).elements
    B, C, D = F.set([0]), F.set([0, 1]), F.set([0])
    c = checks(t_bounds_report(A, B, C, D))
    lit = c["sigma_l_literal"]
    assert lit.lhs == 512 and lit.rhs == Fraction(322)
    assert not lit.asserted and lit.passed is None
    assert c["sigma_l"].passed


def test_is_subgroup():
    F = make_field(13)
    assert is_subgroup(Subgroup(F, 4).elements).t == 4
    assert is_subgroup(F.set([1, 2])) is None
    assert is_subgroup(F.set([1, 3, 9, 5])) is None


def test_errors():
    F = make_field(5)
    with pytest.raises(EmptySet):
        t_quantity(F.set([]), F.set([1]), F.set([1]), F.set([1]))
    with pytest.raises(FieldMismatch):
        t_quantity(F.set([1]), make_field(7).set([1]), F.set([1]), F.set([1]))
    with pytest.raises(ValueError):
        t_quantity(F.set([1]), F.set([1]), F.set([1]), F.set([1]), method="fast")


def test_report_json_stable():
    F = make_field(5)
    A = F.set([1, 2])
    d = t_bounds_report(A, A, A, A).to_json()
    assert set(d) == {"t_value", "t_star", "main_term", "error_budget", "bound_checks"}
    assert d["t_value"] == 40 and d["t_star"] == 8
    assert json.loads(json.dumps(d)) == d
