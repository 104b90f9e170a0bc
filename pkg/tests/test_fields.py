import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subgroup_lab.errors import (
    FieldMismatch, NotADivisor, NotPrime, ParseError, TooLarge, ZeroDilation,
)
from subgroup_lab.fields import (
    Coset, FpSet, Subgroup, divisors, factorize, format_set, is_prime, make_field,
    parse_set, smallest_primitive_root, subgroup_of_order, subgroups, sumset, transform,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61]


def brute_order(x, p):
    k, y = 1, x % p
    while y != 1:
        y = y * x % p
        k += 1
    return k


@pytest.mark.parametrize("p", SMALL_PRIMES[1:])
def test_primitive_root_is_smallest_generator(p):
    g = smallest_primitive_root(p)
    assert brute_order(g, p) == p - 1
    assert all(brute_order(h, p) < p - 1 for h in range(2, g))


def test_primitive_roots_small():
    assert make_field(5).g == 2
    assert make_field(13).g == 2
    assert [pow(2, i, 5) for i in range(4)] == [2 ** i % 5 for i in range(4)] == [1, 2, 4, 3]


@pytest.mark.parametrize("n", [0, 1, 4, 9, 15, 91])
def test_not_prime(n):
    with pytest.raises(NotPrime):
        make_field(n)


def test_table_limit(monkeypatch):
    monkeypatch.setenv("SUBGROUP_LAB_MAX_P", "100")
    with pytest.raises(TooLarge):
        make_field(101)


@pytest.mark.parametrize("p", [2, 3, 13, 101, 65537])
def test_tables_are_inverse(p):
    F = make_field(p)
    assert len(F.pow_table) == p - 1
    assert sorted(F.pow_table.tolist()) == list(range(1, p))
    assert F.dlog_table[0] == -1
    assert np.all(F.dlog_table[F.pow_table] == np.arange(p - 1))
    if p > 2:
        assert all(F.pow_table[i] == pow(F.g, i, p) for i in range(0, p - 1, max(1, p // 50)))


def test_tables_read_only():
    F = make_field(13)
    with pytest.raises(ValueError):
        F.pow_table[0] = 5


def test_factorize_and_divisors():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    for n in range(1, 200):
        assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_subgroup_examples():
    F = make_field(13)
    assert subgroup_of_order(F, 6).elements.elements == (1, 3, 4, 9, 10, 12)
    assert subgroup_of_order(F, 1).elements.elements == (1,)
    with pytest.raises(NotADivisor):
        subgroup_of_order(F, 5)
    assert [G.t for G in subgroups(make_field(7))] == [1, 2, 3, 6]
    assert [G.t for G in subgroups(F)] == [1, 2, 3, 4, 6, 12]
    assert [G.t for G in subgroups(make_field(2))] == [1]


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_subgroups_match_brute_force(p):
    F = make_field(p)
    for G in subgroups(F):
        expected = {x for x in range(1, p) if pow(x, G.t, p) == 1}
        assert set(G.elements) == expected
        assert [pow(G.generator, l, p) for l in range(G.t)] == list(G.ordered)
        assert all(G.exponent(x) == l for l, x in enumerate(G.ordered))


def test_cosets_partition():
    F = make_field(13)
    G = Subgroup(F, 4)
    cs = G.cosets()
    assert len(cs) == 3
    seen = set()
    for C in cs:
        elems = set(C.elements)
        assert not elems & seen
        seen |= elems
        assert C.representative == min(elems)
    assert seen == set(range(1, 13))
    assert Coset(G, 7) == Coset(G, 7 * 5 % 13)
    assert G.with_zero().elements == (0, 1, 5, 8, 12)


def test_transform_examples():
    F = make_field(13)
    assert transform(F.set([1, 3, 9]), 2, 0).elements == (2, 5, 6)
    A = F.set([4, 7])
    assert transform(A, 1, 0) == A
    with pytest.raises(ZeroDilation):
        transform(make_field(5).set([1, 2]), 0, 0)


@settings(max_examples=200, deadline=None)
@given(
    p=st.sampled_from(SMALL_PRIMES[1:]),
    elems=st.lists(st.integers(0, 1000), max_size=8),
    l1=st.integers(1, 10**6), s1=st.integers(0, 10**6),
    l2=st.integers(1, 10**6), s2=st.integers(0, 10**6),
)
def test_transform_composition(p, elems, l1, s1, l2, s2):
    F = make_field(p)
    if l1 % p == 0 or l2 % p == 0:
        return
    A = F.set(elems)
    once = transform(transform(A, l1, s1), l2, s2)
    assert once == transform(A, l1 * l2, l2 * s1 + s2)
    assert len(transform(A, l1, s1)) == len(A)


def test_set_algebra():
    F = make_field(7)
    A, B = F.set([1, 2]), F.set([0, 1])
    assert sumset(A, B).elements == (1, 2, 3)
    assert (A - A).elements == (0, 1, 6)
    assert (A + 6).elements == (0, 1)
    assert A.translate(6) == A - 1
    assert F.set([8, -1]).elements == (1, 6)
    assert (A & B).elements == (1,)
    assert (A | B).elements == (0, 1, 2)
    assert F.set([1]) <= A and not B <= A
    assert FpSet.from_mask(F, A.mask) == A


@settings(max_examples=100, deadline=None)
@given(p=st.sampled_from(SMALL_PRIMES), a=st.lists(st.integers(0, 100), max_size=6),
       b=st.lists(st.integers(0, 100), max_size=6))
def test_sumset_matches_brute_force(p, a, b):
    F = make_field(p)
    A, B = F.set(a), F.set(b)
    assert set(sumset(A, B)) == {(x + y) % p for x in A for y in B}
    assert set(A - B) == {(x - y) % p for x in A for y in B}


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        sumset(make_field(5).set([1]), make_field(7).set([1]))


def test_parse_and_format():
    F = make_field(13)
    assert parse_set(F, "2,5,6").elements == (2, 5, 6)
    assert parse_set(F, "G:6") == Subgroup(F, 6).elements
    assert parse_set(F, "G:6|0").elements == (0, 1, 3, 4, 9, 10, 12)
    assert format_set(parse_set(F, "6, 2,5")) == "2,5,6"
    with pytest.raises(ParseError):
        parse_set(F, "1,x")
    with pytest.raises(NotADivisor):
        parse_set(F, "G:5")
