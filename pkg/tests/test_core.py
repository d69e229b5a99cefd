from __future__ import annotations

import pickle

import pytest
from hypothesis import given, strategies as st

from qlorder.core import (
    INFINITY,
    Infinity,
    brute_join,
    brute_min_pair,
    check_qlo_laws,
    is_infinite,
    leq,
    min_pair_base,
    upper_bounds,
)
from qlorder.groups import FreeGroup, IntLattice

Z = IntLattice(1)
Z2 = IntLattice(2)
F2 = FreeGroup(2)
a, b = (1,), (2,)


def test_infinity_is_a_singleton():
    assert Infinity() is INFINITY
    assert pickle.loads(pickle.dumps(INFINITY)) is INFINITY
    assert repr(INFINITY) == "infinity"
    assert is_infinite(INFINITY) and not is_infinite((0,))


def test_min_pair_in_integers():
    # 2 - 5 = -3 = 0 - 3
    assert min_pair_base(Z, (2,), (5,)) == ((0,), (3,))
    assert min_pair_base(Z, (5,), (2,)) == ((3,), (0,))


def test_min_pair_in_free_group():
    # (ab)b⁻¹ = a
    assert min_pair_base(F2, a + b, b) == (a, ())
    assert min_pair_base(F2, a, b) == (a, b)


def test_min_pair_of_equal_elements_is_trivial():
    assert min_pair_base(Z2, (3, 1), (3, 1)) == ((0, 0), (0, 0))
    assert min_pair_base(F2, a + b + a, a + b + a) == ((), ())


def test_free_join_is_prefix_order():
    assert F2.join(a, a + b) == a + b
    assert F2.join(a + b, a) == a + b
    assert F2.join(a, b) is INFINITY
    assert F2.join((), b + b) == b + b


def test_free_join_with_identity():
    assert F2.join_with_identity(a + b + (-1,)) == a + b
    assert F2.join_with_identity((-1,) + b) is INFINITY
    assert F2.join_with_identity(()) == ()


def test_lattice_join_is_componentwise_max():
    assert Z2.join((1, 4), (3, 0)) == (3, 4)
    assert Z2.lub((-2, 5), (1, -1)) == (1, 5)
    assert Z2.lub((-2, -5), (-1, -1)) == (0, 0)


def test_leq_and_upper_bounds():
    assert leq(Z, (2,), (5,))
    assert not leq(Z, (5,), (2,))
    assert leq(F2, a, a + b)
    assert not leq(F2, b, a + b)
    assert upper_bounds(F2, a, b, F2.enumerate_positive(3)) == []


def test_brute_join_matches_join():
    cands = Z2.enumerate_positive(6)
    assert brute_join(Z2, (1, 0), (0, 2), cands) == (1, 2)
    assert brute_join(F2, a, b, F2.enumerate_positive(4)) is INFINITY


def test_brute_min_pair():
    cands = Z.enumerate_elements(6)
    pos = [x for x in cands if Z.is_positive(x)]
    assert brute_min_pair(Z, (-3,), pos) == ((0,), (3,))


@pytest.mark.parametrize("group", [Z, Z2, IntLattice(3), F2, FreeGroup(3)], ids=repr)
def test_qlo_laws_hold(group):
    assert check_qlo_laws(group, 3) == []


def test_enumeration_is_length_lex():
    assert Z2.enumerate_positive(1) == [(0, 0), (0, 1), (1, 0)]
    assert F2.enumerate_positive(2) == [(), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert len(F2.enumerate_elements(2)) == 1 + 4 + 12
    assert len(Z2.enumerate_elements(2)) == 1 + 4 + 8


def test_format_and_parse_round_trip():
    assert Z.format((3,)) == "x^3" and Z.format((1,)) == "x" and Z.format((0,)) == "e"
    assert Z.parse_token("x^-2") == (-2,)
    assert Z2.format((1, -2)) == "(1,-2)"
    assert Z2.parse_token("( 1, -2 )") == (1, -2)
    assert F2.format((1, 1, 2, -1)) == "a^2 b a^-1"
    assert F2.parse_token("b^3") == (2, 2, 2)
    with pytest.raises(ValueError):
        F2.parse_token("t")
    with pytest.raises(ValueError):
        Z2.parse_token("(1,2,3)")


vec = st.tuples(st.integers(-6, 6), st.integers(-6, 6))
fword = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8).map(lambda w: F2.product([(x,) for x in w]))


@given(vec, vec)
def test_lattice_min_pair_is_least_factorization(x, y):
    mu, nu = min_pair_base(Z2, x, y)
    assert Z2.multiply(mu, Z2.invert(nu)) == Z2.multiply(x, Z2.invert(y))
    assert Z2.is_positive(mu) and Z2.is_positive(nu)
    # any positive factorization g h⁻¹ of the same element lies above (μ, ν)
    for s in range(3):
        g = Z2.multiply(mu, (s, 2 - s))
        h = Z2.multiply(nu, (s, 2 - s))
        assert leq(Z2, mu, g) and leq(Z2, nu, h)


@given(fword)
def test_free_join_with_identity_is_least_positive_upper_bound(x):
    j = F2.join_with_identity(x)
    if is_infinite(j):
        return
    assert F2.is_positive(j) and leq(F2, x, j)
    for p in F2.enumerate_positive(3):
        z = F2.multiply(j, p)
        assert leq(F2, j, z)


@given(fword, fword)
def test_free_group_axioms(x, y):
    assert F2.multiply(x, F2.invert(x)) == ()
    assert F2.invert(F2.multiply(x, y)) == F2.multiply(F2.invert(y), F2.invert(x))
