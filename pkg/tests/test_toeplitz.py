from __future__ import annotations

import pytest

from conftest import show, word
from qlorder import toeplitz as tp
from qlorder.controlled import StarOrder


@pytest.fixture(scope="module")
def small(bs23):
    basis = tp.build_basis(bs23, 4)
    return basis, tp.OperatorCache(bs23, basis)


def col(basis, pres, text):
    return basis.lookup(word(pres, text))


def test_basis_listing(bs23):
    assert len(tp.build_basis(bs23, 0)) == 1
    basis = tp.build_basis(bs23, 2)
    # shortest spelling first, then the serialized form
    assert [show(bs23, x) for x in basis.elements] == ["e", "t", "x", "t t", "t x", "x t", "x^2"]
    assert tp.basis_listing(bs23, basis).splitlines()[:3] == ["0 e", "1 t", "2 x"]
    assert basis.h_k(2) == [3]
    with pytest.raises(ValueError):
        tp.build_basis(bs23, -1)


def test_identity_symbol_is_identity(bs23, small):
    basis, cache = small
    e = word(bs23, "")
    assert cache.op(e).entries == {i: i for i in range(len(basis))}
    assert cache.op(e).safe == frozenset(range(len(basis)))


def test_shift_examples(bs23, small):
    basis, cache = small
    tx = cache.op(word(bs23, "x"))
    assert tx.apply(col(basis, bs23, "e")) == col(basis, bs23, "x")
    assert tx.apply(col(basis, bs23, "t x")) == col(basis, bs23, "x t x")
    x3 = cache.op(word(bs23, "x^3"))
    assert x3.apply(col(basis, bs23, "t")) == col(basis, bs23, "t x^2")


def test_adjoint_examples(bs23, small):
    basis, cache = small
    t_adj = cache.adj(word(bs23, "t"))
    assert t_adj.apply(col(basis, bs23, "t x^2")) == col(basis, bs23, "x^2")
    x_adj = cache.adj(word(bs23, "x"))
    e = col(basis, bs23, "e")
    assert x_adj.apply(e) is None and e in x_adj.safe
    # x ≤ t x^2 since x·(x^2 t) = x^3 t = t x^2
    assert x_adj.apply(col(basis, bs23, "t x^2")) == col(basis, bs23, "x^2 t")


def test_images_leaving_the_basis_are_unsafe(bs23, small):
    basis, cache = small
    op = cache.op(word(bs23, "t t"))
    far = col(basis, bs23, "t t t t")
    assert far not in op.safe and op.apply(far) is None


def test_compose_applies_right_factor_first(bs23, small):
    basis, cache = small
    x, t = word(bs23, "x"), word(bs23, "t")
    prod = cache.op(x) @ cache.op(t)
    assert prod.apply(col(basis, bs23, "e")) == col(basis, bs23, "x t")
    for c in prod.safe:
        assert prod.apply(c) == cache.op(word(bs23, "x t")).apply(c)


def test_compose_propagates_unsafe_columns():
    a = tp.SparseOperator(3, {0: 1}, frozenset({0}))
    b = tp.SparseOperator(3, {0: 2, 1: 0}, frozenset({0, 1, 2}))
    prod = a @ b
    # column 0 goes to 2 where a is unsafe; column 2 is a safe zero
    assert prod.safe == frozenset({1, 2})
    assert prod.entries == {1: 1}


def test_isometry_and_covariance(bs23, small):
    basis, cache = small
    ps = StarOrder(bs23).positives(2)
    assert tp.check_isometry(bs23, basis, ps, cache).passed
    assert tp.check_covariance(bs23, basis, word(bs23, "x"), word(bs23, "t"), cache).passed
    # x t ∨ t = ∞: the product of range projections is zero on safe columns
    r = tp.check_covariance(bs23, basis, word(bs23, "x t"), word(bs23, "t"), cache)
    assert r.passed and r.checked > 0
    assert tp.check_covariance_all(bs23, basis, ps, cache).passed


def test_truncation_zero_is_insufficient(bs23):
    basis = tp.build_basis(bs23, 0)
    r = tp.check_covariance(bs23, basis, word(bs23, "x"), word(bs23, "t"))
    assert r.status == "insufficient"
    assert tp.check_isometry(bs23, basis, [word(bs23, "x")]).status == "insufficient"


def test_matrix_units_and_hk(presentations):
    for name in ("BS(2,3)", "Z2(2,3,3,2)", "F2(1,1,b)"):
        pres = presentations[name]
        basis = tp.build_basis(pres, 4)
        cache = tp.OperatorCache(pres, basis)
        for k in range(2):
            r = tp.check_matrix_units(pres, basis, k, 2, cache)
            assert r.passed, (name, k, r.witness)
            samples = tp.hk_sample_operators(pres, basis, k, 1, 1, cache)
            assert tp.check_hk_invariance(pres, basis, k, samples).passed


def test_wrong_adjoint_is_caught(bs23, monkeypatch):
    basis = tp.build_basis(bs23, 3)
    cache = tp.OperatorCache(bs23, basis)
    # pretend T_p* is T_p: the isometry check must fail
    monkeypatch.setattr(cache, "adj", cache.op)
    r = tp.check_isometry(bs23, basis, [word(bs23, "x")], cache)
    assert r.status == "fail"


def test_hk_detects_height_change(bs23):
    basis = tp.build_basis(bs23, 3)
    cache = tp.OperatorCache(bs23, basis)
    lift = cache.op(word(bs23, "t"))
    r = tp.check_hk_invariance(bs23, basis, 0, [((word(bs23, "t"),), lift)])
    assert r.status == "fail"


def test_export_triplets(bs23):
    basis = tp.build_basis(bs23, 2)
    op = tp.toeplitz_op(bs23, basis, word(bs23, "x"))
    text = tp.export_triplets(basis, op)
    lines = text.splitlines()
    assert lines[0] == "# dimension 7"
    assert lines[1] == f"# safe_columns {len(op.safe)}"
    # T_x ε_e = ε_x, with e and x at positions 0 and 2
    assert "2 0 1" in lines[2:]
    assert all(len(line.split()) == 3 for line in lines[2:])
