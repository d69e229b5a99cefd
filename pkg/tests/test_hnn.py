from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import show, word
from qlorder import hnn
from qlorder.core import is_infinite
from qlorder.groups import UnsupportedError
from qlorder.hnn import NormalFormWord
from qlorder.oracles import all_normal_forms, syllable_form
from qlorder.syntax import format_nf, parse_word

LETTERS = {
    "BS(2,3)": ["x", "x^2", "t"],
    "BS(3,2)": ["x", "t"],
    "Z2(2,3,3,2)": ["(1,0)", "(0,1)", "t"],
    "F2(2,3,b)": ["a", "b", "t"],
    "F2(1,1,b)": ["a", "b", "t"],
}


def positive_texts(name, max_size=6):
    return st.lists(st.sampled_from(LETTERS[name]), max_size=max_size).map(" ".join)


# ------------------------------------------------------------ normal forms


@pytest.mark.parametrize("text, expected", [
    ("x^3 t", "t . x^2"),
    ("x^4 t", "x . t . x^2"),
    ("t x^3 t", "t . t . x^2"),
    ("x t x^2", "x . t . x^2"),
    ("", "e"),
])
def test_bs23_normal_forms(bs23, text, expected):
    assert format_nf(bs23, word(bs23, text)) == expected


def test_free_and_lattice_normal_forms(free23, z2):
    assert show(free23, word(free23, "b a^5 t")) == "b a t b^6"
    assert show(z2, word(z2, "(3,4) t (2,3) t")) == "(1,1) t (1,2) t (6,2)"


def test_syllables_are_coset_minimal(presentations):
    for name, pres in presentations.items():
        if name not in LETTERS:
            continue
        x = word(pres, " ".join(LETTERS[name] * 3))
        for p in x.syllables:
            assert pres.sub.coset_rep_A(p) == p


def test_group_normal_form_cancels(bs23):
    g = hnn.group_nf(bs23, parse_word(bs23, "t t^-1"))
    assert g.exponents == () and g.elements == ((0,),)
    # t⁻¹ x³ t = x²
    assert hnn.group_nf(bs23, parse_word(bs23, "t^-1 x^3 t")).elements == ((2,),)
    # x t x² t⁻¹ = x·x³ = x⁴
    assert hnn.group_nf(bs23, parse_word(bs23, "x t x^2 t^-1")).elements == ((4,),)
    assert not hnn.is_star_positive(bs23, parse_word(bs23, "t^-1"))
    assert hnn.is_star_positive(bs23, parse_word(bs23, "t^-1 x^3 t"))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_nf_matches_group_normal_form(presentations, data):
    name = data.draw(st.sampled_from(sorted(LETTERS)))
    pres = presentations[name]
    text = data.draw(positive_texts(name))
    x = word(pres, text)
    assert hnn.general_of(pres, x) == hnn.group_nf(pres, parse_word(pres, text))
    assert x.height == text.split().count("t")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_multiplication_is_associative(presentations, data):
    name = data.draw(st.sampled_from(sorted(LETTERS)))
    pres = presentations[name]
    x, y, z = (word(pres, data.draw(positive_texts(name, 4))) for _ in range(3))
    m = hnn.multiply
    assert m(pres, m(pres, x, y), z) == m(pres, x, m(pres, y, z))
    assert m(pres, x, y).height == x.height + y.height


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_rewriting_reaches_only_the_normal_form(presentations, data):
    name = data.draw(st.sampled_from(["BS(2,3)", "Z2(2,3,3,2)", "F2(2,3,b)"]))
    pres = presentations[name]
    tokens = parse_word(pres, data.draw(positive_texts(name, 5)))
    forms = all_normal_forms(pres, syllable_form(pres, tokens))
    assert forms == {hnn.nf(pres, tokens)}


# ------------------------------------------------------------ minimal pairs


@pytest.mark.parametrize("alpha, beta, mu, nu", [
    ("x^3 t", "t", "x^3", "e"),
    ("t", "x", "t", "x"),
    ("x t", "t x", "x t", "t x"),
    ("t x^2", "x t", "x^2", "e"),
])
def test_min_pair_examples(bs23, alpha, beta, mu, nu):
    pair = hnn.min_pair(bs23, word(bs23, alpha), word(bs23, beta))
    assert (show(bs23, pair.mu), show(bs23, pair.nu)) == (mu, nu)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_min_pair_represents_the_fraction(presentations, data):
    name = data.draw(st.sampled_from(sorted(LETTERS)))
    pres = presentations[name]
    alpha = word(pres, data.draw(positive_texts(name, 5)))
    beta = word(pres, data.draw(positive_texts(name, 5)))
    mu, nu = hnn.min_pair(pres, alpha, beta)
    assert hnn.fraction_nf(pres, mu, nu) == hnn.fraction_nf(pres, alpha, beta)
    # minimal: both factors divide the original pair by the same element
    d = hnn.divide(pres, mu, alpha)
    assert d is not None
    assert hnn.multiply(pres, nu, d) == beta


# ------------------------------------------------------------- order


@pytest.mark.parametrize("x, y, expected", [
    ("x", "t x^2", True),
    ("x", "t", False),
    ("x^3", "t x^2", True),
    ("x^2", "t x", False),
    ("t", "x^3 t", True),
    ("e", "t", True),
    ("t", "e", False),
])
def test_leq_examples(bs23, x, y, expected):
    assert hnn.leq_star(bs23, word(bs23, x), word(bs23, y)) is expected


@pytest.mark.parametrize("name, x, y, expected", [
    ("BS(2,3)", "x", "t", "t x^2"),
    ("BS(2,3)", "x t", "t", "infinity"),
    ("BS(2,3)", "x^2", "t x", "t x^2"),
    ("BS(2,3)", "x t", "x^2 t", "infinity"),
    ("F2(1,1,b)", "a", "t", "t b"),
    ("F2(1,1,b)", "a", "b", "infinity"),
    ("F2(1,1,b)", "t", "a t", "t b"),
    ("F2(2,3,b)", "a^2", "t", "t b^3"),
    ("F2(2,3,b)", "a", "t", "t b^3"),
    ("F2(2,3,b)", "b a", "b t", "b t b^3"),
    ("Z2(2,3,3,2)", "(1,0)", "t", "t (3,0)"),
    ("Z2(2,3,3,2)", "(0,1) t", "(1,0)", "(0,1) t (3,0)"),
])
def test_join_examples(presentations, name, x, y, expected):
    pres = presentations[name]
    j = hnn.join_star(pres, word(pres, x), word(pres, y))
    assert ("infinity" if is_infinite(j) else show(pres, j)) == expected


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_leq_agrees_with_divide(presentations, data):
    name = data.draw(st.sampled_from(sorted(LETTERS)))
    pres = presentations[name]
    x = word(pres, data.draw(positive_texts(name, 4)))
    w = word(pres, data.draw(positive_texts(name, 4)))
    y = hnn.multiply(pres, x, w)
    assert hnn.leq_star(pres, x, y)
    assert hnn.divide(pres, x, y) == w
    z = word(pres, data.draw(positive_texts(name, 5)))
    assert hnn.leq_star(pres, x, z) == (hnn.divide(pres, x, z) is not None)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_join_is_an_upper_bound_of_the_same_height(presentations, data):
    name = data.draw(st.sampled_from(sorted(LETTERS)))
    pres = presentations[name]
    x = word(pres, data.draw(positive_texts(name, 4)))
    y = word(pres, data.draw(positive_texts(name, 4)))
    j = hnn.join_star(pres, x, y)
    assert hnn.join_star(pres, y, x) == j
    if is_infinite(j):
        return
    assert hnn.leq_star(pres, x, j) and hnn.leq_star(pres, y, j)
    assert j.height == max(x.height, y.height)
    # a right multiple of x that also lies above y lies above the join
    u = hnn.multiply(pres, x, word(pres, data.draw(positive_texts(name, 4))))
    if hnn.leq_star(pres, y, u):
        assert hnn.leq_star(pres, j, u)


def test_join_with_itself_and_identity(bs23):
    x = word(bs23, "x t x")
    e = hnn.identity_word(bs23)
    assert hnn.join_star(bs23, x, x) == x
    assert hnn.join_star(bs23, x, e) == x


def test_order_needs_a_ceiling(negative):
    x = NormalFormWord(((0, 0),), (0, 0))
    with pytest.raises(UnsupportedError):
        hnn.join_star(negative, hnn.base_word(negative, (1, 0)), x)


# ------------------------------------------------------------- stems


def test_stems(bs23):
    assert [show(bs23, s) for s in hnn.sigma_elements(bs23, 1, 3)] == ["t", "x t", "x^2 t"]
    assert len(hnn.sigma_elements(bs23, 2, 3)) == 9
    assert hnn.sigma_elements(bs23, 0, 3) == [hnn.identity_word(bs23)]
    x = word(bs23, "x^4 t x")
    assert show(bs23, hnn.stem(bs23, x)) == "x t"
    with pytest.raises(ValueError):
        hnn.sigma_elements(bs23, -1, 3)


def test_base_word_rejects_negatives(bs23):
    with pytest.raises(ValueError):
        hnn.base_word(bs23, (-1,))
