"""Elements of an HNN extension G* and the order on its positive monoid P*.

Positive elements are kept in the normal form p_0 t p_1 t ... p_{n-1} t p_n
with every p_i (i < n) the minimal representative of its A-coset.  General
elements of G* use Britton-reduced coset normal forms and serve as the
equality oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .core import INFINITY, MinimalPair, is_infinite, leq, min_pair_base
from .groups import HnnPresentation, UnsupportedError


class Stable:
    """The stable letter t (exponent +1) or its inverse (-1)."""

    __slots__ = ("exponent",)

    def __init__(self, exponent: int):
        self.exponent = exponent

    def __repr__(self):
        return "t" if self.exponent == 1 else "t^-1"

    def __eq__(self, other):
        return isinstance(other, Stable) and other.exponent == self.exponent

    def __hash__(self):
        return hash(("t", self.exponent))


T = Stable(1)
T_INV = Stable(-1)


def is_stable(token) -> bool:
    return isinstance(token, Stable)


@dataclass(frozen=True)
class NormalFormWord:
    syllables: tuple
    tail: object

    @property
    def height(self) -> int:
        return len(self.syllables)


@dataclass(frozen=True)
class GeneralWord:
    """g_0 t^{ε_1} g_1 ... t^{ε_n} g_n in Britton-reduced coset normal form."""

    elements: tuple
    exponents: tuple

    @property
    def height(self) -> int:
        return sum(self.exponents)

    def is_positive_form(self, base) -> bool:
        return all(e == 1 for e in self.exponents) and all(base.is_positive(g) for g in self.elements)


def identity_word(pres: HnnPresentation) -> NormalFormWord:
    return NormalFormWord((), pres.base.identity)


def base_word(pres: HnnPresentation, p) -> NormalFormWord:
    if not pres.base.is_positive(p):
        raise ValueError(f"{pres.base.format(p)} is not positive")
    return NormalFormWord((), p)


# ----------------------------------------------------------- normal forms


def _sweep(pres, syllables: list, carry, tokens):
    base, sub = pres.base, pres.sub
    for tok in tokens:
        if tok == T:
            rep = sub.coset_rep_A(carry)
            a = base.divide_left(rep, carry)
            if not base.is_positive(a):
                raise ValueError(
                    f"coset representative {base.format(rep)} is not below {base.format(carry)}; "
                    "the presentation fails the minimal-coset hypothesis"
                )
            syllables.append(rep)
            carry = sub.phi(a)
        elif is_stable(tok):
            raise ValueError("t^-1 is not a positive token")
        else:
            if not base.is_positive(tok):
                raise ValueError(f"{base.format(tok)} is not a positive base element")
            carry = base.multiply(carry, tok)
    return NormalFormWord(tuple(syllables), carry)


def nf(pres: HnnPresentation, tokens: Sequence) -> NormalFormWord:
    """Positive normal form of a word in positive base elements and t."""
    return _sweep(pres, [], pres.base.identity, tokens)


def multiply(pres: HnnPresentation, x: NormalFormWord, y: NormalFormWord) -> NormalFormWord:
    return _sweep(pres, list(x.syllables), x.tail, to_tokens(pres, y))


def to_tokens(pres: HnnPresentation, x: NormalFormWord, drop_identity: bool = False) -> list:
    e = pres.base.identity
    out = []
    for p in x.syllables:
        if not (drop_identity and p == e):
            out.append(p)
        out.append(T)
    if not (drop_identity and x.tail == e):
        out.append(x.tail)
    return out


def inverse_tokens(pres: HnnPresentation, tokens: Sequence) -> list:
    inv = pres.base.invert
    return [Stable(-tok.exponent) if is_stable(tok) else inv(tok) for tok in reversed(tokens)]


def height(x: NormalFormWord) -> int:
    return x.height


def stem(pres: HnnPresentation, x: NormalFormWord) -> NormalFormWord:
    return NormalFormWord(x.syllables, pres.base.identity)


def tail(x: NormalFormWord):
    return x.tail


def group_nf(pres: HnnPresentation, tokens: Sequence) -> GeneralWord:
    """Britton reduction followed by left-to-right coset normalization."""
    base, sub = pres.base, pres.sub
    elems = [base.identity]
    exps: list = []
    for tok in tokens:
        if not is_stable(tok):
            elems[-1] = base.multiply(elems[-1], tok)
            continue
        eps = tok.exponent
        if exps and exps[-1] == -eps:
            mid = elems[-1]
            if eps == 1 and sub.in_A(mid):
                exps.pop()
                elems.pop()
                elems[-1] = base.multiply(elems[-1], sub.phi(mid))
                continue
            if eps == -1 and sub.in_B(mid):
                exps.pop()
                elems.pop()
                elems[-1] = base.multiply(elems[-1], sub.phi_inv(mid))
                continue
        exps.append(eps)
        elems.append(base.identity)
    for i, eps in enumerate(exps):
        g = elems[i]
        if eps == 1:
            rep = sub.coset_rep_A(g)
            moved = sub.phi(base.divide_left(rep, g))
        else:
            rep = sub.coset_rep_B(g)
            moved = sub.phi_inv(base.divide_left(rep, g))
        elems[i] = rep
        elems[i + 1] = base.multiply(moved, elems[i + 1])
    return GeneralWord(tuple(elems), tuple(exps))


def general_of(pres: HnnPresentation, x: NormalFormWord) -> GeneralWord:
    return group_nf(pres, to_tokens(pres, x))


def fraction_nf(pres: HnnPresentation, x: NormalFormWord, y: NormalFormWord) -> GeneralWord:
    """Normal form of x y⁻¹ in G*."""
    return group_nf(pres, to_tokens(pres, x) + inverse_tokens(pres, to_tokens(pres, y)))


def is_star_positive(pres: HnnPresentation, tokens: Sequence) -> bool:
    """Membership of a mixed word in P*, decided by the word problem."""
    return group_nf(pres, tokens).is_positive_form(pres.base)


# ------------------------------------------------------------ minimal pairs


def min_pair(pres: HnnPresentation, alpha: NormalFormWord, beta: NormalFormWord) -> MinimalPair:
    """Least (μ, ν) in P* with μν⁻¹ = αβ⁻¹.

    The junction r s⁻¹ between the two tails is cancelled through t ... t⁻¹
    whenever it lies in B, pulling φ⁻¹ of its B-minimal pair into the
    neighbouring syllables.  Each cancellation removes one t from both
    sides, so the loop ends.
    """
    base, sub = pres.base, pres.sub
    ps, r = list(alpha.syllables), alpha.tail
    qs, s = list(beta.syllables), beta.tail
    while ps and qs:
        sigma, tau = min_pair_base(base, r, s)
        # r s⁻¹ ∈ B iff its minimal pair lies in B∩P
        if not (sub.in_B(sigma) and sub.in_B(tau)):
            break
        r = base.multiply(ps.pop(), sub.phi_inv(sigma))
        s = base.multiply(qs.pop(), sub.phi_inv(tau))
    if ps or not qs:
        # no t⁻¹ left, or a t and a t⁻¹ both remain around a junction outside B
        sigma, tau = min_pair_base(base, r, s)
        return MinimalPair(NormalFormWord(tuple(ps), sigma), NormalFormWord(tuple(qs), tau))
    # no t left: the inverse fraction s r⁻¹ is in the previous case
    nu, mu = min_pair(pres, NormalFormWord(tuple(qs), s), NormalFormWord((), r))
    return MinimalPair(mu, nu)


# -------------------------------------------------------------- the order


def _a_ceiling(pres, c):
    if not pres.sub.has_a_ceiling:
        raise UnsupportedError(f"{pres.name} has no A-ceiling; order queries on P* are unavailable")
    return pres.sub.a_ceiling(c)


def _pull_through(pres, x_base, q0):
    """For x ∈ P, q0 ∈ P: φ(a) for the least a ∈ A∩P with x ≤ q0·a, or None.

    Every common upper bound of x and q0 t y' has the form q0 t z with
    z ≥ φ(a); this is what both leq_star and join_star reduce to.
    """
    base = pres.base
    j = base.join(x_base, q0)
    if is_infinite(j):
        return None
    a_min = _a_ceiling(pres, base.divide_left(q0, j))
    if a_min is None:
        return None
    return pres.sub.phi(a_min)


def leq_star(pres: HnnPresentation, x: NormalFormWord, y: NormalFormWord) -> bool:
    base = pres.base
    while x.height and y.height:
        if x.syllables[0] != y.syllables[0]:
            return False
        x = NormalFormWord(x.syllables[1:], x.tail)
        y = NormalFormWord(y.syllables[1:], y.tail)
    if x.height:
        return False
    if not y.height:
        return leq(base, x.tail, y.tail)
    carry = _pull_through(pres, x.tail, y.syllables[0])
    if carry is None:
        return False
    return leq_star(pres, NormalFormWord((), carry), NormalFormWord(y.syllables[1:], y.tail))


def join_star(pres: HnnPresentation, x: NormalFormWord, y: NormalFormWord):
    """Least common upper bound in P*, or INFINITY."""
    base = pres.base
    prefix = []
    while x.height and y.height:
        if x.syllables[0] != y.syllables[0]:
            return INFINITY
        prefix.append(x.syllables[0])
        x = NormalFormWord(x.syllables[1:], x.tail)
        y = NormalFormWord(y.syllables[1:], y.tail)
    if not x.height and not y.height:
        j = base.join(x.tail, y.tail)
        if is_infinite(j):
            return INFINITY
        return NormalFormWord(tuple(prefix), j)
    if x.height:
        x, y = y, x
    q0 = y.syllables[0]
    carry = _pull_through(pres, x.tail, q0)
    if carry is None:
        return INFINITY
    rest = join_star(pres, NormalFormWord((), carry), NormalFormWord(y.syllables[1:], y.tail))
    if is_infinite(rest):
        return INFINITY
    return NormalFormWord(tuple(prefix) + (q0,) + rest.syllables, rest.tail)


def divide(pres: HnnPresentation, x: NormalFormWord, y: NormalFormWord) -> NormalFormWord | None:
    """x⁻¹y as a positive normal form when x ≤ y, else None."""
    g = group_nf(pres, inverse_tokens(pres, to_tokens(pres, x)) + to_tokens(pres, y))
    if not g.is_positive_form(pres.base):
        return None
    return NormalFormWord(g.elements[:-1], g.elements[-1])


# ------------------------------------------------------------------ stems


def l_a_elements(pres: HnnPresentation, bound: int) -> list:
    sub = pres.sub
    return [p for p in pres.base.enumerate_positive(bound) if sub.coset_rep_A(p) == p]


def sigma_elements(pres: HnnPresentation, k: int, bound: int) -> list:
    """Stems of height k whose syllables have encoding size <= bound."""
    if k < 0:
        raise ValueError("height must be >= 0")
    letters = l_a_elements(pres, bound)
    e = pres.base.identity
    return [NormalFormWord(tuple(combo), e) for combo in itertools.product(letters, repeat=k)]
