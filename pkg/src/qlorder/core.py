"""Quasi-lattice ordered groups: the capability contract and generic order laws.

A concrete group supplies multiplication, inversion, the positive cone and
two join primitives; everything else here (the order, minimal pairs) is
derived from those.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Iterator, NamedTuple, Sequence

Element = Any


class Infinity:
    """Join result meaning "no common upper bound"."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinity"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()


def is_infinite(result) -> bool:
    return result is INFINITY


class MinimalPair(NamedTuple):
    mu: Element
    nu: Element


class QloGroup(ABC):
    """A group G with positive cone P such that (G, P) is quasi-lattice ordered.

    Elements are canonical hashable encodings, so ``==`` is group equality.
    """

    identity: Element

    @abstractmethod
    def multiply(self, x, y): ...

    @abstractmethod
    def invert(self, x): ...

    @abstractmethod
    def is_positive(self, x) -> bool: ...

    @abstractmethod
    def join(self, p, q):
        """Least common upper bound of ``p, q`` in P, or ``INFINITY``."""

    @abstractmethod
    def join_with_identity(self, x):
        """``x ∨ e`` for arbitrary ``x``: the least positive element above ``x``."""

    @abstractmethod
    def enumerate_positive(self, bound: int) -> list:
        """All of P with encoding size <= bound, in length-lex order."""

    @abstractmethod
    def enumerate_elements(self, bound: int) -> list:
        """All of G with encoding size <= bound, in length-lex order."""

    @abstractmethod
    def size(self, x) -> int: ...

    @abstractmethod
    def positive_generators(self) -> list: ...

    @abstractmethod
    def format(self, x) -> str: ...

    @abstractmethod
    def parse_token(self, token: str):
        """Parse one literal token, returning an element or raising ValueError."""

    def equals(self, x, y) -> bool:
        return x == y

    def product(self, items: Sequence) -> Element:
        result = self.identity
        for item in items:
            result = self.multiply(result, item)
        return result

    def divide_left(self, p, q):
        """``p⁻¹ q``."""
        return self.multiply(self.invert(p), q)

    def lub(self, x, y):
        """``x ∨ y`` for arbitrary group elements (least upper bound in P)."""
        jx = self.join_with_identity(x)
        if is_infinite(jx):
            return INFINITY
        jy = self.join_with_identity(y)
        if is_infinite(jy):
            return INFINITY
        return self.join(jx, jy)


def leq(g: QloGroup, p, q) -> bool:
    return g.is_positive(g.divide_left(p, q))


def min_pair_base(g: QloGroup, p, q) -> MinimalPair:
    """Minimal pair of ``x = p q⁻¹``: ``(x ∨ e, x⁻¹(x ∨ e))``."""
    x = g.multiply(p, g.invert(q))
    mu = g.join_with_identity(x)
    if is_infinite(mu):
        # p is an upper bound of x and e, so this only happens on a broken instance
        raise ArithmeticError(f"x ∨ e is infinite for x = {g.format(x)}")
    return MinimalPair(mu, g.divide_left(x, mu))


def upper_bounds(g: QloGroup, p, q, candidates) -> list:
    return [z for z in candidates if leq(g, p, z) and leq(g, q, z)]


def brute_join(g: QloGroup, p, q, candidates):
    """Least element among the common upper bounds found in ``candidates``.

    Returns ``INFINITY`` when no candidate is an upper bound and ``None`` when
    upper bounds exist but none of them is below all the others.
    """
    ubs = upper_bounds(g, p, q, candidates)
    if not ubs:
        return INFINITY
    least = [z for z in ubs if all(leq(g, z, w) for w in ubs)]
    return least[0] if least else None


def brute_min_pair(g: QloGroup, x, candidates) -> MinimalPair | None:
    """Search ``candidates``² for the factorization of ``x`` below all others."""
    pairs = [
        (a, b) for a in candidates for b in candidates
        if g.multiply(a, g.invert(b)) == x
    ]
    for a, b in pairs:
        if all(leq(g, a, c) and leq(g, b, d) for c, d in pairs):
            return MinimalPair(a, b)
    return None


def check_qlo_laws(g: QloGroup, bound: int) -> list[str]:
    """Return human-readable law violations among positives of size <= bound."""
    problems = []
    ps = g.enumerate_positive(bound)
    cone = g.enumerate_positive(2 * bound)
    for x in g.enumerate_elements(bound):
        if g.is_positive(x) and g.is_positive(g.invert(x)) and x != g.identity:
            problems.append(f"P ∩ P⁻¹ contains {g.format(x)}")
    for p in ps:
        for q in ps:
            j = g.join(p, q)
            if j != g.join(q, p):
                problems.append(f"join not commutative at {g.format(p)}, {g.format(q)}")
            expected = brute_join(g, p, q, cone)
            if j != expected and not (is_infinite(j) and expected is None):
                problems.append(
                    f"join({g.format(p)}, {g.format(q)}) = {j!r} but search gives {expected!r}"
                )
            pair = min_pair_base(g, p, q)
            if g.multiply(pair.mu, g.invert(pair.nu)) != g.multiply(p, g.invert(q)):
                problems.append(f"min pair does not factor {g.format(p)}·{g.format(q)}⁻¹")
            if not (leq(g, pair.mu, p) and leq(g, pair.nu, q)):
                problems.append(f"min pair not below ({g.format(p)}, {g.format(q)})")
    for z in ps:
        for p in ps:
            for q in ps:
                if leq(g, p, q) and not leq(g, g.multiply(z, p), g.multiply(z, q)):
                    problems.append("order is not left invariant")
    return problems


def iter_pairs(items) -> Iterator[tuple]:
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            yield a, b
