"""Brute-force ground truth: bounded enumeration of P* and random rewriting.

Nothing here uses the order algorithms of `hnn`.  Elements of P* are found
by breadth-first search over positive words and identified through the
Britton normal form, so every oracle below depends only on the defining
relations and the word problem.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .core import INFINITY
from .hnn import T, GeneralWord, NormalFormWord, group_nf, inverse_tokens, is_star_positive, nf


@dataclass(frozen=True)
class BallElement:
    tokens: tuple
    key: GeneralWord
    length: int

    @property
    def height(self) -> int:
        return self.key.height


@lru_cache(maxsize=64)
def positive_ball(pres, radius: int) -> tuple:
    """Distinct elements of P* spelled by positive words of length <= radius.

    Each element keeps its first shortest spelling; order is by length and
    then by generation order, which is deterministic.
    """
    gens = list(pres.base.positive_generators()) + [T]
    seen: dict = {}
    out = []
    frontier = [()]
    seen[group_nf(pres, ())] = True
    out.append(BallElement((), group_nf(pres, ()), 0))
    for length in range(1, radius + 1):
        nxt = []
        for word in frontier:
            for g in gens:
                w = word + (g,)
                key = group_nf(pres, w)
                if key not in seen:
                    seen[key] = True
                    out.append(BallElement(w, key, length))
                    nxt.append(w)
        frontier = nxt
    return tuple(out)


def ball_nf(pres, radius: int) -> list:
    return [nf(pres, b.tokens) for b in positive_ball(pres, radius)]


def divides(pres, x_tokens, y_tokens) -> bool:
    """x ≤ y decided as x⁻¹y ∈ P* by the word problem."""
    return is_star_positive(pres, inverse_tokens(pres, list(x_tokens)) + list(y_tokens))


def divides_bounded(pres, x_tokens, y_key: GeneralWord, witnesses) -> tuple | None:
    """A witness w (tokens) among ``witnesses`` with x w = y, or None."""
    x_tokens = list(x_tokens)
    for w in witnesses:
        if group_nf(pres, x_tokens + list(w.tokens)) == y_key:
            return w.tokens
    return None


def right_multiples(pres, x_tokens, witnesses) -> set:
    """Keys of x·w for every w in ``witnesses``."""
    x_tokens = list(x_tokens)
    return {group_nf(pres, x_tokens + list(w.tokens)) for w in witnesses}


def brute_lub(pres, x_tokens, y_tokens, candidates):
    """Least common upper bound of x and y among ``candidates`` (ball elements).

    Returns the ball element, ``INFINITY`` when no candidate bounds both, or
    None when bounds exist but none is least among them.
    """
    ubs = [z for z in candidates if divides(pres, x_tokens, z.tokens) and divides(pres, y_tokens, z.tokens)]
    if not ubs:
        return INFINITY
    for z in ubs:
        if all(divides(pres, z.tokens, w.tokens) for w in ubs):
            return z
    return None


# ------------------------------------------------------------ rewriting


def syllable_form(pres, tokens) -> tuple:
    """Split a positive word into its base syllables around each t."""
    base = pres.base
    sylls = [base.identity]
    for tok in tokens:
        if tok == T:
            sylls.append(base.identity)
        else:
            sylls[-1] = base.multiply(sylls[-1], tok)
    return tuple(sylls)


class RewriteSystem:
    """The rules a t -> t φ(a) for generators a of A∩P, on syllable tuples."""

    def __init__(self, pres, gens=None):
        gens = gens if gens is not None else pres.sub.a_generators()
        if gens is None:
            raise ValueError(f"{pres.name} does not list generators of A∩P")
        base = pres.base
        self.base = base
        self.rules = [(a, base.invert(a), pres.sub.phi(a)) for a in gens]

    def redexes(self, sylls) -> list:
        """Positions i and generators a with syllable i = g·a, g ∈ P."""
        mul, pos = self.base.multiply, self.base.is_positive
        return [(i, a) for i in range(len(sylls) - 1) for a, a_inv, _ in self.rules
                if pos(mul(sylls[i], a_inv))]

    def step(self, sylls, i, a) -> tuple:
        """Apply a t = t φ(a) at the t following syllable i."""
        _, a_inv, b = next(r for r in self.rules if r[0] == a)
        s = list(sylls)
        s[i] = self.base.multiply(s[i], a_inv)
        s[i + 1] = self.base.multiply(b, s[i + 1])
        return tuple(s)

    def random_normal_form(self, sylls, rng: random.Random) -> NormalFormWord:
        """Rewrite with randomly chosen redexes until none is left."""
        return next(self.random_normal_forms(sylls, rng, 1))

    def random_normal_forms(self, sylls, rng: random.Random, count: int):
        """``count`` independent random rewriting runs from the same word."""
        mul, pos = self.base.multiply, self.base.is_positive
        rules = self.rules
        last = len(sylls) - 1

        def applicable(s, i):
            return [(a_inv, b) for _, a_inv, b in rules if pos(mul(s[i], a_inv))] if i < last else []

        start = [applicable(sylls, i) for i in range(len(sylls))]
        for _ in range(count):
            s = list(sylls)
            opts = list(start)
            while True:
                options = [(i, r) for i in range(last) for r in opts[i]]
                if not options:
                    break
                i, (a_inv, b) = options[rng.randrange(len(options))]
                s[i] = mul(s[i], a_inv)
                s[i + 1] = mul(b, s[i + 1])
                opts[i] = applicable(s, i)
                opts[i + 1] = applicable(s, i + 1)
            yield NormalFormWord(tuple(s[:-1]), s[-1])

    def all_normal_forms(self, sylls) -> set:
        """Every terminal word reachable by some rewriting order."""
        memo: dict = {}

        def walk(state):
            if state in memo:
                return memo[state]
            options = self.redexes(state)
            if not options:
                result = {NormalFormWord(state[:-1], state[-1])}
            else:
                result = set()
                for i, a in options:
                    result |= walk(self.step(state, i, a))
            memo[state] = result
            return result

        return walk(tuple(sylls))


def random_normal_form(pres, sylls, rng: random.Random, gens=None) -> NormalFormWord:
    return RewriteSystem(pres, gens).random_normal_form(sylls, rng)


def all_normal_forms(pres, sylls, gens=None) -> set:
    return RewriteSystem(pres, gens).all_normal_forms(sylls)
