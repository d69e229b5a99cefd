"""Oracle-agreement sweeps over bounded balls of P*.

The ground truth here is the Britton normal form: y lies above x exactly
when x⁻¹y has a positive reduced form.  Upper-bound sets are kept as bit
masks over a candidate ball and built along the breadth-first tree of the
ball, since Up(x·g) ⊆ Up(x) and the quotient g⁻¹(x⁻¹z) is one short word
problem away from the parent's quotient.
"""

from __future__ import annotations

import itertools
import random
import time

from .core import is_infinite
from .hnn import (
    T,
    T_INV,
    GeneralWord,
    NormalFormWord,
    general_of,
    group_nf,
    inverse_tokens,
    join_star,
    leq_star,
    min_pair,
    nf,
    to_tokens,
    fraction_nf,
)
from .oracles import RewriteSystem, divides, positive_ball, syllable_form
from .reports import CheckReport, finish
from .syntax import format_nf, format_tokens


def _positive_nf(g: GeneralWord) -> NormalFormWord:
    return NormalFormWord(g.elements[:-1], g.elements[-1])


class OrderSweep:
    """Exact upper-bound sets of a radius-``radius`` ball inside a larger ball.

    ``up_mask(i)`` is a bit mask over ``candidates`` (the ball of radius
    ``witness_radius``) marking every z with x_i ≤ z.  Any element of the
    candidate ball can be queried; masks are built lazily along the BFS tree.
    """

    def __init__(self, pres, radius: int = 5, witness_radius: int = 7):
        if witness_radius < radius:
            raise ValueError("witness radius must be at least the sweep radius")
        self.pres = pres
        self.radius = radius
        self.witness_radius = witness_radius
        self.candidates = positive_ball(pres, witness_radius)
        self.size = sum(1 for b in self.candidates if b.length <= radius)
        self.index = {b.key: i for i, b in enumerate(self.candidates)}
        self._by_tokens = {b.tokens: i for i, b in enumerate(self.candidates)}
        self.nfs = [_positive_nf(b.key) for b in self.candidates]
        # quotient dictionaries: z index -> x⁻¹z as a positive normal form
        self._quot: dict[int, dict] = {0: {j: self.nfs[j] for j in range(len(self.candidates))}}
        self._mask: dict[int, int] = {0: (1 << len(self.candidates)) - 1}

    # -------------------------------------------------------- upper bounds

    def _build(self, i):
        if i in self._quot:
            return
        tokens = self.candidates[i].tokens
        parent = self._by_tokens[tokens[:-1]]
        self._build(parent)
        g = tokens[-1]
        g_inv = [T_INV] if g == T else [self.pres.base.invert(g)]
        quot = {}
        mask = 0
        for j, q in self._quot[parent].items():
            r = group_nf(self.pres, g_inv + to_tokens(self.pres, q))
            if r.is_positive_form(self.pres.base):
                quot[j] = _positive_nf(r)
                mask |= 1 << j
        self._quot[i] = quot
        self._mask[i] = mask

    def up_mask(self, i) -> int:
        self._build(i)
        return self._mask[i]

    def quotient(self, i, j):
        """x_i⁻¹ x_j as a normal form when x_i ≤ x_j, else None."""
        self._build(i)
        return self._quot[i].get(j)

    def members(self, mask):
        j = 0
        while mask:
            if mask & 1:
                yield j
            mask >>= 1
            j += 1

    def locate(self, x: NormalFormWord):
        return self.index.get(general_of(self.pres, x))

    # ------------------------------------------------------------- sweeps

    def leq_agreement(self) -> tuple[CheckReport, dict]:
        """leq_star against bounded divisibility (witness in the candidate ball)."""
        failures = []
        checked = 0
        for i in range(self.size):
            for j in range(self.size):
                q = self.quotient(i, j)
                oracle = q is not None and self.index.get(general_of(self.pres, q)) is not None
                exact = q is not None
                got = leq_star(self.pres, self.nfs[i], self.nfs[j])
                checked += 1
                if got != oracle or exact != oracle:
                    failures.append({
                        "x": self._fmt(i), "y": self._fmt(j),
                        "leq_star": got, "bounded_oracle": oracle, "exact": exact,
                    })
        return finish("leq_star_vs_oracle", failures, checked, self._bounds()), {}

    def join_agreement(self) -> tuple[CheckReport, list]:
        """join_star against the least element of the bounded upper-bound set.

        Returns the report and the list of finite joins as
        ``(x, y, join)`` normal-form triples for downstream checks.
        """
        failures = []
        finite = []
        checked = 0
        beyond = 0
        for i in range(self.size):
            mi = self.up_mask(i)
            for j in range(i, self.size):
                ub = mi & self.up_mask(j)
                x, y = self.nfs[i], self.nfs[j]
                z = join_star(self.pres, x, y)
                checked += 1
                if is_infinite(z):
                    if ub:
                        w = next(self.members(ub))
                        failures.append({"x": self._fmt(i), "y": self._fmt(j), "join_star": "infinity",
                                         "common_upper_bound": self._fmt(w)})
                    continue
                finite.append((x, y, z))
                k = self.locate(z)
                if k is not None:
                    ok = bool(ub >> k & 1) and not (ub & ~self.up_mask(k))
                else:
                    # the join lies outside the candidate ball: check it directly
                    beyond += 1
                    ok = self._exact_least(x, y, z, ub)
                if not ok:
                    failures.append({"x": self._fmt(i), "y": self._fmt(j),
                                     "join_star": self._fmt_nf(z), "upper_bounds": bin(ub).count("1")})
        notes = {"finite_joins": len(finite), "joins_outside_candidates": beyond}
        return finish("join_star_vs_oracle", failures, checked, self._bounds(), notes), finite

    def _exact_least(self, x, y, z, ub) -> bool:
        zt = to_tokens(self.pres, z)
        if not (divides(self.pres, to_tokens(self.pres, x), zt) and divides(self.pres, to_tokens(self.pres, y), zt)):
            return False
        return all(divides(self.pres, zt, self.candidates[w].tokens) for w in self.members(ub))

    def _bounds(self):
        return {"radius": self.radius, "witness_radius": self.witness_radius}

    def _fmt(self, i):
        return self._fmt_nf(self.nfs[i])

    def _fmt_nf(self, x):
        return format_tokens(self.pres, x)


def stem_lemma(finite_joins) -> CheckReport:
    """θ(x ∨ y) = max(θ(x), θ(y)) on every finite join."""
    failures = [
        {"x_height": x.height, "y_height": y.height, "join_height": z.height}
        for x, y, z in finite_joins if z.height != max(x.height, y.height)
    ]
    return finish("stem_lemma", failures, len(finite_joins), {})


def min_pair_sweep(pres, radius: int = 4, factor_radius: int = 6) -> CheckReport:
    """min_pair against every factorization γδ⁻¹ with γ, δ in a ball."""

    sweep = OrderSweep(pres, radius=factor_radius, witness_radius=factor_radius)
    gammas = sweep.candidates
    gnf = sweep.nfs
    inv = [inverse_tokens(pres, list(b.tokens)) for b in gammas]
    fractions: dict = {}
    for a, ga in enumerate(gammas):
        for b in range(len(gammas)):
            key = group_nf(pres, list(ga.tokens) + inv[b])
            fractions.setdefault(key, []).append((a, b))

    def above(x):
        i = sweep.locate(x)
        if i is not None:
            return sweep.up_mask(i)
        xt = to_tokens(pres, x)
        return sum(1 << j for j, z in enumerate(gammas) if divides(pres, xt, z.tokens))

    memo: dict = {}

    def leq_memo(x, j):
        key = (x, j)
        if key not in memo:
            memo[key] = leq_star(pres, x, gnf[j])
        return memo[key]

    failures = []
    checked = 0
    for ia in range(len(gammas)):
        if gammas[ia].length > radius:
            continue
        for ib in range(len(gammas)):
            if gammas[ib].length > radius:
                continue
            alpha, beta = gnf[ia], gnf[ib]
            mu, nu = min_pair(pres, alpha, beta)
            target = group_nf(pres, list(gammas[ia].tokens) + inv[ib])
            checked += 1
            bad = None
            if fraction_nf(pres, mu, nu) != target:
                bad = "mu nu^-1 differs from alpha beta^-1"
            else:
                up_mu, up_nu = above(mu), above(nu)
                for a, b in fractions.get(target, ()):
                    if not (up_mu >> a & 1 and up_nu >> b & 1):
                        bad = {"gamma": format_tokens(pres, gnf[a]), "delta": format_tokens(pres, gnf[b])}
                        break
                    if not (leq_memo(mu, a) and leq_memo(nu, b)):
                        bad = {"gamma": format_tokens(pres, gnf[a]), "delta": format_tokens(pres, gnf[b]),
                               "reason": "leq_star disagrees with divisibility"}
                        break
            if bad is not None:
                failures.append({"alpha": format_tokens(pres, alpha), "beta": format_tokens(pres, beta),
                                 "mu": format_tokens(pres, mu), "nu": format_tokens(pres, nu), "problem": bad})
    return finish("min_pair_minimality", failures, checked, {"radius": radius, "factor_radius": factor_radius})


def lemma_base_bound(pres, size_bound: int = 6, radius: int = 6) -> CheckReport:
    """A common upper bound in P* forces a finite join in P."""
    base = pres.base
    ps = base.enumerate_positive(size_bound)
    sweep = OrderSweep(pres, radius=radius, witness_radius=radius)
    locs = []
    for p in ps:
        i = sweep.index.get(group_nf(pres, [p]))
        locs.append(i)
    failures = []
    checked = 0
    for a, p in enumerate(ps):
        for b in range(a, len(ps)):
            q = ps[b]
            checked += 1
            if not is_infinite(base.join(p, q)):
                continue
            ia, ib = locs[a], locs[b]
            if ia is None or ib is None:
                mask = _direct_mask(pres, sweep, p) & _direct_mask(pres, sweep, q)
            else:
                mask = sweep.up_mask(ia) & sweep.up_mask(ib)
            if mask:
                w = next(sweep.members(mask))
                failures.append({"p": base.format(p), "q": base.format(q),
                                 "upper_bound": sweep._fmt(w)})
    return finish("cub_in_P_star_implies_cub_in_P", failures, checked,
                  {"size_bound": size_bound, "radius": radius})


def _direct_mask(pres, sweep, p):
    mask = 0
    for j, z in enumerate(sweep.candidates):
        if divides(pres, [p], z.tokens):
            mask |= 1 << j
    return mask


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def positive_words(pres, max_length: int):
    """Every word over the positive generators and t, up to ``max_length``."""
    gens = list(pres.base.positive_generators()) + [T]
    for n in range(max_length + 1):
        yield from itertools.product(gens, repeat=n)


def confluence(pres, max_length: int = 8, orders: int = 200, seed: int = 0) -> CheckReport:
    """Random rewriting orders all end in the normal form computed by `nf`.

    Words with the same syllable decomposition start the rewriting system in
    the same state, so each decomposition is tried once.
    """
    if pres.sub.a_generators() is None:
        return CheckReport("normal_form_confluence", "unsupported", 0, {"max_length": max_length},
                           {"reason": "no generators for A∩P"})
    system = RewriteSystem(pres)
    rng = random.Random(seed)
    seen = set()
    failures = []
    words = 0
    for word in positive_words(pres, max_length):
        words += 1
        sylls = syllable_form(pres, word)
        if sylls in seen:
            continue
        seen.add(sylls)
        expected = nf(pres, word)
        for got in system.random_normal_forms(sylls, rng, orders):
            if got != expected:
                failures.append({"word": " ".join(map(_tok, [pres] * len(word), word)),
                                 "nf": format_nf(pres, expected), "rewritten": format_nf(pres, got)})
                break
    return finish("normal_form_confluence", failures, len(seen),
                  {"max_length": max_length, "orders": orders, "seed": seed},
                  {"words": words, "distinct_syllable_forms": len(seen)})


def _tok(pres, tok):
    return repr(tok) if tok == T else pres.base.format(tok)
