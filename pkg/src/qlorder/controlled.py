"""Controlled maps between quasi-lattice ordered groups, checked at a bound.

A candidate bundles a source and target order, the homomorphism between
them and a provider for the minimal elements Σ_k of each fibre.  The three
axioms are verified on enumerated elements only, so a pass means "no
counterexample up to the bound".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import hnn
from .core import QloGroup, is_infinite, leq
from .groups import IntLattice
from .oracles import positive_ball
from .reports import CheckReport, finish
from .syntax import format_tokens


class BaseOrder:
    """Adapter exposing (G, P) through the interface the verifiers use."""

    def __init__(self, group: QloGroup):
        self.group = group
        self.identity = group.identity

    def positives(self, bound):
        return self.group.enumerate_positive(bound)

    def multiply(self, x, y):
        return self.group.multiply(x, y)

    def leq(self, x, y):
        return leq(self.group, x, y)

    def join(self, x, y):
        return self.group.join(x, y)

    def format(self, x):
        return self.group.format(x)


class StarOrder:
    """Adapter for (G*, P*): elements are positive normal forms."""

    def __init__(self, pres):
        self.pres = pres
        self.identity = hnn.identity_word(pres)

    def positives(self, bound):
        """Elements of P* spelled by at most ``bound`` tokens."""
        return [hnn.NormalFormWord(b.key.elements[:-1], b.key.elements[-1])
                for b in positive_ball(self.pres, bound)]

    def multiply(self, x, y):
        return hnn.multiply(self.pres, x, y)

    def leq(self, x, y):
        return hnn.leq_star(self.pres, x, y)

    def join(self, x, y):
        return hnn.join_star(self.pres, x, y)

    def format(self, x):
        return format_tokens(self.pres, x)


@dataclass
class ControlledMapCandidate:
    source: Any
    target: Any
    map: Callable
    sigma_provider: Callable
    witness: Callable | None = None  # x -> the element of Σ_k expected below x
    name: str = "candidate"


def check_candidate(c: ControlledMapCandidate, bound: int) -> CheckReport:
    """map(e) = e, map is multiplicative and order preserving on samples."""
    src, tgt = c.source, c.target
    xs = src.positives(bound)
    failures = []
    if c.map(src.identity) != tgt.identity:
        failures.append({"problem": "map(e) != e"})
    checked = 0
    for x in xs:
        for y in xs:
            checked += 1
            if c.map(src.multiply(x, y)) != tgt.multiply(c.map(x), c.map(y)):
                failures.append({"x": src.format(x), "y": src.format(y), "problem": "not multiplicative"})
            elif src.leq(x, y) and not tgt.leq(c.map(x), c.map(y)):
                failures.append({"x": src.format(x), "y": src.format(y), "problem": "not order preserving"})
    return finish("homomorphism", failures, checked, {"bound": bound})


def verify_cm1(c: ControlledMapCandidate, bound: int, joins=None) -> CheckReport:
    """map(x ∨ y) = map(x) ∨ map(y) whenever x ∨ y is finite.

    ``joins`` may supply precomputed ``(x, y, x ∨ y)`` triples; otherwise all
    pairs of enumerated positives are used.
    """
    src, tgt = c.source, c.target
    if joins is None:
        xs = src.positives(bound)
        joins = []
        for i, x in enumerate(xs):
            for y in xs[i:]:
                z = src.join(x, y)
                if not is_infinite(z):
                    joins.append((x, y, z))
    failures = []
    for x, y, z in joins:
        image = tgt.join(c.map(x), c.map(y))
        if is_infinite(image) or image != c.map(z):
            failures.append({"x": src.format(x), "y": src.format(y), "join": src.format(z),
                             "map_of_join": tgt.format(c.map(z)),
                             "join_of_maps": "infinity" if is_infinite(image) else tgt.format(image)})
    return finish("cm1_join_preserved", failures, len(joins), {"bound": bound})


def verify_cm2(c: ControlledMapCandidate, k, bound: int, sigma_bound: int | None = None) -> CheckReport:
    """Every enumerated x with map(x) = k lies above some provided σ ∈ Σ_k."""
    src = c.source
    sigma_bound = bound if sigma_bound is None else sigma_bound
    provided = c.sigma_provider(k, sigma_bound)
    provided_set = set(provided)
    failures = []
    checked = 0
    for x in src.positives(bound):
        if c.map(x) != k:
            continue
        checked += 1
        if c.witness is not None:
            w = c.witness(x)
            found = w if (w in provided_set and src.leq(w, x)) else None
        else:
            found = next((s for s in provided if src.leq(s, x)), None)
        if found is None:
            failures.append({"x": src.format(x), "problem": "no provided minimal element below x"})
    return finish("cm2_complete", failures, checked,
                  {"bound": bound, "sigma_bound": sigma_bound, "k": _plain(k)},
                  {"provided": len(provided)})


def verify_cm3(c: ControlledMapCandidate, k, bound: int, search_radius: int = 3) -> CheckReport:
    """Distinct provided σ, τ ∈ Σ_k have no common upper bound.

    Two checks run: the source join must be infinite, and no products
    σ·w = τ·w' with w, w' enumerated up to ``search_radius`` may coincide.
    """
    src = c.source
    provided = c.sigma_provider(k, bound)
    failures = []
    checked = 0
    for i, s in enumerate(provided):
        for t in provided[i + 1:]:
            checked += 1
            if not is_infinite(src.join(s, t)):
                failures.append({"sigma": src.format(s), "tau": src.format(t),
                                 "join": src.format(src.join(s, t))})
    owner: dict = {}
    ws = src.positives(search_radius)
    for i, s in enumerate(provided):
        for w in ws:
            z = src.multiply(s, w)
            j = owner.setdefault(z, i)
            if j != i:
                failures.append({"sigma": src.format(provided[j]), "tau": src.format(s),
                                 "common_upper_bound": src.format(z)})
                break
    return finish("cm3_incomparable", failures, checked,
                  {"bound": bound, "k": _plain(k), "search_radius": search_radius},
                  {"provided": len(provided)})


def check_kernel_qlo(c: ControlledMapCandidate, bound: int) -> CheckReport:
    """x, y in the kernel with a common upper bound there have their join there."""
    src, tgt = c.source, c.target
    xs = [x for x in src.positives(bound) if c.map(x) == tgt.identity]
    failures = []
    checked = 0
    for i, x in enumerate(xs):
        ups_x = [z for z in xs if src.leq(x, z)]
        for y in xs[i:]:
            if not any(src.leq(y, z) for z in ups_x):
                continue
            checked += 1
            z = src.join(x, y)
            if is_infinite(z) or c.map(z) != tgt.identity:
                failures.append({"x": src.format(x), "y": src.format(y),
                                 "join": "infinity" if is_infinite(z) else src.format(z)})
    return finish("kernel_qlo", failures, checked, {"bound": bound})


def check_kernel_iso(pres, bound: int, radius: int | None = None) -> CheckReport:
    """p ↦ (height-0 word p) is an isomorphism of P onto θ⁻¹(0) ∩ P*.

    Checked on positives of size ≤ bound: multiplicativity, join existence
    and join values in both directions, and that every height-0 element of
    the radius ball is in the image.
    """
    base = pres.base
    radius = bound if radius is None else radius
    ps = base.enumerate_positive(bound)
    image = {hnn.NormalFormWord((), p) for p in ps}
    failures = []
    checked = 0
    for p in ps:
        ep = hnn.NormalFormWord((), p)
        for q in ps:
            eq = hnn.NormalFormWord((), q)
            checked += 1
            if hnn.multiply(pres, ep, eq) != hnn.NormalFormWord((), base.multiply(p, q)):
                failures.append({"p": base.format(p), "q": base.format(q), "problem": "not multiplicative"})
                continue
            j, js = base.join(p, q), hnn.join_star(pres, ep, eq)
            if is_infinite(j) != is_infinite(js) or (not is_infinite(j) and js != hnn.NormalFormWord((), j)):
                failures.append({"p": base.format(p), "q": base.format(q),
                                 "base_join": "infinity" if is_infinite(j) else base.format(j),
                                 "star_join": "infinity" if is_infinite(js) else format_tokens(pres, js)})
    for b in positive_ball(pres, min(radius, bound)):
        if b.key.height == 0:
            checked += 1
            x = hnn.NormalFormWord((), b.key.elements[-1])
            if x not in image:
                failures.append({"element": format_tokens(pres, x), "problem": "height-0 element not in image"})
    return finish("kernel_isomorphism", failures, checked, {"bound": bound, "radius": radius})


def _plain(k):
    return list(k) if isinstance(k, tuple) else k


def theta_candidate(pres) -> ControlledMapCandidate:
    """The height map θ: (G*, P*) → (ℤ, ℕ) with stems as Σ_k."""
    target = BaseOrder(IntLattice(1, "n"))

    def theta(x):
        return (x.height,)

    def provider(k, bound):
        k = k[0] if isinstance(k, tuple) else k
        return hnn.sigma_elements(pres, k, bound)

    return ControlledMapCandidate(
        source=StarOrder(pres),
        target=target,
        map=theta,
        sigma_provider=provider,
        witness=lambda x: hnn.stem(pres, x),
        name="theta",
    )
