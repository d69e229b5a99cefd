"""Finite truncations of the Toeplitz representation on ℓ²(P*).

Operators are 0/1 partial injections on the point-mass basis of a ball in
P*.  Each operator carries a safety mask: the set of columns on which the
truncated matrix agrees with the true operator.  Checks only look at safe
columns and report "insufficient" when there are none.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import hnn
from .core import is_infinite
from .hnn import NormalFormWord
from .oracles import positive_ball
from .reports import CheckReport
from .syntax import format_tokens


@dataclass(frozen=True)
class TruncatedBasis:
    pres: object
    truncation: int
    elements: tuple
    index: dict

    def __len__(self):
        return len(self.elements)

    def height(self, i) -> int:
        return self.elements[i].height

    def lookup(self, x: NormalFormWord):
        return self.index.get(x)

    def h_k(self, k) -> list:
        """Indices of the basis vectors ε_{γz} with γ of height k, z ∈ P."""
        return [i for i, x in enumerate(self.elements) if x.height == k]


def build_basis(pres, truncation: int) -> TruncatedBasis:
    """Point masses of P* spelled by at most ``truncation`` tokens.

    Ordered by shortest spelling length and then by the serialized form.
    """
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    ball = positive_ball(pres, truncation)
    words = [(b.length, format_tokens(pres, _nf(b)), _nf(b)) for b in ball]
    words.sort(key=lambda w: (w[0], w[1]))
    elements = tuple(w[2] for w in words)
    return TruncatedBasis(pres, truncation, elements, {x: i for i, x in enumerate(elements)})


def _nf(ball_element) -> NormalFormWord:
    g = ball_element.key
    return NormalFormWord(g.elements[:-1], g.elements[-1])


@dataclass(frozen=True)
class SparseOperator:
    """Column c maps to row ``entries[c]``; absent columns are zero.

    ``safe`` lists the columns on which this matrix is exact.
    """

    dim: int
    entries: dict
    safe: frozenset

    def apply(self, col):
        """Row index of the image of basis vector ``col`` (None for zero)."""
        return self.entries.get(col)

    def compose(self, other: "SparseOperator") -> "SparseOperator":
        """``self ∘ other``: apply ``other`` first."""
        entries = {}
        safe = set()
        for c in other.safe:
            r = other.entries.get(c)
            if r is None:
                safe.add(c)
            elif r in self.safe:
                safe.add(c)
                out = self.entries.get(r)
                if out is not None:
                    entries[c] = out
        return SparseOperator(self.dim, entries, frozenset(safe))

    def __matmul__(self, other):
        return self.compose(other)

    def triplets(self) -> list:
        return sorted((r, c, 1) for c, r in self.entries.items())


def identity_operator(dim) -> SparseOperator:
    return SparseOperator(dim, {i: i for i in range(dim)}, frozenset(range(dim)))


def zero_operator(dim) -> SparseOperator:
    return SparseOperator(dim, {}, frozenset(range(dim)))


def toeplitz_op(pres, basis: TruncatedBasis, p: NormalFormWord) -> SparseOperator:
    """T_p ε_x = ε_{px}; columns whose image leaves the basis are unsafe."""
    entries = {}
    for c, x in enumerate(basis.elements):
        r = basis.lookup(hnn.multiply(pres, p, x))
        if r is not None:
            entries[c] = r
    return SparseOperator(len(basis), entries, frozenset(entries))


def toeplitz_adjoint(pres, basis: TruncatedBasis, p: NormalFormWord) -> SparseOperator:
    """T_p* ε_y = ε_{p⁻¹y} if p ≤ y and 0 otherwise.

    A zero column is always exact.  When p ≤ y but p⁻¹y falls outside the
    basis the column is marked unsafe.
    """
    entries = {}
    safe = set()
    for c, y in enumerate(basis.elements):
        if not hnn.leq_star(pres, p, y):
            safe.add(c)
            continue
        q = hnn.divide(pres, p, y)
        if q is None:
            raise AssertionError(f"leq_star and the word problem disagree on {format_tokens(pres, p)} <= "
                                 f"{format_tokens(pres, y)}")
        r = basis.lookup(q)
        if r is not None:
            entries[c] = r
            safe.add(c)
    return SparseOperator(len(basis), entries, frozenset(safe))


class OperatorCache:
    """Memoized T_p and T_p* for one basis."""

    def __init__(self, pres, basis: TruncatedBasis):
        self.pres = pres
        self.basis = basis
        self._ops: dict = {}
        self._adj: dict = {}

    def op(self, p):
        if p not in self._ops:
            self._ops[p] = toeplitz_op(self.pres, self.basis, p)
        return self._ops[p]

    def adj(self, p):
        if p not in self._adj:
            self._adj[p] = toeplitz_adjoint(self.pres, self.basis, p)
        return self._adj[p]

    def projection(self, p):
        return self.op(p) @ self.adj(p)


def _compare(lhs: SparseOperator, rhs: SparseOperator, columns: Iterable):
    """Columns (among ``columns``) where two operators differ, plus the count checked."""
    cols = [c for c in columns if c in lhs.safe and c in rhs.safe]
    return [c for c in cols if lhs.entries.get(c) != rhs.entries.get(c)], len(cols)


def _status(name, failures, safe_counts, bounds, notes=None):
    if failures:
        return CheckReport(name, "fail", sum(safe_counts), bounds, failures[0], notes or {})
    if not safe_counts or min(safe_counts) == 0:
        return CheckReport(name, "insufficient", sum(safe_counts), bounds,
                           {"reason": "a check had no safe column at this truncation"}, notes or {})
    return CheckReport(name, "pass", sum(safe_counts), bounds, None, notes or {})


def _fmt(pres, x):
    return format_tokens(pres, x)


def check_isometry(pres, basis, ps, cache: OperatorCache | None = None) -> CheckReport:
    """T_p* T_p = 1 on safe columns."""
    cache = cache or OperatorCache(pres, basis)
    ident = identity_operator(len(basis))
    failures, counts = [], []
    for p in ps:
        if basis.lookup(p) is None:
            counts.append(0)
            continue
        bad, n = _compare(cache.adj(p) @ cache.op(p), ident, range(len(basis)))
        counts.append(n)
        if bad:
            failures.append({"p": _fmt(pres, p), "column": _fmt(pres, basis.elements[bad[0]])})
    return _status("isometry", failures, counts, {"truncation": basis.truncation}, {"operators": len(ps)})


def check_covariance(pres, basis, p, q, cache: OperatorCache | None = None) -> CheckReport:
    """T_pT_p*T_qT_q* = T_{p∨q}T_{p∨q}*, or 0 when p ∨ q = ∞.

    When p or q is not itself a basis element the truncation cannot
    represent the check and it counts as having no safe column.
    """
    cache = cache or OperatorCache(pres, basis)
    if basis.lookup(p) is None or basis.lookup(q) is None:
        return _status("covariance", [], [0], {"truncation": basis.truncation})
    lhs = cache.projection(p) @ cache.projection(q)
    j = hnn.join_star(pres, p, q)
    rhs = zero_operator(len(basis)) if is_infinite(j) else cache.projection(j)
    bad, n = _compare(lhs, rhs, range(len(basis)))
    failures = [{"p": _fmt(pres, p), "q": _fmt(pres, q),
                 "join": "infinity" if is_infinite(j) else _fmt(pres, j),
                 "column": _fmt(pres, basis.elements[bad[0]])}] if bad else []
    return _status("covariance", failures, [n], {"truncation": basis.truncation})


def check_covariance_all(pres, basis, ps, cache: OperatorCache | None = None) -> CheckReport:
    cache = cache or OperatorCache(pres, basis)
    failures, counts = [], []
    for i, p in enumerate(ps):
        for q in ps[i:]:
            r = check_covariance(pres, basis, p, q, cache)
            counts.append(r.checked)
            if r.status == "fail":
                failures.append(r.witness)
    return _status("covariance", failures, counts, {"truncation": basis.truncation}, {"pairs": len(counts)})


def stems_in_basis(pres, basis, k, bound) -> tuple[list, int]:
    """Stems of Σ_k (syllable size ≤ bound) that are basis elements, and how many were not."""
    stems = hnn.sigma_elements(pres, k, bound)
    inside = [s for s in stems if basis.lookup(s) is not None]
    return inside, len(stems) - len(inside)


def check_matrix_units(pres, basis, k, bound, cache: OperatorCache | None = None) -> CheckReport:
    """T_σ* T_τ = 0 for distinct stems σ, τ ∈ Σ_k and = 1 for σ = τ."""
    cache = cache or OperatorCache(pres, basis)
    stems, skipped = stems_in_basis(pres, basis, k, bound)
    dim = len(basis)
    ident, zero = identity_operator(dim), zero_operator(dim)
    failures, counts = [], []
    for s in stems:
        for t in stems:
            prod = cache.adj(s) @ cache.op(t)
            bad, n = _compare(prod, ident if s == t else zero, range(dim))
            counts.append(n)
            if bad:
                failures.append({"sigma": _fmt(pres, s), "tau": _fmt(pres, t),
                                 "column": _fmt(pres, basis.elements[bad[0]])})
    return _status("matrix_units", failures, counts,
                   {"truncation": basis.truncation, "k": k, "bound": bound},
                   {"stems": len(stems), "stems_outside_truncation": skipped})


def hk_sample_operators(pres, basis, k, bound, base_bound=1, cache=None) -> list:
    """Operators T_σ T_x T_y* T_τ* with σ, τ ∈ Σ_k and x, y ∈ P of size ≤ base_bound."""
    cache = cache or OperatorCache(pres, basis)
    stems, _ = stems_in_basis(pres, basis, k, bound)
    heads = [NormalFormWord((), p) for p in pres.base.enumerate_positive(base_bound)]
    out = []
    for s in stems:
        for t in stems:
            for x in heads:
                for y in heads:
                    op = cache.op(s) @ cache.op(x) @ cache.adj(y) @ cache.adj(t)
                    out.append(((s, x, y, t), op))
    return out


def check_hk_invariance(pres, basis, k, samples) -> CheckReport:
    """Safe H_k columns are sent into H_k or to zero."""
    hk = basis.h_k(k)
    hk_set = set(hk)
    failures, counts = [], []
    for label, op in samples:
        cols = [c for c in hk if c in op.safe]
        counts.append(len(cols))
        for c in cols:
            r = op.entries.get(c)
            if r is not None and r not in hk_set:
                failures.append({"operator": [_fmt(pres, w) for w in label],
                                 "column": _fmt(pres, basis.elements[c]),
                                 "image": _fmt(pres, basis.elements[r])})
                break
    return _status("hk_invariance", failures, counts,
                   {"truncation": basis.truncation, "k": k}, {"samples": len(samples), "h_k_size": len(hk)})


def export_triplets(basis: TruncatedBasis, op: SparseOperator) -> str:
    """Sparse triplet text: a dimension header, then "row col 1" per entry."""
    lines = [f"# dimension {op.dim}", f"# safe_columns {len(op.safe)}"]
    lines += [f"{r} {c} {v}" for r, c, v in op.triplets()]
    return "\n".join(lines) + "\n"


def basis_listing(pres, basis: TruncatedBasis) -> str:
    return "".join(f"{i} {format_tokens(pres, x)}\n" for i, x in enumerate(basis.elements))
