"""Concrete quasi-lattice ordered groups and HNN subgroup data.

Two base families are shipped: integer lattices (ℤⁿ, ℕⁿ) and free groups
with their positive monoids.  Subgroup data pairs a base with subgroups A, B
and an isomorphism φ: A → B, and `validate_hypotheses` checks the three
conditions under which the HNN extension is again quasi-lattice ordered.
"""

from __future__ import annotations

import itertools
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .core import INFINITY, QloGroup, is_infinite, leq

DEFAULT_VALIDATE_BOUND = 12


class UnsupportedError(Exception):
    """The base group lacks a capability the requested operation needs."""


class HypothesisError(ValueError):
    """Raised when a presentation fails validation at construction."""

    def __init__(self, report):
        self.report = report
        failed = ", ".join(v.name for v in report.verdicts if not v.passed)
        super().__init__(f"HNN hypotheses fail at bound {report.bound}: {failed}")


# --------------------------------------------------------------------- ℤⁿ


class IntLattice(QloGroup):
    """(ℤⁿ, ℕⁿ) with componentwise order; elements are int tuples."""

    def __init__(self, rank: int, letter: str = "x"):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.letter = letter
        self.identity = (0,) * rank

    def __repr__(self):
        return f"IntLattice({self.rank})"

    def multiply(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def invert(self, x):
        return tuple(-a for a in x)

    def is_positive(self, x):
        return all(a >= 0 for a in x)

    def join(self, p, q):
        return tuple(max(a, b) for a, b in zip(p, q))

    def join_with_identity(self, x):
        return tuple(max(a, 0) for a in x)

    def size(self, x):
        return sum(abs(a) for a in x)

    def positive_generators(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def enumerate_positive(self, bound):
        out = []
        for total in range(bound + 1):
            out.extend(_compositions(total, self.rank))
        return out

    def enumerate_elements(self, bound):
        out = []
        for total in range(bound + 1):
            level = []
            for comp in _compositions(total, self.rank):
                nonzero = [i for i, a in enumerate(comp) if a]
                for signs in itertools.product((1, -1), repeat=len(nonzero)):
                    v = list(comp)
                    for i, s in zip(nonzero, signs):
                        v[i] *= s
                    level.append(tuple(v))
            out.extend(sorted(level))
        return out

    def format(self, x):
        if self.rank == 1:
            n = x[0]
            if n == 0:
                return "e"
            return self.letter if n == 1 else f"{self.letter}^{n}"
        return "(" + ",".join(str(a) for a in x) + ")"

    def parse_token(self, token):
        if token == "e":
            return self.identity
        if self.rank == 1:
            m = re.fullmatch(re.escape(self.letter) + r"(?:\^(-?\d+))?", token)
            if m:
                return (int(m.group(1)) if m.group(1) else 1,)
        m = re.fullmatch(r"\((-?\d+(?:,-?\d+)*)\)", token.replace(" ", ""))
        if m:
            v = tuple(int(a) for a in m.group(1).split(","))
            if len(v) == self.rank:
                return v
        raise ValueError(f"not an element of ℤ^{self.rank}: {token!r}")


def _compositions(total, parts):
    """Nonnegative vectors of length ``parts`` summing to ``total``, lex order."""
    if parts == 1:
        return [(total,)]
    return [
        (first,) + rest
        for first in range(total + 1)
        for rest in _compositions(total - first, parts - 1)
    ]


# ----------------------------------------------------------------- free


LETTERS = "abcdefghijklmnopqrsuvwxyz"  # no "t": reserved for the stable letter


class FreeGroup(QloGroup):
    """Free group on ``rank`` letters; elements are reduced tuples of ±(i+1)."""

    identity = ()

    def __init__(self, rank: int):
        if not 1 <= rank <= len(LETTERS):
            raise ValueError(f"rank must be in 1..{len(LETTERS)}")
        self.rank = rank

    def __repr__(self):
        return f"FreeGroup({self.rank})"

    def multiply(self, x, y):
        out = list(x)
        for letter in y:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def invert(self, x):
        return tuple(-a for a in reversed(x))

    def is_positive(self, x):
        return all(a > 0 for a in x)

    def join(self, p, q):
        if p[: len(q)] == q:
            return p
        if q[: len(p)] == p:
            return q
        return INFINITY

    def join_with_identity(self, x):
        # x ∈ PP⁻¹ iff its reduced word is positive letters then negative ones
        i = 0
        while i < len(x) and x[i] > 0:
            i += 1
        if all(a < 0 for a in x[i:]):
            return x[:i]
        return INFINITY

    def size(self, x):
        return len(x)

    def positive_generators(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def enumerate_positive(self, bound):
        letters = range(1, self.rank + 1)
        return [w for n in range(bound + 1) for w in itertools.product(letters, repeat=n)]

    def enumerate_elements(self, bound):
        alphabet = sorted([i for i in range(1, self.rank + 1)] + [-i for i in range(1, self.rank + 1)],
                          key=lambda a: (abs(a), a < 0))
        out = [()]
        level = [()]
        for _ in range(bound):
            level = [w + (a,) for w in level for a in alphabet if not (w and w[-1] == -a)]
            out.extend(level)
        return out

    def power_of(self, x, letter: int):
        """``n`` with ``x = letter^n``, or None."""
        if all(a == letter for a in x):
            return len(x)
        if all(a == -letter for a in x):
            return -len(x)
        return None

    def power(self, letter: int, n: int):
        return (letter,) * n if n >= 0 else (-letter,) * (-n)

    def format(self, x):
        if not x:
            return "e"
        parts = []
        for letter, run in itertools.groupby(x):
            n = len(list(run)) * (1 if letter > 0 else -1)
            name = LETTERS[abs(letter) - 1]
            parts.append(name if n == 1 else f"{name}^{n}")
        return " ".join(parts)

    def parse_token(self, token):
        if token == "e":
            return ()
        m = re.fullmatch(r"([a-z])(?:\^(-?\d+))?", token)
        if m and m.group(1) in LETTERS[: self.rank]:
            letter = LETTERS.index(m.group(1)) + 1
            return self.power(letter, int(m.group(2)) if m.group(2) else 1)
        raise ValueError(f"not an element of F_{self.rank}: {token!r}")


# --------------------------------------------------------- subgroup data


class SubgroupData(ABC):
    """Subgroups A, B of a base group with an isomorphism φ: A → B."""

    base: QloGroup

    @abstractmethod
    def in_A(self, x) -> bool: ...

    @abstractmethod
    def in_B(self, x) -> bool: ...

    @abstractmethod
    def phi(self, a): ...

    @abstractmethod
    def phi_inv(self, b): ...

    @abstractmethod
    def coset_rep_A(self, g):
        """Canonical representative of the left coset gA."""

    @abstractmethod
    def coset_rep_B(self, g): ...

    has_a_ceiling = True

    def a_ceiling(self, c):
        """Least element of A∩P that is >= c, or None when there is none.

        Callers only pass positive c.
        """
        raise UnsupportedError("this subgroup has no closed-form A-ceiling")

    def a_generators(self) -> list | None:
        """Generators of the monoid A∩P, when known in closed form."""
        return None

    @abstractmethod
    def enumerate_A(self, bound) -> list: ...

    @abstractmethod
    def enumerate_B(self, bound) -> list: ...

    @abstractmethod
    def describe(self) -> dict: ...


class LatticeSubgroups(SubgroupData):
    """Full-rank sublattices A, B of ℤⁿ with φ sending A's basis rows to B's."""

    def __init__(self, base: IntLattice, a_basis, b_basis):
        n = base.rank
        a_basis = [tuple(r) for r in a_basis]
        b_basis = [tuple(r) for r in b_basis]
        if len(a_basis) != n or len(b_basis) != n or any(len(r) != n for r in a_basis + b_basis):
            raise ValueError(f"bases must be {n}x{n}")
        self.base = base
        self.a_basis = a_basis
        self.b_basis = b_basis
        self._a_inv = _rational_inverse(a_basis)
        self._b_inv = _rational_inverse(b_basis)
        self._a_hnf = _hermite_rows(a_basis)
        self._b_hnf = _hermite_rows(b_basis)
        # A is a product of cyclic factors exactly when its Hermite form is diagonal
        self._a_diagonal = all(self._a_hnf[i][j] == 0 for i in range(n) for j in range(n) if i != j)
        self.has_a_ceiling = self._a_diagonal

    def _coords(self, inv, x):
        # inv = (det, adjugate) so that coordinates are integers over det
        det, adj = inv
        n = len(x)
        return [sum(x[i] * adj[i][j] for i in range(n)) for j in range(n)], det

    def _member(self, inv, x):
        coords, det = self._coords(inv, x)
        return all(c % det == 0 for c in coords)

    def _transport(self, inv, target, x):
        coords, det = self._coords(inv, x)
        if any(c % det for c in coords):
            raise ValueError(f"{x} is not in the subgroup")
        n = len(x)
        m = [c // det for c in coords]
        return tuple(sum(m[i] * target[i][j] for i in range(n)) for j in range(n))

    def in_A(self, x):
        return self._member(self._a_inv, x)

    def in_B(self, x):
        return self._member(self._b_inv, x)

    def phi(self, a):
        return self._transport(self._a_inv, self.b_basis, a)

    def phi_inv(self, b):
        return self._transport(self._b_inv, self.a_basis, b)

    def coset_rep_A(self, g):
        return _hermite_reduce(self._a_hnf, g)

    def coset_rep_B(self, g):
        return _hermite_reduce(self._b_hnf, g)

    def a_ceiling(self, c):
        if not self._a_diagonal:
            raise UnsupportedError("A-ceiling needs A to be a product of cyclic factors")
        moduli = [self._a_hnf[i][i] for i in range(self.base.rank)]
        return tuple(m * -(-max(ci, 0) // m) for m, ci in zip(moduli, c))

    def a_generators(self):
        if not self._a_diagonal:
            return None
        n = self.base.rank
        return [tuple(self._a_hnf[i][i] if j == i else 0 for j in range(n)) for i in range(n)]

    def enumerate_A(self, bound):
        return [x for x in self.base.enumerate_elements(bound) if self.in_A(x)]

    def enumerate_B(self, bound):
        return [x for x in self.base.enumerate_elements(bound) if self.in_B(x)]

    def describe(self):
        return {"A_basis": [list(r) for r in self.a_basis], "B_basis": [list(r) for r in self.b_basis]}


def _rational_inverse(rows):
    """``(det, det·rows⁻¹)`` with an integer matrix in the second slot."""
    n = len(rows)
    m = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ValueError("subgroup basis must have full rank")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        pv = m[col][col]
        det *= pv
        m[col] = [v / pv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    d = int(det)
    return d, [[int(v * d) for v in r[n:]] for r in m]


def _hermite_rows(rows):
    """Row-style Hermite normal form of a full-rank square integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    for col in range(n):
        while True:
            nz = [i for i in range(col, n) if m[i][col] != 0]
            piv = min(nz, key=lambda i: abs(m[i][col]))
            m[col], m[piv] = m[piv], m[col]
            clean = True
            for i in range(col + 1, n):
                q = m[i][col] // m[col][col]
                m[i] = [a - q * b for a, b in zip(m[i], m[col])]
                clean = clean and m[i][col] == 0
            if clean:
                break
        if m[col][col] < 0:
            m[col] = [-a for a in m[col]]
        for i in range(col):
            q = m[i][col] // m[col][col]
            m[i] = [a - q * b for a, b in zip(m[i], m[col])]
    return [tuple(r) for r in m]


def _hermite_reduce(hnf, g):
    v = list(g)
    for i, row in enumerate(hnf):
        q = v[i] // row[i]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


class FreeCyclicSubgroups(SubgroupData):
    """A = ⟨a^s⟩ and B = ⟨target^u⟩ in a free group, φ(a^{ms}) = target^{mu}."""

    def __init__(self, base: FreeGroup, s: int, u: int, target: int = 2):
        if s < 1 or u < 1:
            raise ValueError("s and u must be positive")
        if not 1 <= target <= base.rank:
            raise ValueError("target letter outside the free group's rank")
        self.base = base
        self.s = s
        self.u = u
        self.target = target

    def _multiple(self, x, letter, modulus):
        n = self.base.power_of(x, letter)
        return n if n is not None and n % modulus == 0 else None

    def in_A(self, x):
        return self._multiple(x, 1, self.s) is not None

    def in_B(self, x):
        return self._multiple(x, self.target, self.u) is not None

    def phi(self, a):
        n = self._multiple(a, 1, self.s)
        if n is None:
            raise ValueError(f"{self.base.format(a)} is not in A")
        return self.base.power(self.target, n // self.s * self.u)

    def phi_inv(self, b):
        n = self._multiple(b, self.target, self.u)
        if n is None:
            raise ValueError(f"{self.base.format(b)} is not in B")
        return self.base.power(1, n // self.u * self.s)

    def _coset_rep(self, g, letter, modulus):
        # g = y·letter^n with y not ending in letter^{±1}
        i = len(g)
        while i > 0 and abs(g[i - 1]) == letter:
            i -= 1
        n = self.base.power_of(g[i:], letter)
        return g[:i] + self.base.power(letter, n % modulus)

    def coset_rep_A(self, g):
        return self._coset_rep(g, 1, self.s)

    def coset_rep_B(self, g):
        return self._coset_rep(g, self.target, self.u)

    def a_ceiling(self, c):
        r = self.base.power_of(c, 1)
        if r is None:
            return None
        return self.base.power(1, self.s * -(-max(r, 0) // self.s))

    def a_generators(self):
        return [self.base.power(1, self.s)]

    def _powers(self, letter, modulus, bound):
        out = [()]
        for n in range(modulus, bound + 1, modulus):
            out.extend([self.base.power(letter, n), self.base.power(letter, -n)])
        return out

    def enumerate_A(self, bound):
        return self._powers(1, self.s, bound)

    def enumerate_B(self, bound):
        return self._powers(self.target, self.u, bound)

    def describe(self):
        return {"s": self.s, "u": self.u, "target": LETTERS[self.target - 1]}


# ------------------------------------------------------------ validation


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    checked: int
    witness: dict | None = None

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "witness": self.witness}


@dataclass(frozen=True)
class ValidationReport:
    bound: int
    verdicts: tuple
    mode: str = "validated"

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name) -> Verdict:
        return next(v for v in self.verdicts if v.name == name)

    def to_dict(self):
        return {"bound": self.bound, "mode": self.mode, "passed": self.passed,
                "verdicts": [v.to_dict() for v in self.verdicts]}


def _check_phi(base, sub, bound):
    positives = base.enumerate_positive(bound)
    checked = 0
    for p in positives:
        if sub.in_A(p):
            checked += 1
            b = sub.phi(p)
            if not (sub.in_B(b) and base.is_positive(b) and sub.phi_inv(b) == p):
                return Verdict("phi_positive", False, checked,
                               {"a": base.format(p), "phi(a)": base.format(b)})
        if sub.in_B(p):
            checked += 1
            a = sub.phi_inv(p)
            if not (sub.in_A(a) and base.is_positive(a) and sub.phi(a) == p):
                return Verdict("phi_positive", False, checked,
                               {"b": base.format(p), "phi_inv(b)": base.format(a)})
    return Verdict("phi_positive", True, checked)


def _check_coset_reps(base, sub, bound):
    positives = base.enumerate_positive(bound)
    a_sample = sub.enumerate_A(min(bound, 4))
    cosets: dict = {}
    for p in positives:
        cosets.setdefault(sub.coset_rep_A(p), []).append(p)
    checked = 0
    for p in positives:
        rep = sub.coset_rep_A(p)
        checked += 1
        offending = None
        if not sub.in_A(base.divide_left(rep, p)):
            offending = "representative is not in the coset"
        elif any(sub.coset_rep_A(base.multiply(p, a)) != rep for a in a_sample):
            offending = "representative is not constant on the coset"
        elif not leq(base, rep, p):
            offending = "representative is not below every positive coset element"
        if offending:
            members = cosets.get(rep, [p])
            minimal = [q for q in members
                       if not any(r != q and leq(base, r, q) for r in members)]
            return Verdict("minimal_coset_representatives", False, checked, {
                "coset": base.format(p) + "+A",
                "element": base.format(p),
                "representative": base.format(rep),
                "minimal_positive_elements": [base.format(q) for q in minimal],
                "reason": offending,
            })
    return Verdict("minimal_coset_representatives", True, checked)


def _check_b_joins(base, sub, bound):
    bs = sub.enumerate_B(bound)
    checked = 0
    for x in bs:
        for y in bs:
            j = base.lub(x, y)
            if is_infinite(j):
                continue
            checked += 1
            if not sub.in_B(j):
                return Verdict("B_join_closed", False, checked,
                               {"x": base.format(x), "y": base.format(y), "join": base.format(j)})
    return Verdict("B_join_closed", True, checked)


def validate_hypotheses(base: QloGroup, sub: SubgroupData, bound: int = DEFAULT_VALIDATE_BOUND,
                        mode: str = "validated") -> ValidationReport:
    """Bounded check of φ(A∩P) = B∩P, minimal coset representatives and B-join closure.

    Failures are returned as data with a witness.  A pass only certifies the
    conditions for elements of encoding size <= ``bound``.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    verdicts = (
        _check_phi(base, sub, bound),
        _check_coset_reps(base, sub, bound),
        _check_b_joins(base, sub, bound),
    )
    return ValidationReport(bound, verdicts, mode)


# ---------------------------------------------------------- presentations


@dataclass(frozen=True)
class HnnPresentation:
    """A base QLO group with subgroup data for G* = ⟨G, t | t⁻¹at = φ(a)⟩."""

    name: str
    kind: str
    params: dict = field(hash=False, compare=False)
    base: Any = field(hash=False, compare=False)
    sub: Any = field(hash=False, compare=False)
    report: ValidationReport | None = field(hash=False, compare=False, default=None)

    @property
    def validated(self) -> bool:
        return self.report is not None and self.report.mode == "validated" and self.report.passed

    def summary(self) -> dict:
        return {"name": self.name, "kind": self.kind, "params": self.params,
                "subgroups": self.sub.describe()}


def _finish(name, kind, params, base, sub, validate, bound):
    report = validate_hypotheses(base, sub, bound, "validated" if validate else "unvalidated")
    if validate and not report.passed:
        raise HypothesisError(report)
    return HnnPresentation(name, kind, params, base, sub, report)


@lru_cache(maxsize=None)
def make_bs(c: int, d: int, validate: bool = True, bound: int = DEFAULT_VALIDATE_BOUND):
    """BS(c, d) = ⟨x, t | t⁻¹x^d t = x^c⟩ over (ℤ, ℕ), A = dℤ, B = cℤ."""
    if c < 1 or d < 1:
        raise ValueError("BS(c,d) is only quasi-lattice ordered here for c, d >= 1")
    base = IntLattice(1, "x")
    sub = LatticeSubgroups(base, [(d,)], [(c,)])
    return _finish(f"BS({c},{d})", "baumslag_solitar", {"c": c, "d": d}, base, sub, validate, bound)


@lru_cache(maxsize=None)
def make_int_lattice_hnn(a_moduli: tuple, b_moduli: tuple, validate: bool = True,
                         bound: int = DEFAULT_VALIDATE_BOUND):
    """ℤⁿ with A = ⊕ a_iℤ, B = ⊕ b_iℤ and φ(a_i m_i) = b_i m_i."""
    a_moduli, b_moduli = tuple(a_moduli), tuple(b_moduli)
    n = len(a_moduli)
    if n < 1 or len(b_moduli) != n:
        raise ValueError("moduli lists must be nonempty and of equal length")
    if any(m < 1 for m in a_moduli + b_moduli):
        raise ValueError("moduli must be positive")
    base = IntLattice(n)
    diag = lambda ms: [tuple(m if i == j else 0 for j in range(n)) for i, m in enumerate(ms)]
    sub = LatticeSubgroups(base, diag(a_moduli), diag(b_moduli))
    name = f"Z^{n}*(A={list(a_moduli)},B={list(b_moduli)})"
    return _finish(name, "int_lattice", {"n": n, "A_moduli": list(a_moduli), "B_moduli": list(b_moduli)},
                   base, sub, validate, bound)


def make_int_lattice_hnn_abcd(a, b, c, d, validate=True):
    """The two-dimensional family with A = aℤ×bℤ, B = cℤ×dℤ."""
    return make_int_lattice_hnn((a, b), (c, d), validate)


@lru_cache(maxsize=None)
def make_lattice_hnn(a_basis: tuple, b_basis: tuple, validate: bool = True,
                     bound: int = DEFAULT_VALIDATE_BOUND):
    """ℤⁿ with arbitrary full-rank sublattices given by basis rows."""
    a_basis = tuple(tuple(r) for r in a_basis)
    b_basis = tuple(tuple(r) for r in b_basis)
    base = IntLattice(len(a_basis))
    sub = LatticeSubgroups(base, a_basis, b_basis)
    name = f"Z^{base.rank}*(A={[list(r) for r in a_basis]})"
    return _finish(name, "int_lattice", {"n": base.rank, "A_basis": [list(r) for r in a_basis],
                                         "B_basis": [list(r) for r in b_basis]},
                   base, sub, validate, bound)


@lru_cache(maxsize=None)
def make_free_hnn(k: int, s: int, u: int, target: int = 2, validate: bool = True,
                  bound: int = DEFAULT_VALIDATE_BOUND):
    """F_k with A = ⟨a^s⟩, B = ⟨target^u⟩; the relation reads a^s t = t target^u."""
    if s < 1 or u < 1:
        raise ValueError("s and u must be positive")
    if target == 2 and k < 2:
        raise ValueError("target b needs rank >= 2")
    base = FreeGroup(k)
    sub = FreeCyclicSubgroups(base, s, u, target)
    name = f"F{k}*(a^{s} t = t {LETTERS[target - 1]}^{u})"
    return _finish(name, "free", {"rank": k, "s": s, "u": u, "target": LETTERS[target - 1]},
                   base, sub, validate, bound)


def shipped_presentations() -> dict:
    """The presentations every sweep in this package runs against."""
    return {
        "BS(2,3)": make_bs(2, 3),
        "BS(3,2)": make_bs(3, 2),
        "BS(1,1)": make_bs(1, 1),
        "Z2(2,3,3,2)": make_int_lattice_hnn((2, 3), (3, 2)),
        "F2(2,3,b)": make_free_hnn(2, 2, 3, 2),
        "F2(1,1,b)": make_free_hnn(2, 1, 1, 2),
        "F2(2,3,a)": make_free_hnn(2, 2, 3, 1),
    }


def negative_lattice_example():
    """ℤ² with A = ⟨(1,2), (2,1)⟩ and identity φ: no minimal coset representatives."""
    return make_lattice_hnn(((1, 2), (2, 1)), ((1, 2), (2, 1)), validate=False)
