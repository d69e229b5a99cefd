"""Exact computation in quasi-lattice ordered groups and their HNN extensions."""

from __future__ import annotations

__version__ = "0.1.0"

from .core import INFINITY, MinimalPair, QloGroup, is_infinite, leq, min_pair_base
from .groups import (
    FreeGroup,
    HnnPresentation,
    HypothesisError,
    IntLattice,
    UnsupportedError,
    make_bs,
    make_free_hnn,
    make_int_lattice_hnn,
    make_lattice_hnn,
    negative_lattice_example,
    shipped_presentations,
    validate_hypotheses,
)
from .hnn import (
    NormalFormWord,
    group_nf,
    join_star,
    leq_star,
    min_pair,
    multiply,
    nf,
    sigma_elements,
    stem,
)
from .syntax import format_nf, parse_word

__all__ = [
    "INFINITY", "MinimalPair", "QloGroup", "is_infinite", "leq", "min_pair_base",
    "FreeGroup", "HnnPresentation", "HypothesisError", "IntLattice", "UnsupportedError",
    "make_bs", "make_free_hnn", "make_int_lattice_hnn", "make_lattice_hnn",
    "negative_lattice_example", "shipped_presentations", "validate_hypotheses",
    "NormalFormWord", "group_nf", "join_star", "leq_star", "min_pair", "multiply", "nf",
    "sigma_elements", "stem", "format_nf", "parse_word",
]
