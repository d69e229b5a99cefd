"""Text syntax for words: whitespace-separated tokens, "t" and "t^-1" reserved."""

from __future__ import annotations

import re

from .hnn import T, T_INV, GeneralWord, NormalFormWord, Stable, is_stable


class ParseError(ValueError):
    pass


def _normalize(text: str) -> str:
    text = re.sub(r"\s*,\s*", ",", text)
    text = re.sub(r"\(\s*", "(", text)
    return re.sub(r"\s*\)", ")", text)


def parse_word(pres, text: str) -> list:
    tokens = []
    for tok in _normalize(text).split():
        m = re.fullmatch(r"t(?:\^(-?\d+))?", tok)
        if m:
            n = int(m.group(1)) if m.group(1) else 1
            tokens.extend([T if n > 0 else T_INV] * abs(n))
            continue
        try:
            tokens.append(pres.base.parse_token(tok))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return tokens


def _render(pres, tokens, sep):
    fmt = pres.base.format
    e = pres.base.identity
    parts = [repr(tok) if is_stable(tok) else fmt(tok) for tok in tokens
             if is_stable(tok) or tok != e]
    return sep.join(parts) if parts else "e"


def _nf_tokens(x: NormalFormWord):
    out = []
    for p in x.syllables:
        out += [p, T]
    return out + [x.tail]


def format_nf(pres, x: NormalFormWord) -> str:
    """``p0 . t . p1 . t . pn`` with identity syllables left out."""
    return _render(pres, _nf_tokens(x), " . ")


def format_tokens(pres, x: NormalFormWord) -> str:
    """Plain token syntax, parseable by `parse_word`."""
    return _render(pres, _nf_tokens(x), " ")


def format_general(pres, g: GeneralWord) -> str:
    tokens = [g.elements[0]]
    for eps, elem in zip(g.exponents, g.elements[1:]):
        tokens += [Stable(eps), elem]
    return _render(pres, tokens, " . ")
