"""Minimal s-expression reader shared by the term, formula, tree and manifest formats.

Atoms are kept as strings; lists become :class:`SList` so the position of the
opening parenthesis survives for error messages.
"""

from __future__ import annotations

from typing import Iterator, List, Union

__all__ = ["SExprError", "SList", "Atom", "read", "read_all", "tokenize"]


class SExprError(ValueError):
    """Syntax error carrying a character offset into the source text."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos


class Atom(str):
    """A bare token; ``pos`` is its character offset."""

    pos: int

    def __new__(cls, text: str, pos: int = 0):
        obj = super().__new__(cls, text)
        obj.pos = pos
        return obj


class SList(list):
    """A parenthesised list; ``pos`` is the offset of its ``(``."""

    def __init__(self, items=(), pos: int = 0):
        super().__init__(items)
        self.pos = pos


SExpr = Union[Atom, SList]


def tokenize(text: str) -> Iterator[tuple]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, i
            i += 1
        elif c == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise SExprError("unterminated string", i)
            yield "str", i, text[i + 1 : j]
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '();"':
                j += 1
            yield "atom", i, text[i:j]
            i = j


def _parse(tokens: List[tuple], k: int, end: int) -> tuple:
    tok = tokens[k]
    if tok[0] == "(":
        items = SList(pos=tok[1])
        k += 1
        while True:
            if k >= len(tokens):
                raise SExprError("unexpected end of input", end)
            if tokens[k][0] == ")":
                return items, k + 1
            item, k = _parse(tokens, k, end)
            items.append(item)
    if tok[0] == ")":
        raise SExprError("unexpected ')'", tok[1])
    return Atom(tok[2], tok[1]), k + 1


def read_all(text: str) -> List[SExpr]:
    """Parse every top-level expression in ``text``."""
    tokens = list(tokenize(text))
    out = []
    k = 0
    while k < len(tokens):
        expr, k = _parse(tokens, k, len(text))
        out.append(expr)
    return out


def read(text: str) -> SExpr:
    """Parse exactly one expression."""
    exprs = read_all(text)
    if not exprs:
        raise SExprError("empty input", len(text))
    if len(exprs) > 1:
        extra = exprs[1]
        raise SExprError("trailing input", getattr(extra, "pos", len(text)))
    return exprs[0]
