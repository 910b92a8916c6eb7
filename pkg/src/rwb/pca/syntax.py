"""S-expression syntax for terms.

    K  S  pair  p0  p1  succ  ifz  fix        constants
    (num 5)                                    numeral
    (app f x)                                  application
    (pair a b)                                 pair value, i.e. (app (app pair a) b)
    (fix f)                                    recursive value
    (lam x body)                               bracket abstraction of ``body``
    x                                          variable (inside lam bodies only)
"""

from __future__ import annotations

from ..sexpr import Atom, SExprError, SList, read
from .terms import CONSTANTS, App, Const, Fix, Num, P, Term, Var

__all__ = ["parse_term", "format_term", "term_from_sexpr", "TermSyntaxError"]

_BY_NAME = {c.name: c for c in CONSTANTS}
_KEYWORDS = {"num", "app", "lam"} | set(_BY_NAME)


class TermSyntaxError(SExprError):
    pass


def _build(e) -> Term:
    if isinstance(e, Atom):
        if e in _BY_NAME:
            return _BY_NAME[e]
        if e in ("num", "app", "lam") or not e or e[0].isdigit() or e[0] == "#":
            raise TermSyntaxError(f"unexpected token {str(e)!r}", e.pos)
        return Var(str(e))
    if not e:
        raise TermSyntaxError("empty list", e.pos)
    head = e[0]
    if not isinstance(head, Atom):
        raise TermSyntaxError("expected a keyword", e.pos)
    if head == "num":
        if len(e) != 2 or not isinstance(e[1], Atom) or not e[1].isdigit():
            raise TermSyntaxError("(num k) needs one natural number", e.pos)
        return Num(int(e[1]))
    if head == "app":
        if len(e) < 3:
            raise TermSyntaxError("(app f x ...) needs at least two terms", e.pos)
        t = _build(e[1])
        for arg in e[2:]:
            t = App(t, _build(arg))
        return t
    if head == "pair":
        if len(e) != 3:
            raise TermSyntaxError("(pair a b) needs two terms", e.pos)
        return App(App(P, _build(e[1])), _build(e[2]))
    if head == "fix":
        if len(e) != 2:
            raise TermSyntaxError("(fix f) needs one term", e.pos)
        return Fix(_build(e[1]))
    if head == "lam":
        if len(e) != 3 or not isinstance(e[1], Atom) or e[1] in _KEYWORDS:
            raise TermSyntaxError("(lam x body) needs a variable and a body", e.pos)
        from .abstraction import abstract

        return abstract(str(e[1]), _build(e[2]))
    raise TermSyntaxError(f"unknown form {str(head)!r}", e.pos)


def term_from_sexpr(e) -> Term:
    """Build a term from an already-read s-expression."""
    return _build(e)


def parse_term(text: str) -> Term:
    """Parse one term; errors carry the offending character offset."""
    try:
        return _build(read(text))
    except TermSyntaxError:
        raise
    except SExprError as exc:
        raise TermSyntaxError(exc.message, exc.pos) from None


def format_term(t: Term) -> str:
    parts: list = []
    _emit(t, parts)
    return "".join(parts)


def _emit(t: Term, out: list) -> None:
    tt = type(t)
    if tt is Const:
        out.append(t.name)
    elif tt is Num:
        out.append(f"(num {t.k})")
    elif tt is Var:
        out.append(t.name)
    elif tt is Fix:
        out.append("(fix ")
        _emit(t.f, out)
        out.append(")")
    elif type(t.f) is App and t.f.f is P:
        out.append("(pair ")
        _emit(t.f.x, out)
        out.append(" ")
        _emit(t.x, out)
        out.append(")")
    else:
        out.append("(app ")
        _emit(t.f, out)
        out.append(" ")
        _emit(t.x, out)
        out.append(")")
