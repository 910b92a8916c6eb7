"""Bracket abstraction over S and K, plus the fixed-point constructor."""

from __future__ import annotations

from .terms import FIX, App, Fix, K, S, Term, Var, free_vars

__all__ = ["abstract", "lam", "fix", "i_combinator", "AbstractionError"]


class AbstractionError(ValueError):
    pass


def i_combinator() -> Term:
    """``S K K``."""
    return App(App(S, K), K)


_I = i_combinator()


def _bracket(v: str, body: Term) -> Term:
    if v not in free_vars(body):
        return App(K, body)
    tb = type(body)
    if tb is Var:
        return _I
    if tb is Fix:
        return App(App(S, App(K, FIX)), _bracket(v, body.f))
    # body is an application with v free
    f, x = body.f, body.x
    if type(x) is Var and x.name == v and v not in free_vars(f):
        # eta: both sides evaluate f eagerly under call-by-value
        return f
    return App(App(S, _bracket(v, f)), _bracket(v, x))


def abstract(v: str, body: Term, strict: bool = True) -> Term:
    """Return a term behaving like ``λv. body``.

    With ``strict`` the body may mention no variable other than ``v``, so the
    result is closed; nested abstractions pass ``strict=False`` on the inner
    levels.
    """
    extra = free_vars(body) - {v}
    if strict and extra:
        raise AbstractionError(
            f"body has free variables other than {v!r}: {sorted(extra)}"
        )
    return _bracket(v, body)


def lam(*args) -> Term:
    """``lam("x", "y", body)`` abstracts ``x`` outermost; the result must be closed."""
    *names, body = args
    for name in reversed(names):
        body = _bracket(name, body)
    extra = free_vars(body)
    if extra:
        raise AbstractionError(f"unbound variables {sorted(extra)}")
    return body


def fix(f: Term) -> Term:
    """A recursive value ``u`` with ``u ≃ f u`` wherever either side is observed."""
    return Fix(f)
