"""Named realizers for the universes, built from recursion and pairing.

Bracket abstraction evaluates, at closure-building time, every subterm that
does not mention the abstracted variable. Where a projection of an argument
must wait until the closure is called (it may be undefined for realizers of
equalities between empty trees), it is written ``p (K n a) a``, which
mentions ``a`` and is therefore deferred.
"""

from __future__ import annotations

from typing import Dict

from ..pca import IFZ, K, P, P0, P1, SUCC, App, Num, Term, Var, abstract, fix, i_combinator, lam

__all__ = [
    "mk_refl_realizer",
    "mk_sym_realizer",
    "mk_trans_realizer",
    "uniform_realizer",
    "standard_library",
    "let",
]


def _v(name: str) -> Var:
    return Var(name)


def _pair(a: Term, b: Term) -> Term:
    return App(App(P, a), b)


def let(name: str, value: Term, body: Term) -> Term:
    """``let name = value in body``; open terms allowed."""
    return App(abstract(name, body, strict=False), value)


def _deferred(proj: Term, n: Term, a: Var) -> Term:
    # (proj n) a, with the projection delayed until ``a`` arrives
    return App(App(proj, App(App(K, n), a)), a)


def mk_refl_realizer() -> Term:
    """``fix(λr. pair(λm. pair(m, r), λm. pair(m, r)))``: each edge is matched
    by itself, and the children are again related by ``r``."""
    m, r = _v("m"), _v("r")
    half = abstract("m", _pair(m, r), strict=False)
    return fix(lam("r", _pair(half, half)))


def mk_sym_realizer() -> Term:
    """``λn. pair(n1, n0)``, with both projections deferred."""
    n, a = _v("n"), _v("a")
    return lam(
        "n",
        _pair(
            abstract("a", _deferred(P1, n, a), strict=False),
            abstract("a", _deferred(P0, n, a), strict=False),
        ),
    )


def mk_trans_realizer() -> Term:
    """Maps ``pair(n, m)`` with ``n ⊩ a = b`` and ``m ⊩ b = c`` to a realizer
    of ``a = c``.

    Forward: an edge ``j`` of ``a`` goes through ``n0`` to ``⟨l, q⟩`` (edge
    ``l`` of ``b``), then through ``m0`` to ``⟨l', q'⟩`` (edge ``l'`` of
    ``c``); the children are linked by ``t⟨q, q'⟩``. Backward is symmetric,
    through ``m1`` then ``n1``.
    """
    t, p, a, x, y = (_v(s) for s in ("t", "p", "a", "x", "y"))

    def half(first, second, first_side, second_side):
        # side(first p) a, deferred until a (resp. x) is known
        fa = App(App(first_side, App(first, App(App(K, p), a))), a)
        gx = App(App(second_side, App(second, App(App(K, p), x))), App(P0, x))
        inner = let("y", gx, _pair(App(P0, y), App(t, _pair(App(P1, x), App(P1, y)))))
        return abstract("a", let("x", fa, inner), strict=False)

    forward = half(P0, P1, P0, P0)
    backward = half(P1, P0, P1, P1)
    return fix(lam("t", "p", _pair(forward, backward)))


def uniform_realizer(mode: str = "v") -> Term:
    """The fixed point realizing every tree.

    ``mode="pair"`` solves ``f = ⟨0, λn. f⟩`` (root label realizer 0, every
    child realized by ``f`` again); ``mode="v"`` solves ``f = λm. f`` for the
    single-application clause.
    """
    r = _v("r")
    if mode == "pair":
        return fix(lam("r", _pair(Num(0), abstract("n", r, strict=False))))
    if mode == "v":
        return fix(lam("r", abstract("m", r, strict=False)))
    raise ValueError(f"mode must be 'v' or 'pair', got {mode!r}")


def standard_library() -> Dict[str, Term]:
    """Combinators added to every candidate pool, in a fixed order."""
    return {
        "I": i_combinator(),
        "refl": mk_refl_realizer(),
        "sym": mk_sym_realizer(),
        "trans": mk_trans_realizer(),
        "uniform": uniform_realizer("pair"),
        "uniform_v": uniform_realizer("v"),
    }
