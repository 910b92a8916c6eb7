"""Named realizers used as witness hints by the bundled suites.

Hints are added to the candidate pool's library; a suite verdict still
comes from the ordinary pool search, and every witness is re-checked.
"""

from __future__ import annotations

from typing import Dict

from ..pca import IFZ, K, P, P0, P1, SUCC, App, Num, Term, Var, abstract, fix, lam, reduce, Value
from ..universe.realizers import let, mk_refl_realizer, mk_trans_realizer, standard_library

__all__ = [
    "ext_realizer",
    "union_forward",
    "union_backward",
    "mp_decider",
    "mp_searcher",
    "mp_realizer",
    "relabel",
    "suite_library",
]


def _pair(a: Term, b: Term) -> Term:
    return App(App(P, a), b)


# realizers are built once and must not depend on the user's budget
_BUILD_BUDGET = 10**5


def _value(t: Term) -> Term:
    out = reduce(t, _BUILD_BUDGET)
    if not isinstance(out, Value):
        raise RuntimeError(f"realizer construction did not reach a value: {out}")
    return out.term


def ext_realizer() -> Term:
    """``λm. ⟨λl. (m0) ⟨l, r⟩, λl. (m1) ⟨l, r⟩⟩``.

    From ``m ⊩ ∀x (x ε a ↔ x ε b)`` build ``a = b``: edge ``l`` of ``a`` with
    child ``v`` gives ``⟨l, r⟩ ⊩ v ε a``, which ``m0`` carries to ``v ε b``.
    """
    m, l = Var("m"), Var("l")
    R = mk_refl_realizer()
    # the projections of m wait for l, so closures over m stay defined
    fwd = abstract("l", App(App(P0, App(App(K, m), l)), _pair(l, R)), strict=False)
    bwd = abstract("l", App(App(P1, App(App(K, m), l)), _pair(l, R)), strict=False)
    return _value(lam("m", _pair(fwd, bwd)))


def union_forward() -> Term:
    """``λk. ⟨⟨0, r⟩, k⟩`` for ``a = {{∅}}``, ``⋃a = {∅}``: a member ``y`` of
    ``{∅}`` lies in ``z = {∅}``, the child of ``a`` at label 0."""
    k = Var("k")
    return _value(lam("k", _pair(_pair(Num(0), mk_refl_realizer()), k)))


def union_backward() -> Term:
    """From ``q = ⟨⟨l, r⟩, k⟩`` (``r ⊩ z = w``, ``w`` the child of ``a`` at
    ``l``, and ``k = ⟨l', s⟩ ⊩ y ε z``) produce ``y ε ⋃a``.

    ``r0 l'`` is ``⟨l'', t⟩`` with ``t`` relating the ``l'`` child of ``z`` to
    the ``l''`` child of ``w``, an edge of ``⋃a``; the answer is
    ``⟨l'', trans⟨s, t⟩⟩``.
    """
    q, r, k, o = Var("q"), Var("r"), Var("k"), Var("o")
    body = let(
        "r",
        App(P1, App(P0, q)),
        let(
            "k",
            App(P1, q),
            let(
                "o",
                App(App(P0, r), App(P0, k)),
                _pair(App(P0, o), App(mk_trans_realizer(), _pair(App(P1, k), App(P1, o)))),
            ),
        ),
    )
    return _value(lam("q", body))


def mp_decider(threshold: int = 2) -> Term:
    """Decides ``vn(threshold - 1) ε n`` for ``n = vn(k)`` from ``⟨k, r⟩``.

    Answers ``⟨0, ⟨threshold - 1, refl⟩⟩`` when ``k ≥ threshold`` and
    ``⟨1, 0⟩`` otherwise (the negative branch needs no content).
    """
    m = Var("m")
    yes = _pair(Num(0), _pair(Num(threshold - 1), mk_refl_realizer()))
    no = _pair(Num(1), Num(0))
    # λj. IFZ j no (λj. IFZ j no ... (λ_. yes)), threshold deep
    branch: Term = App(K, yes)
    for _ in range(threshold - 1):
        branch = abstract("j", App(App(App(IFZ, Var("j")), no), branch), strict=False)
    return _value(lam("m", App(App(App(IFZ, App(P0, m)), no), branch)))


def mp_searcher() -> Term:
    """``fix(λs d k. let o = d⟨k, r⟩ in IFZ (o0) ⟨⟨k, r⟩, o1⟩ (λ_. s d (k+1)))``.

    Unbounded search for the first ``k`` at which the decider answers 0;
    the result realizes ``∃n (n ε ω ∧ φ(n))`` at ``n = vn(k)``.
    """
    s, d, k, o = Var("s"), Var("d"), Var("k"), Var("o")
    R = mk_refl_realizer()
    found = _pair(_pair(k, R), App(P1, o))
    # the recursive call must wait for the branch argument
    u = Var("u")
    again = abstract("u", App(App(s, App(App(K, d), u)), App(SUCC, k)), strict=False)
    body = let("o", App(d, _pair(k, R)), App(App(App(IFZ, App(P0, o)), found), again))
    return _value(fix(lam("s", "d", "k", body)))


def mp_realizer() -> Term:
    """``λd e. search d 0``: the proof of ``¬¬∃`` is not consulted."""
    d = Var("d")
    e = Var("e")
    inner = abstract("e", App(App(mp_searcher(), App(App(K, d), e)), Num(0)), strict=False)
    return _value(lam("d", inner))


def relabel(label: int) -> Term:
    """``λk. ⟨label, k1⟩``: move a membership realizer to edge ``label``."""
    k = Var("k")
    return _value(lam("k", _pair(Num(label), App(P1, k))))


def suite_library() -> Dict[str, Term]:
    """Every name a manifest may list under ``(library ...)``.

    Besides the realizers above this holds small data hints: realizers for
    the antecedents of the implication cases, so that the pool-relative
    reading of ``→`` is not satisfied vacuously.
    """
    R = mk_refl_realizer()
    lib = dict(standard_library())
    lib.update(
        {
            "ext": ext_realizer(),
            "ext-premise-same": _value(_pair(relabel(0), relabel(0))),
            "ext-premise-swap": _value(_pair(relabel(1), relabel(0))),
            "omega0": _value(_pair(Num(0), R)),
            "phi-witness": _value(_pair(Num(1), R)),
            "mp-exists": _value(_pair(_pair(Num(2), R), _pair(Num(1), R))),
            "union-fwd": union_forward(),
            "union-bwd": union_backward(),
            "mp-decider": mp_decider(),
            "mp-search": mp_searcher(),
            "mp": mp_realizer(),
        }
    )
    return lib
