"""Finite limits, images, sums, ∀ along a map, bracketing and covers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from ..config import DEFAULT_BUDGET
from ..pca import P0, P1, Term, Timeout, Value, i_combinator, pair_val, proj0, proj1
from .core import (
    COUNTEREXAMPLE,
    INCONCLUSIVE,
    VERIFIED,
    Assembly,
    AsmMorphism,
    CheckResult,
    Element,
    is_tracker,
    pairing_term,
    search_term,
    verify_cover,
)
from .realizer_sets import Derived, FiniteSet, Full, RealizerSet, and3, or3

__all__ = [
    "components",
    "pair_set",
    "pullback",
    "product",
    "mediating_map",
    "image",
    "ForallResult",
    "forall_f",
    "sum_assembly",
    "injections",
    "bracket",
    "composite_bracket",
    "partitioned_cover",
    "NonCommuting",
    "is_covering_square",
]


def components(n: Term, budget: int):
    """``(n0, n1)`` if ``n`` is a pair, ``False`` if not, ``None`` on timeout."""
    a, b = proj0(n, budget), proj1(n, budget)
    if isinstance(a, Value) and isinstance(b, Value):
        return a.term, b.term
    if isinstance(a, Timeout) or isinstance(b, Timeout):
        return None
    return False


def pair_set(tag: str, first: RealizerSet, second: RealizerSet, data: tuple = ()) -> RealizerSet:
    """``{n : n0 ∈ first and n1 ∈ second}``."""

    def check(n, budget):
        parts = components(n, budget)
        if not parts:
            return parts
        return and3(s.member(p, budget) for s, p in zip((first, second), parts))

    enum = None
    if first.is_finite and second.is_finite:

        def enum():
            return tuple(pair_val(x, y) for x in first.elements() for y in second.elements())

    w = None
    if first.witness is not None and second.witness is not None:
        w = pair_val(first.witness, second.witness)
    return Derived(tag, data, check, w, enum)


def pullback(f: AsmMorphism, g: AsmMorphism) -> Tuple[Assembly, AsmMorphism, AsmMorphism]:
    """``B ×_A C`` with ``n ∈ π(b, c)`` iff ``n0 ∈ β(b)`` and ``n1 ∈ γ(c)``.

    Returns the pullback and its two projections, tracked by ``p0``/``p1``.
    """
    if tuple(f.target.carrier) != tuple(g.target.carrier):
        raise ValueError("pullback needs a common target")
    B, C = f.source, g.source
    carrier = tuple((b, c) for b in B.carrier for c in C.carrier if f.map[b] == g.map[c])
    real = {bc: pair_set("pullback", B[bc[0]], C[bc[1]], bc) for bc in carrier}
    P = Assembly(carrier, real)
    budget = max(f.budget, g.budget)
    first = AsmMorphism(P, B, {bc: bc[0] for bc in carrier}, P0, budget)
    second = AsmMorphism(P, C, {bc: bc[1] for bc in carrier}, P1, budget)
    return P, first, second


def product(A: Assembly, B: Assembly) -> Tuple[Assembly, AsmMorphism, AsmMorphism]:
    """Binary product as the pullback over the terminal assembly."""
    from .core import terminal

    one = terminal()
    I = i_combinator()
    to_a = AsmMorphism(A, one, {a: "*" for a in A.carrier}, I)
    to_b = AsmMorphism(B, one, {b: "*" for b in B.carrier}, I)
    return pullback(to_a, to_b)


def mediating_map(
    P: Assembly, h: AsmMorphism, k: AsmMorphism, tracker: Optional[Term] = None
) -> AsmMorphism:
    """The carrier map ``d ↦ (h d, k d)`` into a pullback ``P``.

    The tracker defaults to ``λn. ⟨h n, k n⟩``.
    """
    if tracker is None:
        tracker = pairing_term(h.tracker, k.tracker)
    m = {d: (h.map[d], k.map[d]) for d in h.source.carrier}
    return AsmMorphism(h.source, P, m, tracker, max(h.budget, k.budget))


def _union(sets: List[RealizerSet], tag: str, data) -> RealizerSet:
    if all(isinstance(s, FiniteSet) for s in sets):
        return FiniteSet(m for s in sets for m in s.members)
    if any(isinstance(s, Full) for s in sets):
        return Full()
    enum = None
    if all(s.is_finite for s in sets):

        def enum():
            out = []
            for s in sets:
                out.extend(x for x in s.elements() if x not in out)
            return tuple(out)

    witness = next((s.witness for s in sets if s.witness is not None), None)
    return Derived(tag, data, lambda n, budget: or3(s.member(n, budget) for s in sets), witness, enum)


def image(f: AsmMorphism) -> Tuple[AsmMorphism, AsmMorphism]:
    """Factor ``f`` as a cover followed by a mono through ``(I, ι)``, where
    ``ι(a)`` is the union of the realizer sets over the fibre of ``a``.

    Both factors are tracked by the identity combinator.
    """
    seen: Dict[Element, None] = {}
    for b in f.source.carrier:
        seen.setdefault(f.map[b], None)
    carrier = tuple(a for a in f.target.carrier if a in seen)
    real = {a: _union([f.source[b] for b in f.fibre(a)], "image", (a,)) for a in carrier}
    I_asm = Assembly(carrier, real)
    I = i_combinator()
    cover = AsmMorphism(f.source, I_asm, dict(f.map), I, f.budget)
    # ι(a) collects β(b) for b over a, so f's tracker carries it into α(a)
    mono = AsmMorphism(I_asm, f.target, {a: a for a in carrier}, f.tracker, f.budget)
    return cover, mono


@dataclass(frozen=True, eq=False)
class ForallResult:
    """``∀_f S`` as a sub-assembly of ``A``.

    ``trackers`` records the ``n1`` found for each admitted element;
    ``truncated`` lists the elements of the carrier-level ``∀_f S`` for which
    the pool search found nothing (possible under-approximation).
    """

    assembly: Assembly
    inclusion: AsmMorphism
    trackers: Dict[Element, Term]
    truncated: Tuple[Element, ...]
    classical: Tuple[Element, ...]


def forall_f(
    S: Assembly,
    f: AsmMorphism,
    pool: Optional[Iterable[Term]] = None,
    budget: Optional[int] = None,
) -> ForallResult:
    """Universal quantification of the sub-assembly ``S`` of ``f.source``
    along ``f``.

    ``n ∈ ρ(a)`` iff ``n0 ∈ α(a)`` and ``n1(m)`` is defined and in ``σ(b)``
    for every ``b`` over ``a`` and ``m ∈ β(b)``. An element is admitted when a
    pool member ``t`` makes ``⟨α-witness, t⟩`` a member.
    """
    budget = f.budget if budget is None else budget
    if pool is None:
        from ..pca import candidate_pool

        pool = candidate_pool(5, library={"I": i_combinator()})
    pool = list(pool)
    inS = set(S.carrier)
    if not inS <= set(f.source.carrier):
        raise ValueError("S is not a sub-assembly of the source")
    A, B = f.target, f.source
    classical = tuple(a for a in A.carrier if all(b in inS for b in f.fibre(a)))
    carrier, real, trackers, truncated = [], {}, {}, []
    for a in classical:
        fibre = f.fibre(a)
        src = B.restrict(fibre)
        dst = S.restrict(fibre)
        ident = {b: b for b in fibre}
        t, _, _ = search_term(lambda t: is_tracker(t, ident, src, dst, budget), pool)
        if t is None:
            truncated.append(a)
            continue
        rho = _rho(A[a], src, dst, a, pair_val(A[a].witness, t))
        carrier.append(a)
        real[a] = rho
        trackers[a] = t
    R = Assembly(tuple(carrier), real)
    inc = AsmMorphism(R, A, {a: a for a in carrier}, P0, budget)
    return ForallResult(R, inc, trackers, tuple(truncated), classical)


def _rho(alpha: RealizerSet, src: Assembly, dst: Assembly, a, witness) -> RealizerSet:
    ident = {b: b for b in src.carrier}

    def check(n, budget):
        parts = components(n, budget)
        if not parts:
            return parts
        n0, n1 = parts
        first = alpha.member(n0, budget)
        if first is False:
            return False
        res = is_tracker(n1, ident, src, dst, budget)
        second = {VERIFIED: True, COUNTEREXAMPLE: False, INCONCLUSIVE: None}[res.outcome]
        return and3((first, second))

    return Derived("forall", (a,), check, witness)


def sum_assembly(A: Assembly, B: Assembly) -> Assembly:
    """Disjoint union with carrier ``(0, a)`` and ``(1, b)``; realizers unchanged."""
    carrier = tuple((0, a) for a in A.carrier) + tuple((1, b) for b in B.carrier)
    real = {(0, a): A[a] for a in A.carrier}
    real.update({(1, b): B[b] for b in B.carrier})
    return Assembly(carrier, real)


def injections(A: Assembly, B: Assembly) -> Tuple[Assembly, AsmMorphism, AsmMorphism]:
    S = sum_assembly(A, B)
    I = i_combinator()
    left = AsmMorphism(A, S, {a: (0, a) for a in A.carrier}, I)
    right = AsmMorphism(B, S, {b: (1, b) for b in B.carrier}, I)
    return S, left, right


def bracket(beta: Assembly, f: Dict[Element, Element], alpha: Assembly) -> Assembly:
    """``(B, β[f])`` with ``n ∈ β[f](b)`` iff ``n0 ∈ β(b)`` and ``n1 ∈ α(fb)``."""
    real = {b: pair_set("bracket", beta[b], alpha[f[b]], (b,)) for b in beta.carrier}
    return Assembly(tuple(beta.carrier), real)


def composite_bracket(
    gamma: Assembly, g: Dict[Element, Element], beta: Assembly, f: Dict[Element, Element], alpha: Assembly
) -> Assembly:
    """``(C, γ[g])`` over ``(B, β[f])``: ``n0 ∈ γ(c)`` and ``n1 ∈ β[f](gc)``,
    the form the composite of two standard display maps takes."""
    mid = bracket(beta, f, alpha)
    return bracket(gamma, g, mid)


def partitioned_cover(A: Assembly) -> Tuple[Assembly, AsmMorphism]:
    """The partitioned assembly of pairs ``(n, a)`` with ``n ∈ α(a)``, realized
    by ``{n}``, and its projection to ``A`` (tracked by, and covered with,
    the identity)."""
    carrier, real = [], {}
    for a in A.carrier:
        r = A[a]
        if not r.is_finite:
            raise ValueError(f"realizers of {a!r} are not finitely enumerable")
        for n in r.elements():
            carrier.append((n, a))
            real[(n, a)] = FiniteSet([n])
    Q = Assembly(tuple(carrier), real)
    proj = AsmMorphism(Q, A, {na: na[1] for na in carrier}, i_combinator())
    return Q, proj


class NonCommuting(ValueError):
    pass


def is_covering_square(
    top: AsmMorphism,
    left: AsmMorphism,
    right: AsmMorphism,
    bottom: AsmMorphism,
    witnesses: Tuple[Term, Term],
    budget: Optional[int] = None,
) -> CheckResult:
    """Check the square ``D -top-> C``, ``D -left-> B``, ``C -right-> A``,
    ``B -bottom-> A`` is a covering square.

    ``witnesses = (s, t)``: ``s`` covers the canonical map ``D → B ×_A C``,
    ``t`` covers ``bottom``. The four morphisms are also checked tracked.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    for d in top.source.carrier:
        if right.map[top.map[d]] != bottom.map[left.map[d]]:
            raise NonCommuting(f"square does not commute at {d!r}")
    for m in (top, left, right, bottom):
        res = m.check(budget)
        if not res.ok:
            return res
    P, _, _ = pullback(bottom, right)
    canon = mediating_map(P, left, top)
    res = canon.check(budget)
    if not res.ok:
        return res
    res = verify_cover(canon, witnesses[0], budget)
    if not res.ok:
        return res
    res2 = verify_cover(bottom, witnesses[1], budget)
    if not res2.ok:
        return res2
    return CheckResult(VERIFIED, res.sample_size + res2.sample_size, budget)
