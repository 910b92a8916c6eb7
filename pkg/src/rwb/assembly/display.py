"""Display maps and the constructions that need small (finite) fibres:
exponentials, W-types with their decorations, weak power objects and the
representation used by the universes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import DEFAULT_BUDGET
from ..pca import P, P0, P1, App, Num, Term, Timeout, Value, Var, apply, i_combinator, lam, pair_val
from .constructions import bracket, components, pair_set, partitioned_cover, pullback
from .core import (
    COUNTEREXAMPLE,
    INCONCLUSIVE,
    VERIFIED,
    Assembly,
    AsmMorphism,
    CheckResult,
    Element,
    is_tracker,
    search_term,
    table_tracker,
)
from .realizer_sets import Derived, FiniteSet, Full, RealizerSet, and3

__all__ = [
    "DisplayMapData",
    "standard_display",
    "pullback_display",
    "ExponentialResult",
    "exponential",
    "WTree",
    "WTypeResult",
    "wtype",
    "decoration_set",
    "WeakPower",
    "weak_power",
    "PowerSizeError",
    "POWER_LIMIT",
    "Representation",
    "representation",
    "eval_tracker",
    "partitioned_square",
]

_OUTCOME3 = {VERIFIED: True, COUNTEREXAMPLE: False, INCONCLUSIVE: None}


@dataclass(frozen=True, eq=False)
class DisplayMapData:
    """A display map ``morphism: W → A`` presented through a standard display
    ``(B, β[f]) → (A, α)``.

    ``beta`` holds the finite sets ``β(b)``; ``to_standard`` and
    ``from_standard`` are the mutually inverse isomorphisms between
    ``morphism.source`` and ``(B, β[f])`` (identities for a standard display).
    """

    morphism: AsmMorphism
    beta: Mapping[Element, FiniteSet]
    standard: AsmMorphism
    to_standard: AsmMorphism
    from_standard: AsmMorphism

    def __post_init__(self):
        for b, s in self.beta.items():
            if not isinstance(s, FiniteSet):
                raise ValueError(f"β({b!r}) must be finite in display data")

    @property
    def base(self) -> Assembly:
        return self.morphism.target

    def fibre(self, a: Element) -> List[Element]:
        return self.standard.fibre(a)

    def check(self, budget: Optional[int] = None) -> CheckResult:
        """Verify the standard map and both isomorphisms are tracked and
        the triangle commutes at carrier level."""
        for b in self.morphism.source.carrier:
            if self.standard.map[self.to_standard.map[b]] != self.morphism.map[b]:
                return CheckResult(COUNTEREXAMPLE, 0, budget or DEFAULT_BUDGET, b, None, "triangle")
            if self.from_standard.map[self.to_standard.map[b]] != b:
                return CheckResult(COUNTEREXAMPLE, 0, budget or DEFAULT_BUDGET, b, None, "not inverse")
        total = 0
        for m in (self.standard, self.to_standard, self.from_standard):
            res = m.check(budget)
            if not res.ok:
                return res
            total += res.sample_size
        return CheckResult(VERIFIED, total, budget or DEFAULT_BUDGET)


def standard_display(
    carrier: Sequence[Element],
    beta: Mapping[Element, Iterable],
    f: Mapping[Element, Element],
    base: Assembly,
    budget: int = DEFAULT_BUDGET,
) -> DisplayMapData:
    """``(B, β[f]) → (A, α)`` for finite ``β``, tracked by ``p1``."""
    beta = {b: s if isinstance(s, FiniteSet) else FiniteSet(s) for b, s in beta.items()}
    plain = Assembly(tuple(carrier), beta)
    B = bracket(plain, f, base)
    m = AsmMorphism(B, base, dict(f), P1, budget)
    ident = {b: b for b in carrier}
    I = i_combinator()
    return DisplayMapData(m, beta, m, AsmMorphism(B, B, ident, I), AsmMorphism(B, B, ident, I))


def pullback_display(d: DisplayMapData, g: AsmMorphism) -> Tuple[DisplayMapData, Assembly]:
    """Pull the display ``d`` back along ``g: (C, γ) → (A, α)``.

    The result is again standard: ``π(c, b) = β(b)``, so ``π[k](c, b)`` is
    ``{n : n0 ∈ β(b), n1 ∈ γ(c)}``. Returns the new display data (whose
    ``morphism`` starts at the actual pullback) and that pullback.
    """
    f = d.standard
    Pb, _, _ = pullback(g, f)  # elements (c, b), realizers ⟨γ, β[f]⟩
    carrier = Pb.carrier
    k = {cb: cb[0] for cb in carrier}
    beta = {cb: d.beta[cb[1]] for cb in carrier}
    std = standard_display(carrier, beta, k, g.source, g.budget)
    z = Var("z")
    # ⟨m, x⟩ with m ∈ β(b), x ∈ γ(c)  ↦  ⟨x, ⟨m, g(x)⟩⟩
    to_pb = lam("z", App(App(P, App(P1, z)), App(App(P, App(P0, z)), App(g.tracker, App(P1, z)))))
    # ⟨x, ⟨m, k⟩⟩  ↦  ⟨m, x⟩
    from_pb = lam("z", App(App(P, App(P0, App(P1, z))), App(P0, z)))
    ident = {cb: cb for cb in carrier}
    S = std.standard.source
    morphism = AsmMorphism(Pb, g.source, k, P0, g.budget)
    data = DisplayMapData(
        morphism,
        beta,
        std.standard,
        AsmMorphism(Pb, S, ident, from_pb, g.budget),
        AsmMorphism(S, Pb, ident, to_pb, g.budget),
    )
    return data, Pb


def eval_tracker() -> Term:
    """``λp. (p1 (p0 p)) (p0 (p1 p))``: on ``⟨⟨n0, n1⟩, ⟨m, k⟩⟩`` apply the
    function part ``n1`` to the fibre realizer ``m``."""
    p = Var("p")
    return lam("p", App(App(P1, App(P0, p)), App(P0, App(P1, p))))


@dataclass(frozen=True, eq=False)
class ExponentialResult:
    """``g^f`` over ``A``: the assembly ``(E, η)`` of tracked fibre maps,
    its projection to ``A`` and the evaluation map."""

    assembly: Assembly
    projection: AsmMorphism
    evaluation: AsmMorphism
    trackers: Dict[Element, Term]
    missing: Tuple[Element, ...]
    candidates: int

    @property
    def truncated(self) -> bool:
        return bool(self.missing)


def _fibre_maps(src: Sequence[Element], dst: Sequence[Element]):
    for image in itertools.product(dst, repeat=len(src)):
        yield tuple(zip(src, image))


def exponential(
    f: DisplayMapData,
    g: AsmMorphism,
    pool: Optional[Iterable[Term]] = None,
    budget: Optional[int] = None,
) -> ExponentialResult:
    """Elements are ``(a, φ)`` with ``φ: B_a → C_a``; ``n ∈ η(a, φ)`` iff
    ``n0 ∈ α(a)`` and ``n1(m) ∈ γ(φ b)`` for all ``b ∈ B_a``, ``m ∈ β(b)``.

    ``(a, φ)`` is kept when some pool member serves as ``n1``. Candidates
    with no tracker in the pool are listed in ``missing`` (the carrier may
    then be an under-approximation).
    """
    budget = g.budget if budget is None else budget
    if pool is None:
        from ..pca import candidate_pool

        pool = candidate_pool(5, library={"I": i_combinator()})
    pool = list(pool)
    A, C = g.target, g.source
    beta_asm = Assembly(tuple(f.beta), dict(f.beta))
    carrier, real, trackers, missing = [], {}, {}, []
    count = 0
    for a in A.carrier:
        Ba = f.fibre(a)
        Ca = g.fibre(a)
        for phi in _fibre_maps(Ba, Ca):
            count += 1
            dst = C.restrict(Ca)
            src = beta_asm.restrict(Ba)
            fmap = dict(phi)
            t, _, _ = search_term(lambda t: is_tracker(t, fmap, src, dst, budget), pool)
            e = (a, phi)
            if t is None:
                missing.append(e)
                continue
            carrier.append(e)
            trackers[e] = t
            real[e] = _eta(A[a], src, dst, fmap, e, pair_val(A[a].witness, t))
    E = Assembly(tuple(carrier), real)
    proj = AsmMorphism(E, A, {e: e[0] for e in carrier}, P0, budget)
    # evaluation on E ×_A (B, β[f]), realizers ⟨η, ⟨β, α⟩⟩
    EB, _, _ = pullback(proj, f.standard)
    ev = AsmMorphism(EB, C, {(e, b): dict(e[1])[b] for e, b in EB.carrier}, eval_tracker(), budget)
    return ExponentialResult(E, proj, ev, trackers, tuple(missing), count)


def _eta(alpha, src, dst, fmap, tag, witness) -> RealizerSet:
    def check(n, budget):
        parts = components(n, budget)
        if not parts:
            return parts
        first = alpha.member(parts[0], budget)
        if first is False:
            return False
        return and3((first, _OUTCOME3[is_tracker(parts[1], fmap, src, dst, budget).outcome]))

    return Derived("exponential", (tag,), check, witness)


def partitioned_square(d: DisplayMapData):
    """The square covering a standard display ``f: (B, β[f]) → (A, α)`` by a
    display map between partitioned assemblies.

    Returns ``(top, left, right, bottom, witnesses)`` for
    :func:`is_covering_square`: ``left`` sends ``(n, b)`` to ``(n1, f b)``,
    ``top`` and ``bottom`` forget the realizer. The canonical map is covered
    by ``λp. ⟨p0 (p1 p), p0 p⟩``, the bottom map by the identity.
    """
    f = d.standard
    Dp, top = partitioned_cover(f.source)
    Ap, bottom = partitioned_cover(f.target)
    left_map = {}
    for n, b in Dp.carrier:
        n1 = components(n, DEFAULT_BUDGET)[1]
        left_map[(n, b)] = (n1, f.map[b])
    left = AsmMorphism(Dp, Ap, left_map, P1, f.budget)
    p = Var("p")
    s = lam("p", App(App(P, App(P0, App(P1, p))), App(P0, p)))
    return top, left, f, bottom, (s, i_combinator())


# -- W-types -----------------------------------------------------------------


@dataclass(frozen=True)
class WTree:
    """``sup_a(t)`` with ``t`` listed as ``(b, subtree)`` over the fibre of ``a``."""

    label: Element
    children: Tuple[Tuple[Element, "WTree"], ...] = ()

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for _, c in self.children), default=-1)

    def child(self, b: Element) -> "WTree":
        for bb, c in self.children:
            if bb == b:
                return c
        raise KeyError(b)

    def __str__(self):
        if not self.children:
            return f"sup({self.label!r})"
        inner = ", ".join(f"{b!r}: {c}" for b, c in self.children)
        return f"sup({self.label!r}; {inner})"


def _all_trees(fibres: Mapping[Element, Sequence[Element]], labels: Sequence[Element], depth: int):
    level: List[WTree] = [WTree(a) for a in labels if not fibres[a]]
    for _ in range(depth):
        nxt = []
        for a in labels:
            bs = fibres[a]
            if not bs:
                nxt.append(WTree(a))
                continue
            for combo in itertools.product(level, repeat=len(bs)):
                nxt.append(WTree(a, tuple(zip(bs, combo))))
        level = nxt
    return level


def decoration_set(
    w: WTree,
    d: DisplayMapData,
    witness: Optional[Term] = None,
    memo: Optional[dict] = None,
) -> Derived:
    """``δ(sup_a t)``: ``n0 ∈ α(a)`` and, for ``b`` over ``a``, ``m ∈ β(b)``,
    ``n1(m)`` is defined and in ``δ(t b)``. Membership recurses on ``w``."""
    alpha = d.base.realizers
    memo = {} if memo is None else memo

    def member(n, tree, budget):
        key = (n, tree, budget)
        if key in memo:
            return memo[key]
        parts = components(n, budget)
        if not parts:
            memo[key] = parts
            return parts
        n0, n1 = parts
        out = [alpha[tree.label].member(n0, budget)]
        if out[0] is not False:
            for b, sub in tree.children:
                for m in d.beta[b].members:
                    r = apply(n1, m, budget)
                    if isinstance(r, Value):
                        v = member(r.term, sub, budget)
                    else:
                        v = None if isinstance(r, Timeout) else False
                    out.append(v)
                    if v is False:
                        break
                if out[-1] is False:
                    break
        memo[key] = and3(out)
        return memo[key]

    return Derived("decoration", (w,), lambda n, budget: member(n, w, budget), witness)


@dataclass(frozen=True, eq=False)
class WTypeResult:
    """Trees of ``W(f)`` up to a depth bound with their decoration sets.

    ``trees`` holds the trees whose decoration set has a constructed
    witness; ``undecorated`` those for which the table construction failed.
    """

    trees: Tuple[WTree, ...]
    delta: Dict[WTree, Derived]
    undecorated: Tuple[WTree, ...]
    mode_pair: bool = True

    def assembly(self) -> Assembly:
        return Assembly(self.trees, dict(self.delta))


def _decorate(w: WTree, d: DisplayMapData, memo, cache) -> Optional[Term]:
    if w in cache:
        return cache[w]
    n0 = d.base[w.label].witness
    table: Dict[int, Term] = {}
    other: List[Tuple[Term, Term]] = []
    for b, sub in w.children:
        child = _decorate(sub, d, memo, cache)
        if child is None:
            cache[w] = None
            return None
        for m in d.beta[b].members:
            if isinstance(m, Num):
                table.setdefault(m.k, child)
            else:
                other.append((m, child))
    if other:
        cache[w] = None
        return None
    n = pair_val(n0, table_tracker(table))
    ok = decoration_set(w, d, memo=memo).member(n, DEFAULT_BUDGET)
    cache[w] = n if ok else None
    return cache[w]


def wtype(d: DisplayMapData, depth_bound: int) -> WTypeResult:
    """All ``sup_a(t)`` of depth at most ``depth_bound`` (a root over an
    empty fibre has depth 0) with their decorations ``δ``.

    A witness is constructed as ``⟨α-witness, table⟩`` where the table sends
    each ``m ∈ β(b)`` to a witness of the subtree at ``b``.
    """
    labels = d.base.carrier
    fibres = {a: d.fibre(a) for a in labels}
    memo: dict = {}
    cache: dict = {}
    trees, delta, bad = [], {}, []
    seen = set()
    for w in _all_trees(fibres, labels, depth_bound):
        if w in seen:
            continue
        seen.add(w)
        wit = _decorate(w, d, memo, cache)
        if wit is None:
            bad.append(w)
            continue
        trees.append(w)
        delta[w] = decoration_set(w, d, wit, memo)
    return WTypeResult(tuple(trees), delta, tuple(bad))


# -- weak power objects --------------------------------------------------------

POWER_LIMIT = 12


class PowerSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WeakPower:
    """``(P, π)`` and the membership assembly ``(E, η) ⊆ X × P``."""

    assembly: Assembly
    membership: Assembly
    trackers: Dict[Element, Term]
    missing: Tuple[Element, ...]


def _nonempty_subsets(pool: Sequence[int]):
    for k in range(1, len(pool) + 1):
        yield from itertools.combinations(pool, k)


def weak_power(
    X: Assembly,
    pool: Sequence[int],
    terms: Optional[Iterable[Term]] = None,
    budget: Optional[int] = None,
    limit: int = POWER_LIMIT,
) -> WeakPower:
    """Elements are ``(α, φ)``: a subset ``α`` of the carrier and, for each
    ``x ∈ α``, a non-empty ``φ(x) ⊆ pool``, such that one ``n`` sends every
    ``m ∈ φ(x)`` into ``χ(x)``.

    ``π(α, φ)`` is the set of such ``n`` (every value when ``α`` is empty).
    ``n ∈ η(x, α, φ)`` iff ``n0 ∈ φ(x)`` and ``n1 ∈ π(α, φ)``.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    pool = sorted(set(pool))
    if len(X) * len(pool) > limit:
        raise PowerSizeError(f"|carrier|·|pool| = {len(X) * len(pool)} exceeds {limit}")
    if terms is None:
        from ..pca import candidate_pool

        terms = candidate_pool(5, library={"I": i_combinator()})
    terms = list(terms)
    carrier, real, trackers, missing = [], {}, {}, []
    for k in range(len(X) + 1):
        for alpha in itertools.combinations(X.carrier, k):
            for choice in itertools.product(list(_nonempty_subsets(pool)), repeat=k):
                phi = tuple(zip(alpha, choice))
                el = (alpha, phi)
                if not alpha:
                    carrier.append(el)
                    real[el] = Full()
                    continue
                src = Assembly(alpha, {x: FiniteSet(ms) for x, ms in phi})
                ident = {x: x for x in alpha}
                t, _, _ = search_term(lambda t: is_tracker(t, ident, src, X, budget), terms)
                if t is None:
                    missing.append(el)
                    continue
                carrier.append(el)
                trackers[el] = t
                real[el] = _pi(src, X, ident, el, t)
    Pw = Assembly(tuple(carrier), real)
    mem_carrier, mem_real = [], {}
    for el in carrier:
        for x, ms in el[1]:
            key = (x, el)
            mem_carrier.append(key)
            mem_real[key] = pair_set("membership", FiniteSet(ms), real[el], key)
    E = Assembly(tuple(mem_carrier), mem_real)
    return WeakPower(Pw, E, trackers, tuple(missing))


def _pi(src, X, ident, tag, witness) -> RealizerSet:
    return Derived(
        "power",
        (tag,),
        lambda n, budget: _OUTCOME3[is_tracker(n, ident, src, X, budget).outcome],
        witness,
    )


# -- representation data for the universes --------------------------------


@dataclass(frozen=True, eq=False)
class Representation:
    """``ρ: (D, δ) → (T, τ)`` over a finite set of labels.

    ``T`` has elements ``(u, p)`` with ``p`` labelling the edges of ``u``,
    realized by ``0`` alone; ``D`` has elements ``(u, p, e)`` realized by the
    label ``p(e)``.
    """

    display: DisplayMapData
    T: Assembly
    D: Assembly


def representation(shapes: Mapping[Element, Sequence[Element]], labels: Sequence[int]) -> Representation:
    """``shapes`` maps each shape ``u`` to its edge names ``E_u``; every
    labelling ``p: E_u → labels`` yields an element of ``T``."""
    t_carrier, d_carrier, beta, f = [], [], {}, {}
    for u, edges in shapes.items():
        for image in itertools.product(labels, repeat=len(edges)):
            p = tuple(zip(edges, image))
            t_carrier.append((u, p))
            for e, lab in p:
                d = (u, p, e)
                d_carrier.append(d)
                beta[d] = FiniteSet([lab])
                f[d] = (u, p)
    T = Assembly(tuple(t_carrier), {t: FiniteSet([0]) for t in t_carrier})
    disp = standard_display(d_carrier, beta, f, T)
    D = Assembly(tuple(d_carrier), beta)
    return Representation(disp, T, D)
