"""Carrier-level oracles for the categorical constructions.

Each ``check_*`` returns a list of failure descriptions (empty on success).
The oracles are classical set theory on finite carriers; realizer-level
claims are checked with the tracking checkers.
"""

import itertools

from families import assemblies_up_to_iso, morphisms

from rwb.assembly import (
    AsmMorphism,
    compose,
    forall_f,
    image,
    is_tracker,
    mediating_map,
    pairing_term,
    pullback,
    search_term,
    verify_cover,
)
from rwb.pca import Var, default_atoms, enumerate_values, i_combinator, lam, App, P

I = i_combinator()
n, p, q = Var("n"), Var("p"), Var("q")
PAIRF = lam("p", "q", "n", App(App(P, App(p, n)), App(q, n)))

_MEDIATOR_MEMO = {}


def find_mediator(h, k, m, D, Pb, max_size=7):
    """Exhaustive search, in enumeration order, over the values of all terms
    of size ≤ ``max_size`` built from the constants, ``I``, ``PAIRF`` and the
    cone's two trackers."""
    key = (h.tracker, k.tracker, tuple((D[d].members, Pb[m[d]].witness) for d in D.carrier))
    if key not in _MEDIATOR_MEMO:
        atoms = default_atoms() + [I, PAIRF, h.tracker, k.tracker]
        values = (v for v, _ in enumerate_values(max_size, atoms))
        t, tried, _ = search_term(lambda t: is_tracker(t, m, D, Pb), values)
        _MEDIATOR_MEMO[key] = (t, tried)
    return _MEDIATOR_MEMO[key]


def check_pullback(f, g, cone_size=2):
    bad = []
    Pb, p1, p2 = pullback(f, g)
    B, C = f.source, g.source
    expect = {(b, c) for b in B.carrier for c in C.carrier if f.map[b] == g.map[c]}
    if set(Pb.carrier) != expect:
        bad.append("carrier differs from the set-level pullback")
    for proj in (p1, p2):
        if not proj.check().ok:
            bad.append(f"projection not tracked: {proj.check()}")
    for x in Pb.carrier:
        if Pb[x].member(Pb[x].witness) is not True:
            bad.append(f"witness of {x} fails")
    cones = 0
    for D in assemblies_up_to_iso("d", cone_size):
        ks = list(morphisms(D, C))
        for h in morphisms(D, B):
            for k in ks:
                if any(f.map[h.map[d]] != g.map[k.map[d]] for d in D.carrier):
                    continue
                cones += 1
                factor = [
                    u for u in itertools.product(Pb.carrier, repeat=len(D))
                    if all(u[i] == (h.map[d], k.map[d]) for i, d in enumerate(D.carrier))
                ]
                if len(factor) != 1:
                    bad.append("mediating carrier map not unique")
                    continue
                m = dict(zip(D.carrier, factor[0]))
                t, _ = find_mediator(h, k, m, D, Pb)
                if t is None:
                    bad.append(f"no mediating tracker for cone {h.map} {k.map}")
                    continue
                med = mediating_map(Pb, h, k, t)
                if not med.check().ok:
                    bad.append("mediator not tracked")
                if not compose(p1, med).check().ok or not compose(p2, med).check().ok:
                    bad.append("composites with the projections not tracked")
    return bad, cones


def check_image(f):
    bad = []
    cover, mono = image(f)
    if any(mono.map[cover.map[b]] != f.map[b] for b in f.source.carrier):
        bad.append("mono ∘ cover ≠ f")
    if len(set(mono.map.values())) != len(mono.map):
        bad.append("mono not injective")
    if set(mono.source.carrier) != {f.map[b] for b in f.source.carrier}:
        bad.append("image carrier wrong")
    for m in (cover, mono):
        if not m.check().ok:
            bad.append("factor not tracked")
    if not verify_cover(cover, I).ok:
        bad.append("cover fails with the identity witness")
    for a in mono.source.carrier:
        union = {r for b in f.fibre(a) for r in f.source[b].members}
        if set(mono.source[a].members) != union:
            bad.append(f"ι({a}) is not the fibre union")
    return bad


def check_forall(f, pool):
    bad = []
    A, B = f.target, f.source
    subsets = [s for k in range(len(B) + 1) for s in itertools.combinations(B.carrier, k)]
    for s in subsets:
        S = B.restrict(s)
        res = forall_f(S, f, pool)
        R0 = set(res.assembly.carrier)
        classical = {a for a in A.carrier if set(f.fibre(a)) <= set(s)}
        if R0 != classical or res.truncated:
            bad.append(f"∀_f carrier {sorted(R0)} vs classical {sorted(classical)}")
        for a in R0:
            rho = res.assembly[a]
            if rho.member(rho.witness) is not True:
                bad.append(f"ρ({a}) witness fails")
        if not res.inclusion.check().ok:
            bad.append("inclusion not tracked")
        for k in range(len(A) + 1):
            for R in itertools.combinations(A.carrier, k):
                pulled = {b for b in B.carrier if f.map[b] in R}
                if (pulled <= set(s)) != (set(R) <= R0):
                    bad.append(f"adjunction fails at R={R}, S={s}")
    return bad


def check_composition(f, g):
    """``g ∘ f`` is tracked by ``λn. g(f(n))``."""
    h = compose(g, f)
    res = is_tracker(h.tracker, h.map, f.source, g.target)
    return [] if res.ok else [f"composite not tracked: {res}"]
