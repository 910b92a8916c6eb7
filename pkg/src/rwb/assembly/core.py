"""Assemblies over finite carriers, tracked morphisms and their checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import DEFAULT_BUDGET
from ..pca import (
    IFZ,
    K,
    P,
    App,
    Term,
    Timeout,
    Value,
    Var,
    abstract,
    apply,
    format_term,
    i_combinator,
    lam,
    reduce,
)
from .realizer_sets import EmptyRealizerSet, FiniteSet, Full, RealizerSet, as_term

__all__ = [
    "Assembly",
    "AsmMorphism",
    "CheckResult",
    "VERIFIED",
    "COUNTEREXAMPLE",
    "INCONCLUSIVE",
    "mk_assembly",
    "terminal",
    "empty_assembly",
    "identity",
    "compose",
    "is_tracker",
    "verify_cover",
    "table_tracker",
    "compose_term",
    "pairing_term",
    "search_term",
    "is_partitioned",
]

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
INCONCLUSIVE = "inconclusive"

Element = Hashable


@dataclass(frozen=True, eq=False)
class Assembly:
    """A finite carrier together with a realizer set for each element."""

    carrier: Tuple[Element, ...]
    realizers: Mapping[Element, RealizerSet]

    def __post_init__(self):
        if len(set(self.carrier)) != len(self.carrier):
            raise ValueError("carrier ids must be unique")
        missing = [a for a in self.carrier if a not in self.realizers]
        if missing:
            raise EmptyRealizerSet(missing[0])
        for a in self.carrier:
            if self.realizers[a].witness is None:
                raise EmptyRealizerSet(a)

    def __getitem__(self, a: Element) -> RealizerSet:
        return self.realizers[a]

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)

    def restrict(self, elements: Iterable[Element]) -> "Assembly":
        keep = set(elements)
        carrier = tuple(a for a in self.carrier if a in keep)
        return Assembly(carrier, {a: self.realizers[a] for a in carrier})

    def __repr__(self):
        body = ", ".join(f"{a!r}: {self.realizers[a]}" for a in self.carrier)
        return f"Assembly({{{body}}})"


def mk_assembly(carrier: Sequence[Element], realizer_map: Mapping) -> Assembly:
    """Validate and build. Plain iterables of ints become :class:`FiniteSet`."""
    sets = {}
    for a in carrier:
        if a not in realizer_map:
            raise EmptyRealizerSet(a)
        r = realizer_map[a]
        if not isinstance(r, RealizerSet):
            r = FiniteSet(r)
        sets[a] = r
    return Assembly(tuple(carrier), sets)


def terminal() -> Assembly:
    return Assembly(("*",), {"*": Full()})


def empty_assembly() -> Assembly:
    return Assembly((), {})


def is_partitioned(a: Assembly) -> bool:
    return all(isinstance(r, FiniteSet) and len(r) == 1 for r in a.realizers.values())


@dataclass(frozen=True, eq=False)
class AsmMorphism:
    source: Assembly
    target: Assembly
    map: Mapping[Element, Element]
    tracker: Term
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        for b in self.source.carrier:
            if b not in self.map:
                raise ValueError(f"carrier map undefined at {b!r}")
            if self.map[b] not in self.target.realizers:
                raise ValueError(f"{b!r} maps outside the target carrier")

    def __call__(self, b: Element) -> Element:
        return self.map[b]

    def fibre(self, a: Element) -> List[Element]:
        return [b for b in self.source.carrier if self.map[b] == a]

    def check(self, budget: Optional[int] = None) -> "CheckResult":
        return is_tracker(self.tracker, self.map, self.source, self.target, budget or self.budget)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a sample-based check.

    ``element`` and ``realizer`` locate the counterexample or the undecided
    case; ``sample_size`` counts the realizers that were visited.
    """

    outcome: str
    sample_size: int
    budget: int
    element: Optional[Element] = None
    realizer: Optional[Term] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.outcome == VERIFIED

    def __bool__(self):
        return self.ok

    def record(self) -> Dict[str, object]:
        return {
            "outcome": self.outcome,
            "sample": self.sample_size,
            "budget": self.budget,
            "element": None if self.element is None else repr(self.element),
            "realizer": None if self.realizer is None else format_term(self.realizer),
            "detail": self.detail,
        }


def _run(r: Term, n: Term, budget: int):
    out = apply(r, n, budget)
    if isinstance(out, Value):
        return out.term, ""
    if isinstance(out, Timeout):
        return None, "timeout"
    return False, f"undefined: {out.reason}" if getattr(out, "reason", "") else "undefined"


def is_tracker(
    r: Term,
    f: Mapping[Element, Element],
    src: Assembly,
    dst: Assembly,
    budget: Optional[int] = None,
) -> CheckResult:
    """Check ``r(n) ∈ dst(f b)`` for every ``b`` and sampled ``n ∈ src(b)``."""
    budget = DEFAULT_BUDGET if budget is None else budget
    visited = 0
    pending = None
    for b in src.carrier:
        target = dst.realizers[f[b]]
        for n in src.realizers[b].sample():
            visited += 1
            k, why = _run(r, n, budget)
            if k is False:
                return CheckResult(COUNTEREXAMPLE, visited, budget, b, n, why)
            if k is None:
                pending = pending or CheckResult(INCONCLUSIVE, 0, budget, b, n, why)
                continue
            verdict = target.member(k, budget)
            if verdict is False:
                return CheckResult(
                    COUNTEREXAMPLE, visited, budget, b, n, f"{format_term(k)} does not realize {f[b]!r}"
                )
            if verdict is None:
                pending = pending or CheckResult(INCONCLUSIVE, 0, budget, b, n, "membership timeout")
    if pending is not None:
        return CheckResult(INCONCLUSIVE, visited, budget, pending.element, pending.realizer, pending.detail)
    return CheckResult(VERIFIED, visited, budget)


def verify_cover(f: AsmMorphism, s: Term, budget: Optional[int] = None) -> CheckResult:
    """Check that ``s`` sends each sampled ``n ∈ α(a)`` into ``β(b)`` for some
    ``b`` in the fibre over ``a``."""
    budget = DEFAULT_BUDGET if budget is None else budget
    visited = 0
    pending = None
    for a in f.target.carrier:
        fibre = f.fibre(a)
        if not fibre:
            return CheckResult(COUNTEREXAMPLE, visited, budget, a, None, "empty fibre")
        for n in f.target.realizers[a].sample():
            visited += 1
            k, why = _run(s, n, budget)
            if k is False:
                return CheckResult(COUNTEREXAMPLE, visited, budget, a, n, why)
            if k is None:
                pending = pending or (a, n, why)
                continue
            verdicts = [f.source.realizers[b].member(k, budget) for b in fibre]
            if True in verdicts:
                continue
            if None in verdicts:
                pending = pending or (a, n, "membership timeout")
                continue
            return CheckResult(
                COUNTEREXAMPLE, visited, budget, a, n, f"{format_term(k)} realizes nothing over {a!r}"
            )
    if pending is not None:
        return CheckResult(INCONCLUSIVE, visited, budget, *pending)
    return CheckResult(VERIFIED, visited, budget)


def compose_term(r: Term, s: Term) -> Term:
    """``λn. r(s(n))``: tracks ``g ∘ f`` when ``s`` tracks f and ``r`` tracks g."""
    return lam("n", App(r, App(s, Var("n"))))


def pairing_term(r: Term, s: Term) -> Term:
    """``λn. ⟨r n, s n⟩``."""
    n = Var("n")
    return lam("n", App(App(P, App(r, n)), App(s, n)))


def identity(a: Assembly) -> AsmMorphism:
    return AsmMorphism(a, a, {x: x for x in a.carrier}, i_combinator())


def compose(g: AsmMorphism, f: AsmMorphism) -> AsmMorphism:
    """``g ∘ f``; the carriers must match."""
    if f.target is not g.source and tuple(f.target.carrier) != tuple(g.source.carrier):
        raise ValueError("morphisms do not compose")
    return AsmMorphism(
        f.source,
        g.target,
        {b: g.map[f.map[b]] for b in f.source.carrier},
        compose_term(g.tracker, f.tracker),
        max(f.budget, g.budget),
    )


def table_tracker(table: Mapping[int, Term], default: Optional[Term] = None) -> Term:
    """A value sending numeral ``k`` to ``table[k]`` for finitely many ``k``.

    Inputs past the largest key go to ``default`` (or to the last entry).
    """
    if not table:
        return App(K, as_term(default if default is not None else 0))
    top = max(table)
    fallback = as_term(default) if default is not None else as_term(table[top])
    rest = App(K, fallback)
    for k in range(top, -1, -1):
        v = as_term(table[k]) if k in table else fallback
        # λj. IFZ j v rest: on j = 0 answer v, otherwise rest (j - 1)
        rest = abstract("j", App(App(App(IFZ, Var("j")), v), rest), strict=False)
    out = reduce(rest)
    assert isinstance(out, Value)
    return out.term


def search_term(
    accept: Callable[[Term], CheckResult],
    pool: Iterable[Term],
) -> Tuple[Optional[Term], int, int]:
    """First pool member ``t`` with ``accept(t)`` verified.

    Returns ``(term or None, candidates tried, inconclusive count)``.
    """
    tried = undecided = 0
    for t in pool:
        tried += 1
        res = accept(t)
        if res.ok:
            return t, tried, undecided
        if res.outcome == INCONCLUSIVE:
            undecided += 1
    return None, tried, undecided
