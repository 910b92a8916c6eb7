"""Run suite manifests and collect reports."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Tuple

from ..pca import App, Num, Pool, Term, Value, candidate_pool, format_term, proj0, reduce
from ..universe import (
    FoundRealizer,
    Fragment,
    Realized,
    Refuted,
    check_force,
    search_realizer,
    standard_library,
)
from .manifest import Case, Manifest, parse_manifest
from .realizers import mp_decider, mp_searcher, suite_library

__all__ = [
    "CaseRecord",
    "SuiteReport",
    "run_suite",
    "bundled_manifest",
    "run_bundled",
    "run_axiom_instances",
    "run_principles",
    "markov_search_index",
]


@dataclass(frozen=True)
class CaseRecord:
    """One case's outcome, with everything needed to re-run it."""

    suite: str
    case: str
    formula: str
    expect: str
    verdict: str
    witness: Optional[str]
    witness_index: Optional[int]
    budget: int
    pool: str
    pool_size: int
    fragment: str
    relative: bool
    premise: Optional[str] = None
    premise_verdict: Optional[str] = None
    reverified: Optional[bool] = None

    @property
    def matched(self) -> bool:
        return self.expect == "report-only" or self.expect == self.verdict

    def line(self) -> str:
        status = "ok" if self.matched else "MISMATCH"
        parts = [
            f"case {self.case}",
            f"verdict={self.verdict}",
            f"expect={self.expect}",
            status,
            f"pool={self.pool}",
            f"frag={self.fragment}",
            f"budget={self.budget}",
            f"relative={'yes' if self.relative else 'no'}",
        ]
        if self.premise_verdict is not None:
            parts.append(f"premise={self.premise_verdict}")
        if self.witness_index is not None:
            parts.append(f"index={self.witness_index}")
        return " ".join(parts)

    def record(self) -> str:
        def q(s):
            return '"' + s + '"'

        fields = [
            ("suite", self.suite),
            ("case", self.case),
            ("formula", q(self.formula)),
            ("expect", self.expect),
            ("verdict", self.verdict),
            ("matched", "yes" if self.matched else "no"),
            ("budget", str(self.budget)),
            ("pool", self.pool),
            ("pool-terms", str(self.pool_size)),
            ("frag", self.fragment),
            ("relative", "yes" if self.relative else "no"),
        ]
        if self.premise is not None:
            fields += [("premise", q(self.premise)), ("premise-verdict", self.premise_verdict)]
        if self.witness is not None:
            fields.append(("witness", q(self.witness)))
        if self.witness_index is not None:
            fields.append(("index", str(self.witness_index)))
        if self.reverified is not None:
            fields.append(("reverified", "yes" if self.reverified else "no"))
        return "(record " + " ".join(f"({k} {v})" for k, v in fields) + ")"


@dataclass(frozen=True)
class SuiteReport:
    name: str
    model: str
    records: Tuple[CaseRecord, ...]
    out_of_scope: Tuple[Tuple[str, str], ...]

    @property
    def passed(self) -> int:
        return sum(r.matched for r in self.records)

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return f"{self.passed}/{self.failed}/{len(self.out_of_scope)}"

    def record(self, case: str) -> CaseRecord:
        for r in self.records:
            if r.case == case:
                return r
        raise KeyError(case)

    def render(self) -> str:
        lines = [f"suite {self.name} model={self.model}"]
        lines += [r.line() for r in self.records]
        lines += [f"out-of-scope {n}: {why}" for n, why in self.out_of_scope]
        lines.append(f"summary passed/failed/out-of-scope = {self.summary()}")
        return "\n".join(lines)

    def render_records(self) -> str:
        lines = [r.record() for r in self.records]
        lines += [f'(out-of-scope (suite {self.name}) (name {n}) (reason "{why}"))' for n, why in self.out_of_scope]
        lines.append(f"(summary (suite {self.name}) (passed {self.passed}) (failed {self.failed}) "
                     f"(out-of-scope {len(self.out_of_scope)}))")
        return "\n".join(lines)


def _case_pool(m: Manifest, c: Case, lib: Dict[str, Term], size: Optional[int]) -> Pool:
    names = list(m.library) + [n for n in (c.library or ()) if n not in m.library]
    library = dict(standard_library())
    library.update({n: lib[n] for n in names})
    if size is None:
        size = c.pool_size if c.pool_size is not None else m.pool_size
    return candidate_pool(size, library=library)


def _search_verdict(res) -> str:
    if isinstance(res, FoundRealizer):
        return "realized"
    return "refuted" if res.timeouts == 0 else "not-found"


def _force_verdict(out) -> str:
    if isinstance(out, Realized):
        return "realized"
    if isinstance(out, Refuted):
        return "refuted"
    return "not-found"


def _run_case(
    m: Manifest, c: Case, frag: Fragment, pool: Pool, budget: int
) -> CaseRecord:
    base = dict(
        suite=m.name,
        case=c.name,
        formula=c.formula_text,
        expect=c.expect,
        budget=budget,
        pool=pool.describe(),
        pool_size=len(pool),
        fragment=frag.describe(),
        premise=c.premise_text,
    )
    premise_verdict = None
    if c.premise is not None:
        pres = search_realizer(c.premise, frag, pool, budget)
        premise_verdict = _search_verdict(pres)
        if premise_verdict != "realized":
            # the case only speaks when its premise holds in the pool
            return CaseRecord(
                verdict="vacuous", witness=None, witness_index=None, relative=True,
                premise_verdict=premise_verdict, **base
            )
    if c.witness_term is not None:
        w = reduce(c.witness_term, budget)
        if not isinstance(w, Value):
            verdict, term, index, relative = "not-found", None, None, True
        else:
            term, index = w.term, None
            verdict = _force_verdict(check_force(term, c.formula, frag, budget, pool))
            relative = True
    else:
        res = search_realizer(c.formula, frag, pool, budget)
        verdict = _search_verdict(res)
        relative = res.relative
        term = res.term if isinstance(res, FoundRealizer) else None
        index = res.index if isinstance(res, FoundRealizer) else None
    reverified = None
    if verdict == "realized":
        again = check_force(term, c.formula, frag, 2 * budget, pool)
        reverified = isinstance(again, Realized)
        if not reverified:
            verdict = "unverified"
    return CaseRecord(
        verdict=verdict,
        witness=format_term(term) if term is not None else None,
        witness_index=index,
        relative=relative,
        premise_verdict=premise_verdict,
        reverified=reverified,
        **base,
    )


def run_suite(
    manifest: Manifest,
    frag: Optional[Fragment] = None,
    pool: Optional[Pool] = None,
    budget: Optional[int] = None,
    pool_size: Optional[int] = None,
) -> SuiteReport:
    """Run every case in manifest order.

    ``frag``, ``pool`` and ``budget`` override the manifest; a given
    ``pool`` replaces every per-case pool, ``pool_size`` only the sizes.
    """
    if frag is None:
        frag = manifest.fragment.build(manifest.model)
    elif frag.kind != manifest.model:
        raise ValueError(f"suite {manifest.name} is for model {manifest.model}, fragment is {frag.kind}")
    budget = manifest.budget if budget is None else budget
    lib = suite_library()
    records: List[CaseRecord] = []
    for c in manifest.cases:
        p = pool if pool is not None else _case_pool(manifest, c, lib, pool_size)
        records.append(_run_case(manifest, c, frag, p, budget))
    return SuiteReport(manifest.name, manifest.model, tuple(records), manifest.out_of_scope)


def bundled_manifest(name: str) -> str:
    """Text of a bundled ``.suite`` file, e.g. ``"axioms-v"``."""
    path = resources.files("rwb.suites").joinpath("data", f"{name}.suite")
    if not path.is_file():
        raise FileNotFoundError(f"no bundled suite {name!r}")
    return path.read_text(encoding="utf-8")


def run_bundled(name: str, **overrides) -> SuiteReport:
    return run_suite(parse_manifest(bundled_manifest(name)), **overrides)


def run_axiom_instances(
    kind: str = "v",
    frag: Optional[Fragment] = None,
    pool: Optional[Pool] = None,
    budget: Optional[int] = None,
) -> SuiteReport:
    """Empty set, Pairing, Union and Extensionality instances."""
    return run_bundled(f"axioms-{kind}", frag=frag, pool=pool, budget=budget)


def run_principles(
    kind: str = "v",
    frag: Optional[Fragment] = None,
    pool: Optional[Pool] = None,
    budget: Optional[int] = None,
) -> SuiteReport:
    """Uniformity and Markov instances, with the excluded principles listed."""
    return run_bundled(f"principles-{kind}", frag=frag, pool=pool, budget=budget)


def markov_search_index(threshold: int = 2, budget: int = 10**5) -> Optional[int]:
    """Run the fix-based searcher against the decider for ``vn(threshold-1) ε n``
    and return the numeral it stops at (``None`` if it does not halt)."""
    out = reduce(App(App(mp_searcher(), mp_decider(threshold)), Num(0)), budget)
    if not isinstance(out, Value):
        return None
    first = proj0(out.term, budget)
    k = proj0(first.term, budget) if isinstance(first, Value) else None
    if isinstance(k, Value) and isinstance(k.term, Num):
        return k.term.k
    return None
