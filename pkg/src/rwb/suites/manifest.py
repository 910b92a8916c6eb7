"""Suite manifests.

A manifest is one ``(suite NAME ...)`` form::

    (suite axioms-v
      (model v)
      (fragment (generate 1 2) (omega 5) (a (vtree (0 (vtree)))))
      (pool 5) (budget 10000) (library union-fwd union-bwd)
      (case empty-set (formula "(exists x (forall y (not (in y x))))")
                      (expect realized))
      (case up-refl (premise "...") (formula "...") (expect realized)
                    (pool 3) (library omega0) (witness ext))
      (out-of-scope CT "needs internal T and U predicates"))

``witness`` names a library term (or gives a term in term syntax) to check
instead of searching. ``premise`` must be pool-realized for the case to count.
Every section is optional; an empty ``(suite NAME)`` (or an empty file)
has no cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..config import DEFAULT_BUDGET
from ..logic import Formula, FormulaSyntaxError, parse_formula
from ..pca import Term, TermSyntaxError, format_term, term_from_sexpr
from ..sexpr import Atom, SExprError, SList, read_all
from ..universe import (
    Fragment,
    TreeSyntaxError,
    Tree,
    VTree,
    generate_fragment,
    u_encode,
    vn_encode,
)
from ..universe.trees import tree_from_sexpr
from .realizers import suite_library

__all__ = [
    "EXPECTATIONS",
    "ManifestError",
    "Case",
    "FragmentSpec",
    "Manifest",
    "parse_manifest",
]

EXPECTATIONS = ("realized", "not-found", "refuted", "report-only")


class ManifestError(SExprError):
    pass


@dataclass(frozen=True)
class FragmentSpec:
    """How to build the suite's fragment: generated trees plus named ones."""

    depth: int = 0
    width: int = 0
    names: Tuple[Tuple[str, Tree], ...] = ()

    def build(self, kind: str) -> Fragment:
        base = generate_fragment(kind, self.depth, self.width)
        label = f"depth{self.depth}"
        if self.names:
            label += f"+{len(self.names)}named"
        return base.with_names(dict(self.names), label)


@dataclass(frozen=True)
class Case:
    name: str
    formula_text: str
    formula: Formula
    expect: str
    premise_text: Optional[str] = None
    premise: Optional[Formula] = None
    witness: Optional[str] = None
    witness_term: Optional[Term] = None
    pool_size: Optional[int] = None
    library: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class Manifest:
    name: str
    model: str = "v"
    fragment: FragmentSpec = FragmentSpec()
    pool_size: int = 3
    budget: int = DEFAULT_BUDGET
    library: Tuple[str, ...] = ()
    cases: Tuple[Case, ...] = ()
    out_of_scope: Tuple[Tuple[str, str], ...] = field(default=())


def _fail(msg, e):
    raise ManifestError(msg, getattr(e, "pos", 0))


def _nat(e, what) -> int:
    if not isinstance(e, Atom) or not e.isdigit():
        _fail(f"{what} must be a natural number", e)
    return int(e)


def _positive(e, what) -> int:
    n = _nat(e, what)
    if n == 0:
        _fail(f"{what} must be positive", e)
    return n


def _names(items, lib) -> Tuple[str, ...]:
    out = []
    for e in items:
        if not isinstance(e, Atom):
            _fail("library entries are names", e)
        if str(e) not in lib:
            _fail(f"unknown library term {str(e)!r}", e)
        out.append(str(e))
    return tuple(out)


def _formula(e, what):
    if not isinstance(e, Atom):
        _fail(f"{what} must be a quoted formula", e)
    try:
        return str(e), parse_formula(str(e))
    except FormulaSyntaxError as exc:
        # positions inside the string are reported relative to the string
        _fail(f"bad {what}: {exc.message} (offset {exc.pos})", e)


def _fragment(items, kind: str) -> FragmentSpec:
    depth = width = 0
    names: Dict[str, Tree] = {}
    encode = vn_encode if kind == "v" else u_encode
    for item in items:
        if not isinstance(item, SList) or len(item) < 2 or not isinstance(item[0], Atom):
            _fail("expected (generate D W), (omega K) or (name TREE)", item)
        head = str(item[0])
        if head == "generate":
            if len(item) != 3:
                _fail("(generate D W) takes two numbers", item)
            depth, width = _nat(item[1], "depth"), _nat(item[2], "width")
        elif head == "omega":
            if len(item) != 2:
                _fail("(omega K) takes one number", item)
            names["omega"] = encode(_nat(item[1], "omega prefix"))
        else:
            if len(item) != 2:
                _fail("a named tree is (name TREE)", item)
            try:
                t = tree_from_sexpr(item[1])
            except TreeSyntaxError as exc:
                _fail(exc.message, exc)
            if (kind == "v") != isinstance(t, VTree):
                _fail(f"tree kind does not match model {kind}", item[1])
            names[head] = t
    return FragmentSpec(depth, width, tuple(names.items()))


def _case(e, lib) -> Case:
    if len(e) < 2 or not isinstance(e[1], Atom):
        _fail("expected (case NAME ...)", e)
    fields: Dict[str, SList] = {}
    for item in e[2:]:
        if not isinstance(item, SList) or not item or not isinstance(item[0], Atom):
            _fail("expected a (key value) entry", item)
        key = str(item[0])
        if key in fields:
            _fail(f"duplicate {key}", item)
        fields[key] = item
    unknown = set(fields) - {"formula", "expect", "premise", "witness", "pool", "library"}
    if unknown:
        _fail(f"unknown case entry {sorted(unknown)[0]!r}", fields[sorted(unknown)[0]])
    if "formula" not in fields or len(fields["formula"]) != 2:
        _fail(f"case {e[1]} needs (formula \"...\")", e)
    text, phi = _formula(fields["formula"][1], "formula")
    expect = "report-only"
    if "expect" in fields:
        item = fields["expect"]
        if len(item) != 2 or str(item[1]) not in EXPECTATIONS:
            _fail(f"expect must be one of {', '.join(EXPECTATIONS)}", item)
        expect = str(item[1])
    ptext = prem = None
    if "premise" in fields:
        ptext, prem = _formula(fields["premise"][1], "premise")
    wname = wterm = None
    if "witness" in fields:
        w = fields["witness"]
        if len(w) != 2:
            _fail("(witness TERM) takes one term", w)
        if isinstance(w[1], Atom) and str(w[1]) in lib:
            wname, wterm = str(w[1]), lib[str(w[1])]
        else:
            try:
                wterm = term_from_sexpr(w[1])
            except TermSyntaxError as exc:
                _fail(exc.message, exc)
            wname = format_term(wterm)
    size = _nat(fields["pool"][1], "pool size") if "pool" in fields else None
    library = _names(fields["library"][1:], lib) if "library" in fields else None
    return Case(str(e[1]), text, phi, expect, ptext, prem, wname, wterm, size, library)


def parse_manifest(text: str) -> Manifest:
    """Parse a manifest; raises :class:`ManifestError` with a position."""
    try:
        exprs = read_all(text)
    except SExprError as exc:
        raise ManifestError(exc.message, exc.pos) from None
    if not exprs:
        return Manifest("empty")
    if len(exprs) != 1:
        raise ManifestError("a manifest holds exactly one (suite ...) form", 0)
    e = exprs[0]
    if not isinstance(e, SList) or len(e) < 2 or e[0] != "suite" or not isinstance(e[1], Atom):
        _fail("expected (suite NAME ...)", e)
    lib = suite_library()
    model, frag_items = "v", []
    pool_size, budget, library = 3, DEFAULT_BUDGET, ()
    cases: List[Case] = []
    oos: List[Tuple[str, str]] = []
    for item in e[2:]:
        if not isinstance(item, SList) or not item or not isinstance(item[0], Atom):
            _fail("expected a (section ...) form", item)
        head = str(item[0])
        if head == "model":
            if len(item) != 2 or item[1] not in ("v", "u"):
                _fail("model must be v or u", item)
            model = str(item[1])
        elif head == "fragment":
            frag_items = item[1:]
        elif head == "pool":
            pool_size = _nat(item[1] if len(item) > 1 else item, "pool size")
        elif head == "budget":
            budget = _positive(item[1] if len(item) > 1 else item, "budget")
        elif head == "library":
            library = _names(item[1:], lib)
        elif head == "case":
            cases.append(_case(item, lib))
        elif head == "out-of-scope":
            if len(item) != 3:
                _fail("(out-of-scope NAME \"reason\")", item)
            oos.append((str(item[1]), str(item[2])))
        else:
            _fail(f"unknown section {head!r}", item)
    seen = set()
    for c in cases:
        if c.name in seen:
            raise ManifestError(f"duplicate case {c.name!r}", 0)
        seen.add(c.name)
    frag = _fragment(frag_items, model)
    return Manifest(str(e[1]), model, frag, pool_size, budget, library, tuple(cases), tuple(oos))
