"""S-expression files of assemblies and morphisms.

    (assembly A (elems a b) (real (a 0 1) (b full)))
    (morphism f A B (map (a x) (b y)) (tracker (app (app S K) K)))

Realizers are naturals, ``full`` or term s-expressions. The names ``A``
and ``f`` are optional for a file holding a single assembly or morphism;
a morphism may also give its source and target inline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from ..pca import Num, TermSyntaxError, format_term, is_value, term_from_sexpr
from ..sexpr import Atom, SExprError, SList, read_all
from .core import Assembly, AsmMorphism, mk_assembly
from .realizer_sets import EmptyRealizerSet, FiniteSet, Full

__all__ = ["AsmFile", "AsmSyntaxError", "parse_asm_file", "format_assembly", "format_morphism"]


class AsmSyntaxError(SExprError):
    pass


@dataclass
class AsmFile:
    assemblies: Dict[str, Assembly] = field(default_factory=dict)
    morphisms: Dict[str, AsmMorphism] = field(default_factory=dict)

    def assembly(self, name: Optional[str] = None) -> Assembly:
        return _pick(self.assemblies, name, "assembly")

    def morphism(self, name: Optional[str] = None) -> AsmMorphism:
        return _pick(self.morphisms, name, "morphism")


def _pick(table, name, what):
    if name is not None:
        if name not in table:
            raise KeyError(f"no {what} named {name}")
        return table[name]
    if len(table) != 1:
        raise KeyError(f"expected exactly one {what}, found {len(table)}")
    return next(iter(table.values()))


def _elem(e):
    if not isinstance(e, Atom):
        raise AsmSyntaxError("carrier elements are bare names", e.pos)
    return str(e)


def _realizer(e):
    if isinstance(e, Atom) and e.isdigit():
        return int(e)
    try:
        t = term_from_sexpr(e)
    except TermSyntaxError as exc:
        raise AsmSyntaxError(exc.message, exc.pos) from None
    if not is_value(t):
        raise AsmSyntaxError(f"realizers are closed values, got {format_term(t)}", getattr(e, "pos", 0))
    return t


def _section(e: SList, head: str):
    found = [x for x in e if isinstance(x, SList) and x and x[0] == head]
    if len(found) != 1:
        raise AsmSyntaxError(f"expected one ({head} ...) section", e.pos)
    return found[0]


def _assembly(e: SList) -> Assembly:
    elems = [_elem(x) for x in _section(e, "elems")[1:]]
    real = {}
    for item in _section(e, "real")[1:]:
        if not isinstance(item, SList) or len(item) < 2:
            raise AsmSyntaxError("expected (element realizer ...)", getattr(item, "pos", e.pos))
        x = _elem(item[0])
        if len(item) == 2 and item[1] == "full":
            real[x] = Full()
        else:
            real[x] = FiniteSet(_realizer(r) for r in item[1:])
    try:
        return mk_assembly(elems, real)
    except EmptyRealizerSet as exc:
        raise AsmSyntaxError(str(exc), e.pos) from None
    except ValueError as exc:
        raise AsmSyntaxError(str(exc), e.pos) from None


def _is_section(e) -> bool:
    return isinstance(e, SList) and bool(e) and e[0] in ("map", "tracker")


def _resolve(e, out: AsmFile) -> Assembly:
    if isinstance(e, Atom):
        if str(e) not in out.assemblies:
            raise AsmSyntaxError(f"unknown assembly {str(e)!r}", e.pos)
        return out.assemblies[str(e)]
    if isinstance(e, SList) and e and e[0] == "assembly":
        return _assembly(e)
    raise AsmSyntaxError("expected an assembly name or form", e.pos)


def parse_asm_file(text: str) -> AsmFile:
    try:
        forms = read_all(text)
    except SExprError as exc:
        raise AsmSyntaxError(exc.message, exc.pos) from None
    out = AsmFile()
    for e in forms:
        if not isinstance(e, SList) or not e or not isinstance(e[0], Atom):
            raise AsmSyntaxError("expected (assembly ...) or (morphism ...)", e.pos)
        head = e[0]
        if head == "assembly":
            name = str(e[1]) if len(e) > 1 and isinstance(e[1], Atom) else f"_{len(out.assemblies)}"
            out.assemblies[name] = _assembly(e)
        elif head == "morphism":
            args = list(e[1:])
            lead = 0
            while lead < len(args) and not _is_section(args[lead]):
                lead += 1
            if lead == 3 and isinstance(args[0], Atom):
                name, args = str(args[0]), args[1:]
            elif lead != 2:
                raise AsmSyntaxError("(morphism [name] src dst (map ...) (tracker t))", e.pos)
            else:
                name = f"_{len(out.morphisms)}"
            src, dst = _resolve(args[0], out), _resolve(args[1], out)
            rest = SList(args[2:], e.pos)
            mapping = {}
            for item in _section(rest, "map")[1:]:
                if not isinstance(item, SList) or len(item) != 2:
                    raise AsmSyntaxError("expected (element image)", getattr(item, "pos", e.pos))
                mapping[_elem(item[0])] = _elem(item[1])
            tr = _section(rest, "tracker")
            if len(tr) != 2:
                raise AsmSyntaxError("(tracker t) needs one term", tr.pos)
            tracker = _realizer(tr[1])
            if isinstance(tracker, int):
                tracker = Num(tracker)
            try:
                out.morphisms[name] = AsmMorphism(src, dst, mapping, tracker)
            except ValueError as exc:
                raise AsmSyntaxError(str(exc), e.pos) from None
        else:
            raise AsmSyntaxError(f"unknown form {str(head)!r}", e.pos)
    return out


def format_assembly(a: Assembly, name: str = "") -> str:
    elems = " ".join(str(x) for x in a.carrier)
    parts = []
    for x in a.carrier:
        r = a[x]
        if isinstance(r, Full):
            parts.append(f"({x} full)")
        elif isinstance(r, FiniteSet):
            parts.append(f"({x} " + " ".join(format_term(m) for m in r.members) + ")")
        else:
            raise ValueError(f"realizers of {x!r} are derived and have no file form")
    head = f"(assembly {name} " if name else "(assembly "
    return head + f"(elems {elems}) (real {' '.join(parts)}))"


def format_morphism(m: AsmMorphism, src: str, dst: str, name: str = "") -> str:
    pairs = " ".join(f"({b} {m.map[b]})" for b in m.source.carrier)
    head = f"(morphism {name} " if name else "(morphism "
    return head + f"{src} {dst} (map {pairs}) (tracker {format_term(m.tracker)}))"
