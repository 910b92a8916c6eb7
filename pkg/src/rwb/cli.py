"""Command-line front end: ``rwb <command> ...``.

Exit codes: 0 ok (value, verified, realized), 1 malformed input,
2 undefined / counterexample / refuted, 3 timeout / inconclusive / not found.
Every verdict is printed with the pool, fragment and budget it is relative to.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import config
from .assembly import (
    COUNTEREXAMPLE,
    INCONCLUSIVE,
    VERIFIED,
    AsmFile,
    AsmMorphism,
    Assembly,
    CheckResult,
    Derived,
    FiniteSet,
    Full,
    PowerSizeError,
    exponential,
    forall_f,
    image,
    is_covering_square,
    parse_asm_file,
    partitioned_cover,
    partitioned_square,
    pullback,
    standard_display,
    verify_cover,
    weak_power,
    wtype,
)
from .logic import Formula, Implies, Not, ScopeError, desugar, parse_formula
from .pca import (
    App,
    Fix,
    Pool,
    Term,
    Timeout,
    Undefined,
    Value,
    Var,
    candidate_pool,
    format_term,
    i_combinator,
    parse_term,
    reduce,
)
from .sexpr import SExprError
from .suites import suite_library
from .universe import (
    FoundRealizer,
    Fragment,
    FragmentError,
    Realized,
    Refuted,
    UnknownConstant,
    check_force,
    format_tree,
    generate_fragment,
    parse_fragment,
    search_realizer,
    standard_library,
)

__all__ = ["Config", "main", "build_parser", "EXIT_OK", "EXIT_INPUT", "EXIT_NO", "EXIT_UNKNOWN"]

EXIT_OK, EXIT_INPUT, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2, 3

# tracker searches inside constructions use a smaller pool unless told otherwise
CONSTRUCTION_POOL_SIZE = 5

# operand names of each asm operation: assemblies or morphisms in the file
ASM_ARITY = {
    "pullback": ("F", "G"),
    "image": ("F",),
    "forall": ("S", "F"),
    "exp": ("F", "G"),
    "wtype": ("F",),
    "power": ("X",),
    "partition": ("A",),
}


class InputError(Exception):
    """Malformed or unresolvable input; reported with exit code 1."""


@dataclass(frozen=True)
class Config:
    budget: int
    pool_size: Optional[int]
    frag_depth: int
    frag_width: int
    seed: int
    output: str
    model: Optional[str]

    @property
    def records(self) -> bool:
        return self.output == "records"

    def pool(self, default: int, library: Dict[str, Term]) -> Pool:
        size = default if self.pool_size is None else self.pool_size
        return candidate_pool(size, library=library)


# -- output ---------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + str(s).replace('"', "'") + '"'


def show(x) -> str:
    """Carrier elements, trees and terms as compact text."""
    if isinstance(x, Term):
        return format_term(x)
    if isinstance(x, tuple):
        return "(" + " ".join(show(y) for y in x) + ")"
    return str(x)


class Out:
    """Collects output lines so the order never depends on evaluation."""

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.lines: List[str] = []

    def text(self, line: str):
        if not self.cfg.records:
            self.lines.append(line)

    def record(self, kind: str, fields: Sequence[Tuple[str, object]]):
        if self.cfg.records:
            body = " ".join(f"({k} {_field(v)})" for k, v in fields if v is not None)
            self.lines.append(f"({kind} {body})")

    def flush(self):
        if self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")
        sys.stdout.flush()


def _field(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Term):
        return _quote(format_term(v))
    s = show(v) if not isinstance(v, str) else v
    if s and all(c.isalnum() or c in "-_.<=+" for c in s):
        return s
    return _quote(s)


def _describe_set(r) -> str:
    if isinstance(r, Full):
        return "full"
    if isinstance(r, FiniteSet):
        return "{" + " ".join(format_term(m) for m in r.members) + "}"
    if isinstance(r, Derived):
        w = "none" if r.witness is None else format_term(r.witness)
        return f"derived:{r.tag} witness={w}"
    return type(r).__name__


def _emit_assembly(out: Out, label: str, A: Assembly):
    out.text(f"assembly {label}: {len(A)} elements")
    out.record("assembly", [("name", label), ("size", len(A))])
    for x in A.carrier:
        out.text(f"  {show(x)}: {_describe_set(A[x])}")
        out.record("element", [("assembly", label), ("element", show(x)), ("realizers", _describe_set(A[x]))])


def _outcome_code(outcome: str) -> int:
    return {VERIFIED: EXIT_OK, COUNTEREXAMPLE: EXIT_NO, INCONCLUSIVE: EXIT_UNKNOWN}[outcome]


def _emit_check(out: Out, label: str, res: CheckResult, extra: Sequence[Tuple[str, object]] = ()) -> int:
    where = ""
    if res.element is not None:
        where += f" element={show(res.element)}"
    if res.realizer is not None:
        where += f" realizer={format_term(res.realizer)}"
    if res.detail:
        where += f" ({res.detail})"
    tail = " ".join(f"{k}={show(v)}" for k, v in extra)
    out.text(f"{label}: {res.outcome} sample={res.sample_size} budget={res.budget}{where}" + (f" {tail}" if tail else ""))
    out.record(
        "check",
        [("what", label), ("outcome", res.outcome), ("sample", res.sample_size), ("budget", res.budget)]
        + [("element", None if res.element is None else show(res.element))]
        + [("realizer", res.realizer), ("detail", res.detail or None)]
        + list(extra),
    )
    return _outcome_code(res.outcome)


# -- input ----------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _close(t: Term, lib: Dict[str, Term]) -> Term:
    if type(t) is Var:
        if t.name not in lib:
            raise InputError(f"free variable {t.name!r} is not a library term")
        return lib[t.name]
    if type(t) is App:
        return App(_close(t.f, lib), _close(t.x, lib))
    if type(t) is Fix:
        return Fix(_close(t.f, lib))
    return t


def _term(text: str) -> Term:
    """Parse a term; free variables naming library terms (``refl``, ``mp``, ...)
    are replaced by those terms."""
    return _close(parse_term(text), suite_library())


def _asm_file(path: str) -> AsmFile:
    return parse_asm_file(_read(path))


def _lookup(table: Callable, name: Optional[str]):
    try:
        return table(name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None


def _fragment(args, cfg: Config) -> Fragment:
    if getattr(args, "frag", None):
        frag = parse_fragment(_read(args.frag))
        if cfg.model is not None and cfg.model != frag.kind:
            raise InputError(f"--model {cfg.model} but {args.frag} is a {frag.kind}-fragment")
        return frag.with_names({}, label=os.path.basename(args.frag))
    return generate_fragment(cfg.model or "v", cfg.frag_depth, cfg.frag_width)


def _formula(text: str):
    return parse_formula(text, free=())


# -- commands -------------------------------------------------------------------


def cmd_reduce(args, cfg: Config, out: Out) -> int:
    text = _read(args.file) if args.file else args.term
    if text is None:
        raise InputError("reduce needs a term or --file")
    res = reduce(_term(text), cfg.budget)
    if isinstance(res, Value):
        out.text(f"value {format_term(res.term)}, steps={res.steps}")
        out.record("reduce", [("outcome", "value"), ("term", res.term), ("steps", res.steps), ("budget", cfg.budget)])
        return EXIT_OK
    if isinstance(res, Undefined):
        out.text(f"undefined ({res.reason}), steps={res.steps}")
        out.record("reduce", [("outcome", "undefined"), ("reason", res.reason), ("steps", res.steps), ("budget", cfg.budget)])
        return EXIT_NO
    out.text(f"timeout, steps={res.steps}")
    out.record("reduce", [("outcome", "timeout"), ("steps", res.steps), ("budget", cfg.budget)])
    return EXIT_UNKNOWN


def cmd_check(args, cfg: Config, out: Out) -> int:
    if args.kind == "force":
        return _check_force(args, cfg, out)
    f = _asm_file(args.asm_file)
    if args.kind == "track":
        m = _lookup(f.morphism, args.morphism)
        return _emit_check(out, "track", m.check(cfg.budget), [("tracker", m.tracker)])
    if args.kind == "cover":
        m = _lookup(f.morphism, args.morphism)
        w = _term(args.witness)
        return _emit_check(out, "cover", verify_cover(m, w, cfg.budget), [("witness", w)])
    # square
    if args.partitioned:
        d = _display(_lookup(f.morphism, args.partitioned), cfg)
        top, left, right, bottom, wit = partitioned_square(d)
    else:
        names = (args.top, args.left, args.right, args.bottom)
        if None in names or not args.witness_pair:
            raise InputError("check square needs --partitioned M, or --top/--left/--right/--bottom and --witnesses S T")
        top, left, right, bottom = (_lookup(f.morphism, n) for n in names)
        wit = tuple(_term(t) for t in args.witness_pair)
    try:
        res = is_covering_square(top, left, right, bottom, wit, cfg.budget)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return _emit_check(out, "square", res, [("cover-witness", wit[0]), ("bottom-witness", wit[1])])


def _relativity(pool: Optional[Pool], frag: Fragment, cfg: Config) -> List[Tuple[str, object]]:
    return [
        ("pool", pool.describe() if pool is not None else "unused"),
        ("frag", frag.describe()),
        ("model", frag.kind),
        ("budget", cfg.budget),
        ("seed", cfg.seed),
    ]


def _needs_pool(phi) -> bool:
    """Only ``→`` and ``¬`` quantify over the pool."""
    if isinstance(phi, (Implies, Not)):
        return True
    if not dataclasses.is_dataclass(phi):
        return False
    return any(
        _needs_pool(getattr(phi, f.name)) for f in dataclasses.fields(phi) if isinstance(getattr(phi, f.name), Formula)
    )


def _check_force(args, cfg: Config, out: Out) -> int:
    frag = _fragment(args, cfg)
    term = _term(args.term)
    phi = _formula(args.formula)
    val = reduce(term, cfg.budget)
    pool = cfg.pool(config.DEFAULT_POOL_SIZE, standard_library()) if _needs_pool(desugar(phi)) else None
    if not isinstance(val, Value):
        verdict = "timeout" if isinstance(val, Timeout) else "refuted"
        detail = "term has no value"
    else:
        res = check_force(val.term, phi, frag, cfg.budget, pool)
        verdict = "realized" if isinstance(res, Realized) else "refuted" if isinstance(res, Refuted) else "timeout"
        detail = res.reason if isinstance(res, Refuted) else ""
    rel = _relativity(pool, frag, cfg)
    out.text(f"verdict={verdict} " + " ".join(f"{k}={v}" for k, v in rel) + (f" ({detail})" if detail else ""))
    out.record("force", [("verdict", verdict), ("term", args.term), ("formula", args.formula), ("detail", detail or None)] + rel)
    return {"realized": EXIT_OK, "refuted": EXIT_NO}.get(verdict, EXIT_UNKNOWN)


def cmd_search(args, cfg: Config, out: Out) -> int:
    frag = _fragment(args, cfg)
    phi = _formula(args.formula)
    top = config.DEFAULT_POOL_SIZE if cfg.pool_size is None else cfg.pool_size
    # smaller pools are prefixes of larger ones; stop at the first size that succeeds
    sizes = sorted(set(list(range(1, top + 1, 2)) + [top]))
    lib = standard_library()
    for size in sizes:
        pool = candidate_pool(size, library=lib)
        res = search_realizer(phi, frag, pool, cfg.budget)
        if isinstance(res, FoundRealizer):
            break
    rel = _relativity(pool, frag, cfg) + [("relative", res.relative), ("steps", res.steps)]
    if isinstance(res, FoundRealizer):
        verdict, code = "realized", EXIT_OK
        extra = [("witness", res.term), ("index", res.index)]
    else:
        verdict, code = "not-found", EXIT_UNKNOWN
        extra = [("timeouts", res.timeouts)]
    out.text(
        f"verdict={verdict} "
        + " ".join(f"{k}={show(v) if not isinstance(v, bool) else ('yes' if v else 'no')}" for k, v in rel + extra)
    )
    out.record("search", [("verdict", verdict), ("formula", args.formula)] + rel + extra)
    return code


def cmd_frag(args, cfg: Config, out: Out) -> int:
    frag = generate_fragment(cfg.model or "v", cfg.frag_depth, cfg.frag_width)
    out.text(f"fragment model={frag.kind} frag={frag.describe()} size={len(frag)}")
    for i, t in enumerate(frag):
        out.text(f"  t{i} {format_tree(t)}")
    if cfg.records:
        out.lines.append(f"(fragment {frag.kind}")
        out.lines.extend(f"  (t{i} {format_tree(t)})" for i, t in enumerate(frag))
        out.lines[-1] += ")"
    return EXIT_OK


def cmd_suite(args, cfg: Config, out: Out) -> int:
    from .suites import bundled_manifest, parse_manifest, run_suite

    if os.path.exists(args.manifest):
        text = _read(args.manifest)
    else:
        try:
            text = bundled_manifest(args.manifest)
        except FileNotFoundError:
            raise InputError(f"no manifest file or bundled suite named {args.manifest}") from None
    m = parse_manifest(text)
    budget = cfg.budget if args.budget_set else None
    frag = None
    if args.frag:
        frag = _fragment(args, cfg)
    try:
        rep = run_suite(m, frag=frag, budget=budget, pool_size=cfg.pool_size)
    except (UnknownConstant, ValueError) as exc:
        raise InputError(str(exc)) from None
    if cfg.records:
        out.lines.append(rep.render_records())
    else:
        out.lines.append(rep.render())
    return EXIT_OK if rep.ok else EXIT_NO


def _display(m: AsmMorphism, cfg: Config):
    """The morphism's source read as ``(B, β)`` with finite β, displayed over
    its target as ``(B, β[m]) → A``."""
    B = m.source
    for b in B.carrier:
        if not isinstance(B[b], FiniteSet):
            raise InputError(f"display maps need finite realizer sets; {b} has {_describe_set(B[b])}")
    return standard_display(B.carrier, {b: B[b] for b in B.carrier}, m.map, m.target, cfg.budget)


def cmd_asm(args, cfg: Config, out: Out) -> int:
    f = _asm_file(args.asm_file)
    tracker_pool = cfg.pool(CONSTRUCTION_POOL_SIZE, {"I": i_combinator()})
    code = EXIT_OK
    op = args.op
    args.names = [getattr(args, f"name{i}") for i in range(len(ASM_ARITY[op]))]

    def checked(label, m: AsmMorphism):
        nonlocal code
        c = _emit_check(out, label, m.check(cfg.budget), [("tracker", m.tracker)])
        code = max(code, c)

    def pool_note(missing, what):
        nonlocal code
        out.text(f"{what}: pool={tracker_pool.describe()} missing={len(missing)}")
        out.record("pool", [("what", what), ("pool", tracker_pool.describe()), ("missing", len(missing))])
        for e in missing:
            out.text(f"  no tracker in pool for {show(e)}")
            out.record("missing", [("element", show(e))])
        if missing:
            code = max(code, EXIT_UNKNOWN)

    if op == "pullback":
        g1, g2 = _lookup(f.morphism, args.names[0]), _lookup(f.morphism, args.names[1])
        try:
            P, p1, p2 = pullback(g1, g2)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _emit_assembly(out, "pullback", P)
        checked("first", p1)
        checked("second", p2)
    elif op == "image":
        m = _lookup(f.morphism, args.names[0])
        cover, mono = image(m)
        _emit_assembly(out, "image", cover.target)
        checked("cover", cover)
        checked("mono", mono)
        code = max(code, _emit_check(out, "cover-witness", verify_cover(cover, i_combinator(), cfg.budget)))
    elif op == "forall":
        S = _lookup(f.assembly, args.names[0])
        m = _lookup(f.morphism, args.names[1])
        try:
            res = forall_f(S, m, tracker_pool, cfg.budget)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _emit_assembly(out, "forall", res.assembly)
        out.text("classical carrier: " + " ".join(show(a) for a in res.classical))
        out.record("classical", [("carrier", " ".join(show(a) for a in res.classical))])
        checked("inclusion", res.inclusion)
        pool_note(res.truncated, "forall")
    elif op == "exp":
        d = _display(_lookup(f.morphism, args.names[0]), cfg)
        g = _lookup(f.morphism, args.names[1])
        if tuple(g.target.carrier) != tuple(d.base.carrier):
            raise InputError("exp needs two maps into the same assembly")
        res = exponential(d, g, tracker_pool, cfg.budget)
        _emit_assembly(out, "exponential", res.assembly)
        checked("projection", res.projection)
        checked("evaluation", res.evaluation)
        pool_note(res.missing, "exponential")
    elif op == "wtype":
        d = _display(_lookup(f.morphism, args.names[0]), cfg)
        res = wtype(d, args.depth)
        _emit_assembly(out, f"wtype-depth{args.depth}", res.assembly())
        out.text(f"undecorated: {len(res.undecorated)}")
        out.record("undecorated", [("count", len(res.undecorated))])
        for w in res.undecorated:
            out.text(f"  {w}")
            out.record("tree", [("undecorated", str(w))])
    elif op == "power":
        X = _lookup(f.assembly, args.names[0])
        try:
            res = weak_power(X, args.realizers, tracker_pool, cfg.budget)
        except PowerSizeError as exc:
            raise InputError(str(exc)) from None
        _emit_assembly(out, "power", res.assembly)
        _emit_assembly(out, "membership", res.membership)
        pool_note(res.missing, "power")
    elif op == "partition":
        A = _lookup(f.assembly, args.names[0])
        try:
            Q, proj = partitioned_cover(A)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _emit_assembly(out, "partitioned", Q)
        checked("projection", proj)
        code = max(code, _emit_check(out, "cover-witness", verify_cover(proj, i_combinator(), cfg.budget)))
    return code


# -- parser ---------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {n}")
    return n


class _BudgetAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.budget_set = True


class _Parser(argparse.ArgumentParser):
    """Usage errors are malformed input, so they exit 1 rather than 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--budget", type=_positive, action=_BudgetAction, default=None,
                   help=f"step budget per application (default {config.DEFAULT_BUDGET}, env RWB_BUDGET)")
    g.add_argument("--pool-size", type=_natural, default=None,
                   help=f"max candidate term size (default {config.DEFAULT_POOL_SIZE}; "
                        f"{CONSTRUCTION_POOL_SIZE} for tracker searches in asm)")
    g.add_argument("--frag-depth", type=_natural, default=config.DEFAULT_FRAG_DEPTH)
    g.add_argument("--frag-width", type=_natural, default=config.DEFAULT_FRAG_WIDTH)
    g.add_argument("--seed", type=_natural, default=0, help="recorded with results; verdicts never depend on it")
    g.add_argument("--format", choices=("text", "records"), default="text")
    g.add_argument("--model", choices=("v", "u"), default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="rwb", description="Realizability workbench.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="reduce a term")
    p.add_argument("term", nargs="?")
    p.add_argument("-f", "--file")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("check", help="tracking, cover, square and forcing checks")
    kinds = p.add_subparsers(dest="kind", required=True)
    for kind in ("track", "cover", "square"):
        k = kinds.add_parser(kind, parents=[common])
        k.add_argument("asm_file")
        if kind != "square":
            k.add_argument("--morphism", help="name of the morphism (optional for a single one)")
        if kind == "cover":
            k.add_argument("--witness", required=True, help="cover witness term")
        if kind == "square":
            k.add_argument("--partitioned", metavar="M", help="check the partitioned square of the display M")
            for side in ("top", "left", "right", "bottom"):
                k.add_argument(f"--{side}")
            k.add_argument("--witnesses", dest="witness_pair", nargs=2, metavar=("S", "T"))
        k.set_defaults(run=cmd_check)
    k = kinds.add_parser("force", parents=[common])
    k.add_argument("--frag", help="fragment file (default: generated from --frag-depth/--frag-width)")
    k.add_argument("--term", required=True)
    k.add_argument("--formula", required=True)
    k.set_defaults(run=cmd_check)

    p = sub.add_parser("asm", help="categorical constructions on assembly files")
    ops = p.add_subparsers(dest="op", required=True)
    for op, names in ASM_ARITY.items():
        o = ops.add_parser(op, parents=[common])
        o.add_argument("asm_file")
        for i, name in enumerate(names):
            o.add_argument(f"name{i}", metavar=name)
        if op == "wtype":
            o.add_argument("--depth", type=_natural, default=2)
        if op == "power":
            o.add_argument("--realizers", type=_natural, nargs="+", default=[0, 1])
        o.set_defaults(run=cmd_asm)

    p = sub.add_parser("frag", help="fragments")
    fs = p.add_subparsers(dest="frag_op", required=True)
    g = fs.add_parser("gen", parents=[common])
    g.set_defaults(run=cmd_frag)

    p = sub.add_parser("search", parents=[common], help="search the pool for a realizer")
    p.add_argument("--frag")
    p.add_argument("--formula", required=True)
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("suite", parents=[common], help="run a suite manifest")
    p.add_argument("manifest", help="manifest file, or a bundled suite name such as axioms-v")
    p.add_argument("--frag")
    p.set_defaults(run=cmd_suite)
    return parser


def _config(args) -> Config:
    budget = args.budget if args.budget is not None else config.DEFAULT_BUDGET
    return Config(budget, args.pool_size, args.frag_depth, args.frag_width, args.seed, args.format, args.model)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "budget_set"):
        args.budget_set = False
    cfg = _config(args)
    out = Out(cfg)
    try:
        code = args.run(args, cfg, out)
    except (InputError, SExprError, FragmentError, ScopeError, UnknownConstant) as exc:
        out.flush()
        msg = exc.args[0] if isinstance(exc, InputError) else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    out.flush()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
