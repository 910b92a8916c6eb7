"""The forcing checker: realizability clauses for V (McCarty) and U.

Verdicts are three-valued. A clause that needs a reduction which runs out of
budget yields :class:`Timeout` unless the other evidence already settles it
(strong Kleene: one refuted conjunct refutes, one realized disjunct realizes).
Because reductions are budget-monotone, Realized and Refuted never flip as the
budget grows.

Desk-scale readings:

* ``∃x`` / ``∀x`` range over the fragment's elements;
* ``φ → ψ`` and ``¬φ`` range over the pool members that realize ``φ``.
  Any verdict that passed through one of these is marked pool-relative.

Pool members whose check against ``φ`` times out (typically divergent
recursive values) are by default *discarded*, i.e. treated as non-realizers
and counted in ``Forcing.discarded``. With ``strict=True`` they keep the
strong-Kleene reading instead and make the clause time out unless the
consequent holds for them anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .. import config
from ..logic import (
    And,
    BoundedExists,
    BoundedForall,
    Constant,
    Equality,
    Exists,
    Falsum,
    Forall,
    Formula,
    Implies,
    Membership,
    Not,
    Or,
    Variable,
    desugar,
    format_formula,
    free_variables,
)
from ..pca import Num, Term, Timeout as ReductionTimeout, Undefined, Value, apply, proj0, proj1
from ..pca.pool import Pool, candidate_pool
from ..pca.syntax import format_term
from .fragment import Fragment, UnknownConstant
from .realizers import standard_library
from .trees import Tree, UTree

__all__ = [
    "Realized",
    "Refuted",
    "Timeout",
    "ForceOutcome",
    "REALIZED",
    "TIMEOUT",
    "Forcing",
    "check_force",
    "is_tree_realizer",
    "search_realizer",
    "FoundRealizer",
    "NotFoundWithinPool",
    "default_pool",
]


@dataclass(frozen=True)
class Realized:
    def __str__(self):
        return "realized"


@dataclass(frozen=True)
class Refuted:
    reason: str
    path: Tuple[str, ...] = ()

    def __str__(self):
        where = "/".join(self.path)
        return f"refuted ({self.reason}{' at ' + where if where else ''})"

    def under(self, step: str) -> "Refuted":
        return Refuted(self.reason, (step,) + self.path)


@dataclass(frozen=True)
class Timeout:
    def __str__(self):
        return "timeout"


ForceOutcome = Union[Realized, Refuted, Timeout]
REALIZED = Realized()
TIMEOUT = Timeout()


def _under(step: str, out: ForceOutcome) -> ForceOutcome:
    return out.under(step) if type(out) is Refuted else out


def _all(outcomes: Iterable[ForceOutcome]) -> ForceOutcome:
    pending = False
    for out in outcomes:
        t = type(out)
        if t is Refuted:
            return out
        if t is Timeout:
            pending = True
    return TIMEOUT if pending else REALIZED


def _any(outcomes: Iterable[ForceOutcome], empty: str) -> ForceOutcome:
    pending = False
    first = None
    for out in outcomes:
        t = type(out)
        if t is Realized:
            return out
        if t is Timeout:
            pending = True
        elif first is None:
            first = out
    if pending:
        return TIMEOUT
    return first if first is not None else Refuted(empty)


def default_pool(max_size: Optional[int] = None, extra: Optional[Dict[str, Term]] = None) -> Pool:
    library = standard_library()
    library.update(extra or {})
    return candidate_pool(config.DEFAULT_POOL_SIZE if max_size is None else max_size, library)


Env = Dict[str, Tree]


class Forcing:
    """Checker state for one (fragment, pool, budget): memo tables and counters.

    ``relative`` records whether any verdict so far went through a
    pool-quantified clause; ``steps`` sums the reduction steps spent.
    """

    def __init__(
        self,
        frag: Fragment,
        pool: Optional[Pool] = None,
        budget: Optional[int] = None,
        strict: bool = False,
    ):
        self.frag = frag
        self.pool = pool
        self.budget = config.DEFAULT_BUDGET if budget is None else budget
        self.strict = strict
        self.relative = False
        self.steps = 0
        self.discarded = 0
        self._atomic: Dict[tuple, ForceOutcome] = {}
        self._realizers: Dict[tuple, Tuple[List[Term], List[Term]]] = {}
        self._u = frag.kind == "u"

    # -- reductions -----------------------------------------------------------

    def _app(self, f: Term, x: Term):
        out = apply(f, x, self.budget)
        self.steps += out.steps
        return out

    def _proj(self, which, n: Term):
        out = (proj0 if which == 0 else proj1)(n, self.budget)
        self.steps += out.steps
        return out

    def _get(self, out, what: str):
        """Value term, or the outcome explaining why there is none."""
        if type(out) is Value:
            return out.term, None
        if type(out) is ReductionTimeout:
            return None, TIMEOUT
        return None, Refuted(f"{what} undefined")

    # -- atomic clauses -------------------------------------------------------

    def member(self, n: Term, x: Tree, w: Tree) -> ForceOutcome:
        """``n ⊩ x ε w``: ``n0`` is the label of an edge ``(m, v)`` of ``w``
        and ``n1 ⊩ x = v``."""
        key = ("in", n, x, w)
        hit = self._atomic.get(key)
        if hit is not None:
            return hit
        out = self._member(n, x, w)
        self._atomic[key] = out
        return out

    def _member(self, n, x, w):
        if not w.edges:
            return Refuted("no edge to match")
        n0, bad = self._get(self._proj(0, n), "n0")
        if bad is not None:
            return bad
        if type(n0) is not Num:
            return Refuted("n0 is not a numeral")
        if self._u:
            child = w.get(n0.k)
            children = [child] if child is not None else []
        else:
            children = [v for m, v in w.edges if m == n0.k]
        if not children:
            return Refuted(f"no edge labelled {n0.k}")
        n1, bad = self._get(self._proj(1, n), "n1")
        if bad is not None:
            return bad
        return _under(f"edge {n0.k}", _any((self.equal(n1, x, v) for v in children), "no child"))

    def equal(self, n: Term, w: Tree, w2: Tree) -> ForceOutcome:
        """``n ⊩ w = w2``: ``n0`` sends each edge of ``w`` to a realizer of the
        child's membership in ``w2``, and ``n1`` does the same the other way."""
        key = ("eq", n, w, w2)
        hit = self._atomic.get(key)
        if hit is not None:
            return hit
        out = _all(
            [
                _under("left", self._half(0, n, w, w2)),
                _under("right", self._half(1, n, w2, w)),
            ]
        )
        self._atomic[key] = out
        return out

    def _half(self, which, n, w, other):
        # vacuous when w has no edges; the projection is only needed otherwise
        if not w.edges:
            return REALIZED
        side, bad = self._get(self._proj(which, n), f"n{which}")
        if bad is not None:
            return bad
        return _all(self._edge(side, m, v, other) for m, v in w.edges)

    def _edge(self, side, m, v, other):
        k, bad = self._get(self._app(side, Num(m)), f"n{m}")
        if bad is not None:
            return _under(f"edge {m}", bad)
        return _under(f"edge {m}", self.member(k, v, other))

    # -- formulas ---------------------------------------------------------------

    def resolve(self, ref, env: Env) -> Tree:
        if isinstance(ref, Constant):
            return self.frag.lookup(ref.name)
        try:
            return env[ref.name]
        except KeyError:
            raise ValueError(f"free variable {ref.name!r} in a checked formula") from None

    def force(self, n: Term, phi: Formula, env: Optional[Env] = None) -> ForceOutcome:
        """``n ⊩ φ`` under ``env``; bounded quantifiers use their definitions."""
        return self._force(n, desugar(phi), dict(env or {}))

    def _force(self, n: Term, phi: Formula, env: Env) -> ForceOutcome:
        t = type(phi)
        if t is Membership:
            return self.member(n, self.resolve(phi.lhs, env), self.resolve(phi.rhs, env))
        if t is Equality:
            return self.equal(n, self.resolve(phi.lhs, env), self.resolve(phi.rhs, env))
        if t is Falsum:
            return Refuted("false has no realizers")
        if t is And:
            n0, bad = self._get(self._proj(0, n), "n0")
            if bad is not None:
                return _under("and", bad)
            n1, bad = self._get(self._proj(1, n), "n1")
            if bad is not None:
                return _under("and", bad)
            return _all(
                [
                    _under("and.0", self._force(n0, phi.left, env)),
                    _under("and.1", self._force(n1, phi.right, env)),
                ]
            )
        if t is Or:
            tag, bad = self._get(self._proj(0, n), "n0")
            if bad is not None:
                return _under("or", bad)
            if tag == Num(0) or tag == Num(1):
                m, bad = self._get(self._proj(1, n), "n1")
                if bad is not None:
                    return _under("or", bad)
                side = phi.left if tag.k == 0 else phi.right
                return _under(f"or.{tag.k}", self._force(m, side, env))
            return Refuted("disjunction tag is not 0 or 1", ("or",))
        if t is Implies:
            return _under("imp", self._implies(n, phi, env))
        if t is Not:
            self.relative = True
            yes, unknown = self.realizers(phi.body, env)
            if yes:
                return Refuted(f"pool member {format_term(yes[0])} realizes the body", ("not",))
            return TIMEOUT if unknown and self.strict else REALIZED
        if t is Exists:
            return _any(
                (self._force(n, phi.body, {**env, phi.var: a}) for a in self.frag.elements),
                f"no witness for {phi.var} in the fragment",
            )
        if t is Forall:
            return _all(
                _under(f"{phi.var}={self.frag.name_of(a)}", self._force(n, phi.body, {**env, phi.var: a}))
                for a in self.frag.elements
            )
        if t in (BoundedExists, BoundedForall):
            return self._force(n, desugar(phi), env)
        raise TypeError(phi)

    def _implies(self, n, phi, env):
        self.relative = True
        yes, unknown = self.realizers(phi.left, env)

        def consequent(m):
            k, bad = self._get(self._app(n, m), "n(m)")
            if bad is not None:
                return bad
            return self._force(k, phi.right, env)

        pending = False
        for m in yes:
            out = consequent(m)
            if type(out) is Refuted:
                return out.under(f"m={format_term(m)}")
            pending = pending or type(out) is Timeout
        for m in unknown if self.strict else ():
            # antecedent undecided: only a realized consequent settles it
            pending = pending or type(consequent(m)) is not Realized
        return TIMEOUT if pending else REALIZED

    def realizers(self, phi: Formula, env: Env) -> Tuple[List[Term], List[Term]]:
        """Pool members realizing ``φ`` and those whose check timed out."""
        if self.pool is None:
            self.pool = default_pool()
        fv = sorted(free_variables(phi))
        key = (phi, tuple((v, env[v]) for v in fv))
        hit = self._realizers.get(key)
        if hit is not None:
            return hit
        yes, unknown = [], []
        sub = {v: env[v] for v in fv}
        for m in self.pool:
            out = self._force(m, phi, sub)
            if type(out) is Realized:
                yes.append(m)
            elif type(out) is Timeout:
                unknown.append(m)
        self.discarded += 0 if self.strict else len(unknown)
        self._realizers[key] = (yes, unknown)
        return yes, unknown


def check_force(
    n: Term,
    phi: Formula,
    frag: Fragment,
    budget: Optional[int] = None,
    pool: Optional[Pool] = None,
    strict: bool = False,
) -> ForceOutcome:
    """``n ⊩ φ`` over ``frag``; ``φ`` must be closed once constants resolve."""
    extra = free_variables(phi)
    if extra:
        raise ValueError(f"formula has free variables {sorted(extra)}")
    return Forcing(frag, pool, budget, strict).force(n, phi)


def is_tree_realizer(n: Term, w: Tree, budget: Optional[int] = None, mode: str = "v") -> ForceOutcome:
    """Realizers of a tree.

    ``mode="v"``: for every edge ``(m, v)``, ``n(m)`` is defined and realizes
    ``v``. ``mode="pair"``: the decoration clause of the W-type over the
    representation, ``n0 = 0`` (the uniform base realizer) and ``n1(m)``
    realizes ``v`` for every edge ``(m, v)``.
    """
    budget = config.DEFAULT_BUDGET if budget is None else budget
    memo: Dict[tuple, ForceOutcome] = {}

    def get(out, what):
        if type(out) is Value:
            return out.term, None
        if type(out) is ReductionTimeout:
            return None, TIMEOUT
        return None, Refuted(f"{what} undefined")

    def go(n, w):
        key = (n, w)
        if key in memo:
            return memo[key]
        if mode == "pair":
            n0, bad = get(proj0(n, budget), "n0")
            if bad is not None:
                memo[key] = bad
                return bad
            if n0 != Num(0):
                memo[key] = Refuted("n0 is not the base realizer 0")
                return memo[key]
            if w.edges:
                f, bad = get(proj1(n, budget), "n1")
                if bad is not None:
                    memo[key] = bad
                    return bad
            else:
                f = None
        elif mode == "v":
            f = n
        else:
            raise ValueError(f"mode must be 'v' or 'pair', got {mode!r}")
        outs = []
        for m, v in w.edges:
            k, bad = get(apply(f, Num(m), budget), f"n({m})")
            outs.append(_under(f"edge {m}", bad if bad is not None else go(k, v)))
            if type(outs[-1]) is Refuted:
                break
        memo[key] = _all(outs)
        return memo[key]

    return go(n, w)


@dataclass(frozen=True)
class FoundRealizer:
    term: Term
    index: int
    pool_size: int
    steps: int
    relative: bool


@dataclass(frozen=True)
class NotFoundWithinPool:
    pool_size: int
    timeouts: int
    steps: int
    relative: bool


def search_realizer(
    phi: Formula,
    frag: Fragment,
    pool: Optional[Pool] = None,
    budget: Optional[int] = None,
    checker: Optional[Forcing] = None,
) -> Union[FoundRealizer, NotFoundWithinPool]:
    """First pool member (in pool order) realizing the closed formula ``φ``.

    Not finding one says nothing beyond the pool.
    """
    extra = free_variables(phi)
    if extra:
        raise ValueError(f"formula has free variables {sorted(extra)}")
    chk = checker or Forcing(frag, pool, budget)
    if chk.pool is None:
        chk.pool = default_pool()
    phi = desugar(phi)
    timeouts = 0
    for i, m in enumerate(chk.pool):
        out = chk.force(m, phi)
        if type(out) is Realized:
            return FoundRealizer(m, i, len(chk.pool), chk.steps, chk.relative)
        if type(out) is Timeout:
            timeouts += 1
    return NotFoundWithinPool(len(chk.pool), timeouts, chk.steps, chk.relative)
