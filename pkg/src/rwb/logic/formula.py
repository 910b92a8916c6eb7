"""First-order formulas over one binary relation symbol ``in`` (plus equality).

Term positions hold either a :class:`Variable` or a :class:`Constant`; a
constant names a universe element by a stable identifier and never embeds the
element itself.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Union

from ..sexpr import Atom, SExprError, read

__all__ = [
    "Variable",
    "Constant",
    "Ref",
    "Formula",
    "Membership",
    "Equality",
    "Falsum",
    "And",
    "Or",
    "Implies",
    "Not",
    "Exists",
    "Forall",
    "BoundedExists",
    "BoundedForall",
    "iff",
    "parse_formula",
    "format_formula",
    "free_variables",
    "constants",
    "is_bounded",
    "desugar",
    "substitute",
    "FormulaSyntaxError",
    "ScopeError",
    "NotFreeWarning",
]


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Constant:
    name: str


Ref = Union[Variable, Constant]


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Membership(Formula):
    lhs: Ref
    rhs: Ref


@dataclass(frozen=True)
class Equality(Formula):
    lhs: Ref
    rhs: Ref


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    # primitive: realized by anything iff nothing realizes the body
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BoundedExists(Formula):
    var: str
    bound: Ref
    body: Formula


@dataclass(frozen=True)
class BoundedForall(Formula):
    var: str
    bound: Ref
    body: Formula


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


class FormulaSyntaxError(SExprError):
    pass


class ScopeError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class NotFreeWarning(UserWarning):
    """Substitution target is not free; the formula is returned unchanged."""


_BINARY = {"and": And, "or": Or, "imp": Implies}
_ATOMIC = {"in": Membership, "eq": Equality}
_QUANT = {"exists": Exists, "forall": Forall}
_BQUANT = {"bexists": BoundedExists, "bforall": BoundedForall}
_KEYWORDS = set(_BINARY) | set(_ATOMIC) | set(_QUANT) | set(_BQUANT) | {"not", "false"}


def _ref(e) -> Ref:
    if not isinstance(e, Atom):
        raise FormulaSyntaxError("expected a variable or #constant", e.pos)
    if e.startswith("#"):
        if len(e) == 1:
            raise FormulaSyntaxError("empty constant name", e.pos)
        return Constant(str(e[1:]))
    if e in _KEYWORDS or not e.isidentifier():
        raise FormulaSyntaxError(f"bad variable name {str(e)!r}", e.pos)
    return Variable(str(e))


def _var(e) -> str:
    ref = _ref(e)
    if not isinstance(ref, Variable):
        raise FormulaSyntaxError("quantifiers bind variables, not constants", e.pos)
    return ref.name


def _build(e) -> Formula:
    if isinstance(e, Atom):
        if e == "false":
            return Falsum()
        raise FormulaSyntaxError(f"unexpected token {str(e)!r}", e.pos)
    if not e or not isinstance(e[0], Atom):
        raise FormulaSyntaxError("expected a connective", e.pos)
    head, args = e[0], e[1:]

    def arity(n):
        if len(args) != n:
            raise FormulaSyntaxError(f"({head} ...) takes {n} arguments", e.pos)

    if head in _ATOMIC:
        arity(2)
        return _ATOMIC[head](_ref(args[0]), _ref(args[1]))
    if head in _BINARY:
        arity(2)
        return _BINARY[head](_build(args[0]), _build(args[1]))
    if head == "not":
        arity(1)
        return Not(_build(args[0]))
    if head in _QUANT:
        arity(2)
        return _QUANT[head](_var(args[0]), _build(args[1]))
    if head in _BQUANT:
        arity(3)
        var, bound = _var(args[0]), _ref(args[1])
        if bound == Variable(var):
            raise FormulaSyntaxError("a bounded quantifier cannot bound its own variable", e.pos)
        return _BQUANT[head](var, bound, _build(args[2]))
    raise FormulaSyntaxError(f"unknown connective {str(head)!r}", e.pos)


def parse_formula(text: str, free: Optional[Iterable[str]] = None) -> Formula:
    """Parse the s-expression form.

    ``free`` lists the variables allowed to occur free; any other unbound
    variable raises :class:`ScopeError`. With ``free=None`` the free variables
    are whatever the formula leaves unbound.
    """
    try:
        phi = _build(read(text))
    except FormulaSyntaxError:
        raise
    except SExprError as exc:
        raise FormulaSyntaxError(exc.message, exc.pos) from None
    if free is not None:
        extra = sorted(free_variables(phi) - set(free))
        if extra:
            raise ScopeError(extra[0])
    return phi


def _fmt_ref(r: Ref) -> str:
    return f"#{r.name}" if isinstance(r, Constant) else r.name


def format_formula(phi: Formula) -> str:
    t = type(phi)
    if t is Membership:
        return f"(in {_fmt_ref(phi.lhs)} {_fmt_ref(phi.rhs)})"
    if t is Equality:
        return f"(eq {_fmt_ref(phi.lhs)} {_fmt_ref(phi.rhs)})"
    if t is Falsum:
        return "false"
    if t is And:
        return f"(and {format_formula(phi.left)} {format_formula(phi.right)})"
    if t is Or:
        return f"(or {format_formula(phi.left)} {format_formula(phi.right)})"
    if t is Implies:
        return f"(imp {format_formula(phi.left)} {format_formula(phi.right)})"
    if t is Not:
        return f"(not {format_formula(phi.body)})"
    if t is Exists:
        return f"(exists {phi.var} {format_formula(phi.body)})"
    if t is Forall:
        return f"(forall {phi.var} {format_formula(phi.body)})"
    if t is BoundedExists:
        return f"(bexists {phi.var} {_fmt_ref(phi.bound)} {format_formula(phi.body)})"
    if t is BoundedForall:
        return f"(bforall {phi.var} {_fmt_ref(phi.bound)} {format_formula(phi.body)})"
    raise TypeError(phi)


def _ref_vars(r: Ref) -> FrozenSet[str]:
    return frozenset([r.name]) if isinstance(r, Variable) else frozenset()


def free_variables(phi: Formula) -> FrozenSet[str]:
    t = type(phi)
    if t is Membership or t is Equality:
        return _ref_vars(phi.lhs) | _ref_vars(phi.rhs)
    if t is Falsum:
        return frozenset()
    if t in (And, Or, Implies):
        return free_variables(phi.left) | free_variables(phi.right)
    if t is Not:
        return free_variables(phi.body)
    if t is Exists or t is Forall:
        return free_variables(phi.body) - {phi.var}
    return _ref_vars(phi.bound) | (free_variables(phi.body) - {phi.var})


def constants(phi: Formula) -> FrozenSet[str]:
    t = type(phi)
    if t is Membership or t is Equality:
        return frozenset(r.name for r in (phi.lhs, phi.rhs) if isinstance(r, Constant))
    if t is Falsum:
        return frozenset()
    if t in (And, Or, Implies):
        return constants(phi.left) | constants(phi.right)
    if t in (Not, Exists, Forall):
        return constants(phi.body)
    own = frozenset([phi.bound.name]) if isinstance(phi.bound, Constant) else frozenset()
    return own | constants(phi.body)


def is_bounded(phi: Formula) -> bool:
    """True iff every quantifier is a bounded one."""
    t = type(phi)
    if t in (Membership, Equality, Falsum):
        return True
    if t in (And, Or, Implies):
        return is_bounded(phi.left) and is_bounded(phi.right)
    if t is Not:
        return is_bounded(phi.body)
    if t is Exists or t is Forall:
        return False
    return is_bounded(phi.body)


def desugar(phi: Formula) -> Formula:
    """Expand bounded quantifiers into their unbounded definitions."""
    t = type(phi)
    if t in (Membership, Equality, Falsum):
        return phi
    if t in (And, Or, Implies):
        return t(desugar(phi.left), desugar(phi.right))
    if t is Not:
        return Not(desugar(phi.body))
    if t is Exists or t is Forall:
        return t(phi.var, desugar(phi.body))
    guard = Membership(Variable(phi.var), phi.bound)
    if t is BoundedExists:
        return Exists(phi.var, And(guard, desugar(phi.body)))
    return Forall(phi.var, Implies(guard, desugar(phi.body)))


def _sub_ref(r: Ref, var: str, value: Constant) -> Ref:
    return value if isinstance(r, Variable) and r.name == var else r


def _subst(phi: Formula, var: str, value: Constant) -> Formula:
    t = type(phi)
    if t is Membership or t is Equality:
        return t(_sub_ref(phi.lhs, var, value), _sub_ref(phi.rhs, var, value))
    if t is Falsum:
        return phi
    if t in (And, Or, Implies):
        return t(_subst(phi.left, var, value), _subst(phi.right, var, value))
    if t is Not:
        return Not(_subst(phi.body, var, value))
    if t is Exists or t is Forall:
        if phi.var == var:
            return phi
        return t(phi.var, _subst(phi.body, var, value))
    bound = _sub_ref(phi.bound, var, value)
    body = phi.body if phi.var == var else _subst(phi.body, var, value)
    return t(phi.var, bound, body)


def substitute(phi: Formula, var: str, value: Union[str, Constant]) -> Formula:
    """Replace free occurrences of ``var`` by the constant ``value``.

    Constants are closed, so no capture can occur. If ``var`` is not free the
    formula comes back unchanged and a :class:`NotFreeWarning` is issued.
    """
    if isinstance(value, str):
        value = Constant(value)
    if var not in free_variables(phi):
        warnings.warn(f"{var!r} is not free in {format_formula(phi)}", NotFreeWarning, stacklevel=2)
        return phi
    return _subst(phi, var, value)
