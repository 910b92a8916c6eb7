"""Terms of the combinatory algebra.

Everything is immutable and hashed once at construction, so terms can be used
as dictionary keys in the reduction caches without re-walking them.
"""

from __future__ import annotations

from typing import FrozenSet

__all__ = [
    "Term",
    "Const",
    "Num",
    "App",
    "Var",
    "Fix",
    "K",
    "S",
    "P",
    "P0",
    "P1",
    "SUCC",
    "IFZ",
    "FIX",
    "CONSTANTS",
    "app",
    "pair_val",
    "is_pair",
    "is_closed",
    "free_vars",
    "size",
    "OpenTermError",
]

# Node tags; the compiled kernel uses the same numbering.
T_CONST, T_NUM, T_APP, T_FIX, T_VAR = range(5)

# Constant codes, with their arities.
C_K, C_S, C_P, C_P0, C_P1, C_SUCC, C_IFZ, C_FIX = range(8)
ARITY = {C_K: 2, C_S: 3, C_P: 2, C_P0: 1, C_P1: 1, C_SUCC: 1, C_IFZ: 3, C_FIX: 1}


class OpenTermError(ValueError):
    """Raised when a term with free variables is submitted for reduction."""


class Term:
    __slots__ = ("_hash",)
    tag: int = -1

    def __repr__(self) -> str:
        from .syntax import format_term

        return f"<{format_term(self)}>"

    def __hash__(self) -> int:
        return self._hash


class Const(Term):
    __slots__ = ("name", "code")
    tag = T_CONST
    _registry: dict = {}

    def __new__(cls, name: str, code: int):
        if code in cls._registry:
            return cls._registry[code]
        obj = super().__new__(cls)
        obj.name = name
        obj.code = code
        obj._hash = hash((T_CONST, code))
        cls._registry[code] = obj
        return obj

    def __eq__(self, other):
        return self is other

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Const, (self.name, self.code))


class Num(Term):
    __slots__ = ("k",)
    tag = T_NUM

    def __init__(self, k: int):
        if k < 0:
            raise ValueError("numerals are natural numbers")
        self.k = k
        self._hash = hash((T_NUM, k))

    def __eq__(self, other):
        return self is other or (type(other) is Num and other.k == self.k)

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Num, (self.k,))


class App(Term):
    __slots__ = ("f", "x")
    tag = T_APP

    def __init__(self, f: Term, x: Term):
        self.f = f
        self.x = x
        self._hash = hash((T_APP, f._hash, x._hash))

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not App or other._hash != self._hash:
            return False
        # iterative on the left spine; right spines are short in practice
        a, b = self, other
        while type(a) is App and type(b) is App:
            if a is b:
                return True
            if a._hash != b._hash or a.x != b.x:
                return False
            a, b = a.f, b.f
        return a == b

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (App, (self.f, self.x))


class Var(Term):
    __slots__ = ("name",)
    tag = T_VAR

    def __init__(self, name: str):
        self.name = name
        self._hash = hash((T_VAR, name))

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Var, (self.name,))


class Fix(Term):
    """A recursive value: observing it (applying, projecting, testing)
    replaces it by the value of ``f`` applied to the node itself."""

    __slots__ = ("f",)
    tag = T_FIX

    def __init__(self, f: Term):
        self.f = f
        self._hash = hash((T_FIX, f._hash))

    def __eq__(self, other):
        return self is other or (
            type(other) is Fix and other._hash == self._hash and other.f == self.f
        )

    __hash__ = Term.__hash__

    def __reduce__(self):
        return (Fix, (self.f,))


K = Const("K", C_K)
S = Const("S", C_S)
P = Const("pair", C_P)
P0 = Const("p0", C_P0)
P1 = Const("p1", C_P1)
SUCC = Const("succ", C_SUCC)
IFZ = Const("ifz", C_IFZ)
FIX = Const("fix", C_FIX)

CONSTANTS = (K, S, P, P0, P1, SUCC, IFZ, FIX)


def app(f: Term, *args: Term) -> Term:
    """Left-nested application ``f a1 a2 ...``."""
    for a in args:
        f = App(f, a)
    return f


def pair_val(a: Term, b: Term) -> Term:
    return App(App(P, a), b)


def is_pair(t: Term) -> bool:
    return type(t) is App and type(t.f) is App and t.f.f is P


def free_vars(t: Term) -> FrozenSet[str]:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if type(u) is App:
            stack.append(u.f)
            stack.append(u.x)
        elif type(u) is Fix:
            stack.append(u.f)
        elif type(u) is Var:
            out.add(u.name)
    return frozenset(out)


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def size(t: Term) -> int:
    """Node count: leaves plus application and fixpoint nodes."""
    n = 0
    stack = [t]
    while stack:
        u = stack.pop()
        n += 1
        if type(u) is App:
            stack.append(u.f)
            stack.append(u.x)
        elif type(u) is Fix:
            stack.append(u.f)
    return n
