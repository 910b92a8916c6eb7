"""Public reduction API: outcomes, backend selection and the application cache.

The compiled kernel is used when it imports and ``RWB_PURE_PYTHON`` is unset;
otherwise the pure-Python machine runs. Both implement the same rules.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Union

from .. import config
from . import machine
from .terms import (
    ARITY,
    C_IFZ,
    C_P,
    P,
    P0,
    P1,
    App,
    Const,
    Fix,
    Num,
    Term,
    Var,
)

__all__ = [
    "Value",
    "Undefined",
    "Timeout",
    "ReductionOutcome",
    "reduce",
    "apply",
    "proj0",
    "proj1",
    "is_value",
    "backend_name",
    "set_backend",
    "clear_cache",
]


@dataclass(frozen=True)
class Value:
    term: Term
    steps: int = 0

    def __eq__(self, other):
        # step counts are diagnostic; outcomes compare by payload
        return type(other) is Value and other.term == self.term

    def __hash__(self):
        return hash(("value", self.term))


@dataclass(frozen=True)
class Undefined:
    steps: int = 0
    reason: Optional[str] = None

    def __eq__(self, other):
        return type(other) is Undefined

    def __hash__(self):
        return hash("undefined")


@dataclass(frozen=True)
class Timeout:
    steps: int = 0

    def __eq__(self, other):
        return type(other) is Timeout

    def __hash__(self):
        return hash("timeout")


ReductionOutcome = Union[Value, Undefined, Timeout]


def _load_compiled():
    try:
        from . import _ckernel
    except ImportError:
        return None
    return _ckernel.run


_compiled_run = None if os.environ.get("RWB_PURE_PYTHON") else _load_compiled()
_run = _compiled_run or machine.run


def backend_name() -> str:
    return "compiled" if _run is not machine.run else "python"


def set_backend(name: str) -> None:
    """Switch between ``"python"`` and ``"compiled"`` (used by tests and benchmarks)."""
    global _run
    if name == "python":
        _run = machine.run
    elif name == "compiled":
        run = _compiled_run or _load_compiled()
        if run is None:
            raise RuntimeError("compiled kernel is not built")
        _run = run
    else:
        raise ValueError(name)
    clear_cache()


def _outcome(kind, value, steps, reason) -> ReductionOutcome:
    if kind == machine.VALUE:
        return Value(value, steps)
    if kind == machine.UNDEFINED:
        return Undefined(steps, reason)
    return Timeout(steps)


def reduce(t: Term, budget: Optional[int] = None) -> ReductionOutcome:
    """Reduce a closed term within ``budget`` steps."""
    if budget is None:
        budget = config.DEFAULT_BUDGET
    return _outcome(*_run(t, budget))


# (f, x) -> (kind, value, steps, reason); a Timeout entry records the budget it ran
# out of, so it only answers queries with a budget no larger than that.
_cache: dict = {}
_CACHE_LIMIT = 500_000


def clear_cache() -> None:
    _cache.clear()


def apply(f: Term, x: Term, budget: Optional[int] = None) -> ReductionOutcome:
    """Application of value ``f`` to value ``x``; equals ``reduce(App(f, x))``."""
    if budget is None:
        budget = config.DEFAULT_BUDGET
    key = (f, x)
    hit = _cache.get(key)
    if hit is not None:
        kind, value, steps, reason = hit
        if kind != machine.TIMEOUT:
            if steps <= budget:
                return _outcome(*hit)
        elif budget <= steps:
            return Timeout(budget)
    res = _run(App(f, x), budget)
    if len(_cache) >= _CACHE_LIMIT:
        _cache.clear()
    _cache[key] = res
    return _outcome(*res)


def proj0(t: Term, budget: Optional[int] = None) -> ReductionOutcome:
    return apply(P0, t, budget)


def proj1(t: Term, budget: Optional[int] = None) -> ReductionOutcome:
    return apply(P1, t, budget)


def is_value(t: Term) -> bool:
    """Normal forms: constants, numerals, recursive values, and constants
    applied to values below their arity (a fully applied ``pair`` included)."""
    tt = type(t)
    if tt is Const or tt is Num or tt is Fix:
        return tt is not Fix or _closed_value_body(t)
    if tt is Var:
        return False
    args = []
    while type(t) is App:
        args.append(t.x)
        t = t.f
    if type(t) is not Const:
        return False
    if len(args) > _VALUE_ARGS[t.code]:
        return False
    args.reverse()
    if t.code == C_IFZ and args and type(args[0]) is not Num:
        return False
    return all(is_value(a) for a in args)


# most arguments a constant can hold while remaining a value
_VALUE_ARGS = {c: a - 1 for c, a in ARITY.items()}
_VALUE_ARGS[C_P] = 2


def _closed_value_body(t: Fix) -> bool:
    return is_value(t.f)
