"""Sets of realizers attached to carrier elements.

Members are closed value terms. Membership is three-valued: ``True``,
``False`` or ``None`` when deciding it ran out of budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Tuple

from ..config import DEFAULT_BUDGET, FULL_SAMPLE
from ..pca import Num, Term, format_term, is_value

__all__ = [
    "RealizerSet",
    "FiniteSet",
    "Full",
    "Derived",
    "as_term",
    "and3",
    "or3",
    "EmptyRealizerSet",
]


class EmptyRealizerSet(ValueError):
    """An element of a carrier has no realizer."""

    def __init__(self, element):
        super().__init__(f"element {element!r} has no realizer")
        self.element = element


def as_term(x) -> Term:
    if isinstance(x, bool):
        raise TypeError("booleans are not realizers")
    if isinstance(x, int):
        return Num(x)
    if isinstance(x, Term):
        if not is_value(x):
            raise ValueError(f"realizers are values, got {format_term(x)}")
        return x
    raise TypeError(f"not a realizer: {x!r}")


def and3(values: Iterable[Optional[bool]]) -> Optional[bool]:
    unknown = False
    for v in values:
        if v is False:
            return False
        if v is None:
            unknown = True
    return None if unknown else True


def or3(values: Iterable[Optional[bool]]) -> Optional[bool]:
    unknown = False
    for v in values:
        if v is True:
            return True
        if v is None:
            unknown = True
    return None if unknown else False


class RealizerSet:
    """Base class; see :class:`FiniteSet`, :class:`Full`, :class:`Derived`."""

    def member(self, n: Term, budget: Optional[int] = None) -> Optional[bool]:
        raise NotImplementedError

    @property
    def witness(self) -> Optional[Term]:
        raise NotImplementedError

    def sample(self) -> Tuple[Term, ...]:
        """Realizers visited by tracking checks."""
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> Tuple[Term, ...]:
        raise TypeError(f"{type(self).__name__} is not finitely enumerable")


@dataclass(frozen=True)
class FiniteSet(RealizerSet):
    members: Tuple[Term, ...] = ()

    def __init__(self, members: Iterable = ()):
        seen = []
        for m in members:
            t = as_term(m)
            if t not in seen:
                seen.append(t)
        object.__setattr__(self, "members", tuple(seen))

    def member(self, n, budget=None):
        return n in self.members

    @property
    def witness(self):
        return self.members[0] if self.members else None

    def sample(self):
        return self.members

    @property
    def is_finite(self):
        return True

    def elements(self):
        return self.members

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return "{" + ", ".join(format_term(m) for m in self.members) + "}"


@dataclass(frozen=True)
class Full(RealizerSet):
    """Every value realizes."""

    def member(self, n, budget=None):
        return True

    @property
    def witness(self):
        return Num(0)

    def sample(self):
        return tuple(Num(k) for k in range(FULL_SAMPLE))

    def __str__(self):
        return "full"


@dataclass(frozen=True, eq=False)
class Derived(RealizerSet):
    """A set given by a membership test compiled from a construction.

    ``tag`` and ``data`` describe the construction; ``enumerate`` optionally
    lists the members when the set is known to be finite.
    """

    tag: str
    data: tuple
    check: Callable[[Term, int], Optional[bool]]
    witness_term: Optional[Term] = None
    enumerate: Optional[Callable[[], Tuple[Term, ...]]] = field(default=None, repr=False)

    def member(self, n, budget=None):
        return self.check(n, DEFAULT_BUDGET if budget is None else budget)

    @property
    def witness(self):
        return self.witness_term

    def sample(self):
        if self.enumerate is not None:
            return self.elements()
        return () if self.witness_term is None else (self.witness_term,)

    @property
    def is_finite(self):
        return self.enumerate is not None

    def elements(self):
        if self.enumerate is None:
            return super().elements()
        return tuple(self.enumerate())

    def __str__(self):
        return f"<{self.tag}>"
