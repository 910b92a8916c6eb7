"""Candidate pools: the distinct values of all closed terms up to a size bound.

Terms are enumerated bottom-up by node count. A term of size ``s`` is an
application of a size-``i`` term to a size-``j`` term with ``i + j + 1 = s``;
since reduction is call-by-value, its value is the application of the two
component values, so it suffices to combine earlier *values*. Values are
deduplicated structurally and terms that are undefined or exceed the pool
budget are dropped (they denote no element). Order is deterministic:
by size, then by enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .reduction import Value, apply
from .syntax import format_term
from .terms import CONSTANTS, Num, Term

__all__ = ["Pool", "default_atoms", "enumerate_values", "candidate_pool"]

POOL_BUDGET = 2000


def default_atoms(numerals: int = 2) -> List[Term]:
    """Numerals first, so the smallest realizers are found first."""
    return [Num(k) for k in range(numerals)] + list(CONSTANTS)


def enumerate_values(
    max_size: int,
    atoms: Sequence[Term],
    budget: int = POOL_BUDGET,
) -> Iterator[Tuple[Term, int]]:
    """Yield ``(value, size)`` for each new value, lazily and in pool order."""
    seen = set()
    by_size: Dict[int, List[Term]] = {}
    level = []
    for a in atoms:
        if a not in seen:
            seen.add(a)
            level.append(a)
            yield a, 1
    by_size[1] = level
    for s in range(3, max_size + 1, 2):
        level = []
        for i in range(1, s - 1, 2):
            j = s - 1 - i
            for f in by_size.get(i, ()):
                for x in by_size.get(j, ()):
                    out = apply(f, x, budget)
                    if type(out) is Value:
                        v = out.term
                        if v not in seen:
                            seen.add(v)
                            level.append(v)
                            yield v, s
        by_size[s] = level


@dataclass
class Pool:
    """An ordered candidate list with provenance, reported alongside verdicts."""

    max_size: int
    terms: List[Term]
    library: Dict[str, Term] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def describe(self) -> str:
        return f"size<={self.max_size}+lib{len(self.library)}"


_POOL_CACHE: Dict[tuple, List[Term]] = {}


def candidate_pool(
    max_size: int,
    library: Dict[str, Term] = None,
    atoms: Iterable[Term] = None,
) -> Pool:
    """Atoms first, then named library combinators, then larger terms by size.

    Library entries also serve as atoms of the enumeration, so compositions of
    library combinators with constants appear among the larger terms.
    """
    library = dict(library or {})
    atoms = list(atoms) if atoms is not None else default_atoms()
    lib_terms = list(library.values())
    key = (max_size, tuple(atoms), tuple(lib_terms))
    if key not in _POOL_CACHE:
        base = atoms + [t for t in lib_terms if t not in atoms]
        vals = [v for v, _ in enumerate_values(max_size, base)]
        # move library entries right after the plain atoms
        head = [v for v in vals[: len(base)] if v in atoms]
        lib = [v for v in vals[: len(base)] if v not in atoms]
        _POOL_CACHE[key] = head + lib + vals[len(base) :]
    return Pool(max_size, list(_POOL_CACHE[key]), library)


def describe_terms(terms: Iterable[Term]) -> List[str]:
    return [format_term(t) for t in terms]
