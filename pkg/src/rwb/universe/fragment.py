"""Finite, subtree-closed quantifier domains standing in for the universes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..sexpr import Atom, SExprError, SList, read_all
from .trees import Tree, TreeSyntaxError, UTree, VTree, subtrees, tree_from_sexpr

__all__ = [
    "Fragment",
    "generate_fragment",
    "generation_count",
    "parse_fragment",
    "format_fragment",
    "FragmentError",
    "UnknownConstant",
    "MAX_DEPTH",
    "MAX_WIDTH",
    "MAX_ELEMENTS",
]

MAX_DEPTH = 4
MAX_WIDTH = 3
MAX_ELEMENTS = 200_000

_KIND = {"v": VTree, "u": UTree}


class FragmentError(ValueError):
    pass


class UnknownConstant(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown constant #{self.name}"


@dataclass(frozen=True)
class Fragment:
    """Ordered, deduplicated, subtree-closed list of trees of one kind.

    ``names`` maps constant names to elements. Besides the explicit names,
    ``#t<i>`` always denotes the i-th element, ``#empty`` the empty tree,
    ``#sempty`` the tree with a single ``(0, empty)`` edge and ``#vn<k>`` the
    k-th numeral, each when present.
    """

    kind: str
    elements: Tuple[Tree, ...]
    names: Mapping[str, Tree] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.kind not in _KIND:
            raise FragmentError(f"model kind must be 'v' or 'u', got {self.kind!r}")
        cls = _KIND[self.kind]
        seen = set()
        for t in self.elements:
            if type(t) is not cls:
                raise FragmentError(f"{self.kind}-fragment holds a {type(t).__name__}")
            if t in seen:
                raise FragmentError(f"duplicate element {t}")
            seen.add(t)
        for t in self.elements:
            for c in t.children():
                if c not in seen:
                    raise FragmentError(f"not subtree-closed: {c} missing under {t}")
        for name, t in self.names.items():
            if t not in seen:
                raise FragmentError(f"#{name} names a tree outside the fragment")
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.elements)})
        object.__setattr__(self, "_names", self._standard_names())

    @classmethod
    def closure(
        cls,
        kind: str,
        trees: Iterable[Tree],
        names: Optional[Mapping[str, Tree]] = None,
        label: str = "",
    ) -> "Fragment":
        """Close ``trees`` (and the named trees) under subtrees and order by depth."""
        pool = set()
        names = dict(names or {})
        for t in itertools.chain(trees, names.values()):
            pool.update(subtrees(t))
        elements = tuple(sorted(pool, key=lambda t: (t.depth, len(t.key), t.key)))
        return cls(kind, elements, names, label)

    def _standard_names(self) -> Dict[str, Tree]:
        cls = _KIND[self.kind]
        out: Dict[str, Tree] = {f"t{i}": t for i, t in enumerate(self.elements)}
        empty = cls()
        if empty in self._index:
            out["empty"] = empty
            sempty = cls([(0, empty)])
            if sempty in self._index:
                out["sempty"] = sempty
        numeral = [empty]
        while numeral[-1] in self._index:
            out[f"vn{len(numeral) - 1}"] = numeral[-1]
            numeral.append(cls((j, numeral[j]) for j in range(len(numeral))))
        out.update(self.names)
        return out

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, t):
        return t in self._index

    def index(self, t: Tree) -> int:
        return self._index[t]

    def lookup(self, name: str) -> Tree:
        try:
            return self._names[name]
        except KeyError:
            raise UnknownConstant(name) from None

    def name_of(self, t: Tree) -> str:
        """Preferred name: an explicit one when present, else ``t<i>``."""
        for name, u in self.names.items():
            if u == t:
                return name
        return f"t{self._index[t]}"

    def describe(self) -> str:
        return self.label or f"{self.kind}{len(self.elements)}"

    def with_names(self, names: Mapping[str, Tree], label: str = "") -> "Fragment":
        merged = dict(self.names)
        merged.update(names)
        return Fragment.closure(self.kind, self.elements, merged, label or self.label)


def generation_count(kind: str, depth: int, width: int) -> int:
    """Closed-form count of the trees :func:`generate_fragment` produces."""
    n = 1
    for _ in range(depth):
        if kind == "u":
            # each label < width is absent or points at a smaller tree
            n = (n + 1) ** width
        else:
            items = width * n
            # multisets of at most ``width`` edges
            n = sum(_multichoose(items, k) for k in range(width + 1))
    return n


def _multichoose(n: int, k: int) -> int:
    from math import comb

    return comb(n + k - 1, k) if n else (1 if k == 0 else 0)


def generate_fragment(
    kind: str,
    depth: int,
    width: int,
    max_depth: int = MAX_DEPTH,
    max_width: int = MAX_WIDTH,
) -> Fragment:
    """All trees of depth at most ``depth`` with at most ``width`` edges per
    node and labels below ``width``."""
    if kind not in _KIND:
        raise FragmentError(f"model kind must be 'v' or 'u', got {kind!r}")
    if depth < 0 or width < 0:
        raise FragmentError("depth and width are natural numbers")
    if depth > max_depth or width > max_width:
        raise FragmentError(f"size guard: depth <= {max_depth} and width <= {max_width}")
    count = generation_count(kind, depth, width)
    if count > MAX_ELEMENTS:
        raise FragmentError(f"size guard: {count} trees exceed {MAX_ELEMENTS}")
    cls = _KIND[kind]
    level: List[Tree] = [cls()]
    for _ in range(depth):
        if kind == "u":
            options = [None] + level
            nxt = [
                cls((m, c) for m, c in enumerate(choice) if c is not None)
                for choice in itertools.product(options, repeat=width)
            ]
        else:
            items = [(m, c) for m in range(width) for c in level]
            nxt = [
                cls(combo)
                for k in range(width + 1)
                for combo in itertools.combinations_with_replacement(items, k)
            ]
        level = list(dict.fromkeys(nxt))
    return Fragment.closure(kind, level, label=f"depth{depth}")


def parse_fragment(text: str) -> Fragment:
    """``(fragment v (name (vtree ...)) ...)``; unnamed subtrees are added."""
    try:
        exprs = read_all(text)
    except SExprError as exc:
        raise FragmentError(str(exc)) from None
    if len(exprs) != 1:
        raise FragmentError("a fragment file holds one (fragment ...) form")
    e = exprs[0]
    if not isinstance(e, SList) or len(e) < 2 or e[0] != "fragment" or e[1] not in _KIND:
        raise FragmentError("expected (fragment v|u ...)")
    kind = str(e[1])
    names: Dict[str, Tree] = {}
    for item in e[2:]:
        if not isinstance(item, SList) or len(item) != 2 or not isinstance(item[0], Atom):
            raise FragmentError(f"expected (name tree) at position {item.pos}")
        try:
            names[str(item[0])] = tree_from_sexpr(item[1])
        except TreeSyntaxError as exc:
            raise FragmentError(str(exc)) from None
    return Fragment.closure(kind, (), names)


def format_fragment(frag: Fragment) -> str:
    lines = [f"(fragment {frag.kind}"]
    for name, t in frag.names.items():
        lines.append(f"  ({name} {t.key})")
    return "\n".join(lines) + ")\n"
