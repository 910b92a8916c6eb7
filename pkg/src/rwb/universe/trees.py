"""Well-founded edge-labelled trees for the two universes.

A :class:`VTree` is a finite multiset of ``(label, child)`` edges; a
:class:`UTree` is ``sup_A(t)`` with ``A`` a finite set of labels, so its edge
labels are distinct. Both keep their edges in canonical order, which makes
structural equality a string comparison. Structural equality is used only
for deduplication; the object-level equality is the forcing clause.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Tuple, Union

from ..sexpr import Atom, SExprError, SList, read

__all__ = [
    "VTree",
    "UTree",
    "Tree",
    "EMPTY_V",
    "EMPTY_U",
    "vn_encode",
    "u_encode",
    "parse_tree",
    "format_tree",
    "subtrees",
    "TreeSyntaxError",
    "ENCODE_BOUND",
]

ENCODE_BOUND = 64


class TreeSyntaxError(SExprError):
    pass


class _Tree:
    __slots__ = ("edges", "key", "depth", "_hash")
    head = ""

    def __init__(self, edges: Iterable[Tuple[int, "_Tree"]] = ()):
        edges = sorted(((int(m), c) for m, c in edges), key=lambda e: (e[0], e[1].key))
        for m, c in edges:
            if m < 0:
                raise ValueError("edge labels are natural numbers")
            if type(c) is not type(self):
                raise TypeError(f"{self.head} children must be {type(self).__name__}")
        self._check(edges)
        self.edges: Tuple[Tuple[int, _Tree], ...] = tuple(edges)
        body = "".join(f" ({m} {c.key})" for m, c in self.edges)
        self.key = f"({self.head}{body})"
        self.depth = 1 + max((c.depth for _, c in self.edges), default=-1)
        self._hash = hash(self.key)

    def _check(self, edges):
        pass

    def __eq__(self, other):
        return self is other or (type(other) is type(self) and other.key == self.key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.key

    def __str__(self):
        return self.key

    def __len__(self):
        return len(self.edges)

    def children(self) -> List["_Tree"]:
        return [c for _, c in self.edges]

    def labels(self) -> List[int]:
        return [m for m, _ in self.edges]


class VTree(_Tree):
    """Element of the McCarty universe: duplicate edges are allowed."""

    __slots__ = ()
    head = "vtree"


class UTree(_Tree):
    """``sup_A(t)``: a partial function from labels to subtrees."""

    __slots__ = ("_branch",)
    head = "utree"

    def _check(self, edges):
        labels = [m for m, _ in edges]
        if len(set(labels)) != len(labels):
            raise ValueError(f"utree edge labels must be distinct, got {labels}")

    def __init__(self, edges=()):
        super().__init__(edges)
        self._branch: Dict[int, UTree] = dict(self.edges)

    @property
    def domain(self) -> frozenset:
        return frozenset(self._branch)

    def branch(self, a: int) -> "UTree":
        return self._branch[a]

    def get(self, a: int):
        return self._branch.get(a)


Tree = Union[VTree, UTree]

EMPTY_V = VTree()
EMPTY_U = UTree()


def _encode(cls, k: int, bound: int):
    if k < 0 or k > bound:
        raise ValueError(f"numeral {k} outside the encoding bound {bound}")
    out = []
    for _ in range(k + 1):
        out.append(cls((j, out[j]) for j in range(len(out))))
    return out[k]


def vn_encode(k: int, bound: int = ENCODE_BOUND) -> VTree:
    """Von Neumann numeral: edges ``(j, vn_encode(j))`` for ``j < k``."""
    return _encode(VTree, k, bound)


def u_encode(k: int, bound: int = ENCODE_BOUND) -> UTree:
    return _encode(UTree, k, bound)


def subtrees(t: Tree) -> Iterator[Tree]:
    """Yield ``t`` and every tree below it (with repeats)."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        stack.extend(u.children())


def _build(e) -> Tree:
    if not isinstance(e, SList) or not e or not isinstance(e[0], Atom):
        raise TreeSyntaxError("expected (vtree ...) or (utree ...)", e.pos)
    cls = {"vtree": VTree, "utree": UTree}.get(e[0])
    if cls is None:
        raise TreeSyntaxError(f"unknown tree kind {str(e[0])!r}", e[0].pos)
    edges = []
    for item in e[1:]:
        if not isinstance(item, SList) or len(item) != 2 or not isinstance(item[0], Atom):
            raise TreeSyntaxError("an edge is (label tree)", item.pos)
        if not item[0].isdigit():
            raise TreeSyntaxError(f"bad edge label {str(item[0])!r}", item[0].pos)
        child = _build(item[1])
        if type(child) is not cls:
            raise TreeSyntaxError("vtree and utree cannot be mixed", item[1].pos)
        edges.append((int(item[0]), child))
    try:
        return cls(edges)
    except ValueError as exc:
        raise TreeSyntaxError(str(exc), e.pos) from None


def tree_from_sexpr(e) -> Tree:
    return _build(e)


def parse_tree(text: str) -> Tree:
    try:
        return _build(read(text))
    except TreeSyntaxError:
        raise
    except SExprError as exc:
        raise TreeSyntaxError(exc.message, exc.pos) from None


def format_tree(t: Tree) -> str:
    return t.key
