"""Unordered rooted trees: representation, bracket parsing, canonical form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional


class TreeSyntaxError(ValueError):
    """Raised when a bracket string cannot be parsed into a tree."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Node:
    parent: Optional[int]
    children: tuple[int, ...]
    height: int


@dataclass(frozen=True)
class Tree:
    """An unordered rooted tree.

    Node identifiers are arbitrary non-negative integers that stay valid
    across edits applied to a copy; removed identifiers are never reused
    (``next_id`` only grows). Child order is kept for reproducibility but
    carries no meaning: compare trees with :func:`is_isomorphic`.
    """

    nodes: Mapping[int, Node]
    root: int
    next_id: int = field(default=-1)

    def __post_init__(self):
        if self.next_id < 0:
            object.__setattr__(self, "next_id", max(self.nodes) + 1)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: int) -> bool:
        return v in self.nodes

    def __getitem__(self, v: int) -> Node:
        return self.nodes[v]

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Tree({serialize(self)!r})"

    def children(self, v: int) -> tuple[int, ...]:
        return self.nodes[v].children

    def parent(self, v: int) -> Optional[int]:
        return self.nodes[v].parent

    def node_height(self, v: int) -> int:
        return self.nodes[v].height

    @property
    def height(self) -> int:
        return self.nodes[self.root].height

    @property
    def outdegree(self) -> int:
        return max(len(n.children) for n in self.nodes.values())

    def preorder(self, v: Optional[int] = None) -> Iterator[int]:
        """Depth-first pre-order, children visited in stored order."""
        stack = [self.root if v is None else v]
        while stack:
            u = stack.pop()
            yield u
            stack.extend(reversed(self.nodes[u].children))

    def postorder(self, v: Optional[int] = None) -> list[int]:
        order = list(self.preorder(v))
        order.reverse()
        return order

    def subtree_size(self, v: int) -> int:
        return sum(1 for _ in self.preorder(v))

    def subtree(self, v: int) -> "Tree":
        """The subtree rooted at ``v`` as a standalone tree (ids preserved)."""
        nodes = {}
        for u in self.preorder(v):
            n = self.nodes[u]
            nodes[u] = n if u != v else Node(None, n.children, n.height)
        return Tree(nodes, v)


def build(children: Mapping[int, Iterable[int]], root: int, next_id: int = -1) -> Tree:
    """Build a tree from a child map, computing parents and heights."""
    kids = {v: tuple(cs) for v, cs in children.items()}
    parent: dict[int, Optional[int]] = {root: None}
    order = []
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for c in kids.get(u, ()):
            if c in parent:
                raise ValueError(f"node {c} reached twice; not a tree")
            parent[c] = u
            stack.append(c)
    if len(order) != len(kids.keys() | {root}):
        raise ValueError("child map is not connected to the root")
    height: dict[int, int] = {}
    for u in reversed(order):
        cs = kids.get(u, ())
        height[u] = 1 + max(height[c] for c in cs) if cs else 0
    nodes = {u: Node(parent[u], kids.get(u, ()), height[u]) for u in order}
    return Tree(nodes, root, next_id)


def from_nested(nested) -> Tree:
    """Build a tree from nested sequences, e.g. ``[[], [[]]]``."""
    children: dict[int, list[int]] = {}
    counter = 0
    stack = [(nested, 0)]
    children[0] = []
    while stack:
        item, v = stack.pop()
        for sub in item:
            counter += 1
            children[v].append(counter)
            children[counter] = []
            stack.append((sub, counter))
    return build(children, 0)


def parse_tree(text: str) -> Tree:
    """Parse a bracket string such as ``"(()(()))"``.

    Whitespace is ignored. Any other character, unbalanced parentheses,
    trailing content or an empty input raise :class:`TreeSyntaxError`.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    children: dict[int, list[int]] = {}
    stack: list[int] = []
    root = None
    offset = 0
    for ch in text:
        if ch == "(":
            if root is not None and not stack:
                raise TreeSyntaxError("content after the root tree", offset)
            v = len(children)
            children[v] = []
            if stack:
                children[stack[-1]].append(v)
            else:
                root = v
            stack.append(v)
        elif ch == ")":
            if not stack:
                raise TreeSyntaxError("unbalanced ')'", offset)
            stack.pop()
        elif not ch.isspace():
            raise TreeSyntaxError(f"unexpected character {ch!r}", offset)
        offset += len(ch.encode("utf-8"))
    if root is None:
        raise TreeSyntaxError("empty input", offset)
    if stack:
        raise TreeSyntaxError("unbalanced '('", offset)
    return build(children, root)


def serialize(t: Tree, v: Optional[int] = None) -> str:
    """Bracket string in stored child order (not canonical)."""
    v = t.root if v is None else v
    out = {}
    for u in t.postorder(v):
        out[u] = "(" + "".join(out.pop(c) for c in t.children(u)) + ")"
    return out[v]


def canonical_key(s: str) -> tuple[int, str]:
    """Sort key for canonical substrings: shorter first, then lexicographic."""
    return (len(s), s)


def canonical_labels(t: Tree) -> dict[int, str]:
    """Canonical bracket string of every subtree, keyed by node id."""
    out: dict[int, str] = {}
    for u in t.postorder():
        out[u] = "(" + "".join(sorted((out[c] for c in t.children(u)), key=canonical_key)) + ")"
    return out


def serialize_canonical(t: Tree) -> str:
    """Canonical form: children serialized recursively, then sorted ascending
    by (length, string) so that ``"()"`` precedes ``"(())"``.

    Two trees are isomorphic iff their canonical strings are equal.
    """
    return canonical_labels(t)[t.root]


def height(t: Tree) -> int:
    return t.height


def outdegree(t: Tree) -> int:
    return t.outdegree


def is_isomorphic(a: Tree, b: Tree) -> bool:
    if len(a) != len(b) or a.height != b.height:
        return False
    return serialize_canonical(a) == serialize_canonical(b)


def leaf() -> Tree:
    return Tree({0: Node(None, (), 0)}, 0)
