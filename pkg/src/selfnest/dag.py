"""DAG reduction of unordered trees by subtree sharing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .tree import Tree, build, canonical_key, canonical_labels


@dataclass(frozen=True)
class DagClass:
    height: int
    out_edges: Mapping[int, int]  # child class id -> multiplicity
    label: str  # canonical string of the represented subtree


@dataclass(frozen=True)
class DagReduction:
    """Quotient of a tree by subtree isomorphism.

    Classes are numbered by increasing height, ties broken by canonical
    string, so the numbering is the same for any two isomorphic trees.
    """

    classes: tuple[DagClass, ...]
    root_class: int

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def height(self) -> int:
        return self.classes[self.root_class].height

    def edges(self):
        for i, c in enumerate(self.classes):
            for j, n in sorted(c.out_edges.items()):
                yield i, j, n


def reduce(t: Tree) -> DagReduction:
    labels = canonical_labels(t)
    first: dict[str, int] = {}
    for v, lab in labels.items():
        first.setdefault(lab, v)
    ordered = sorted(first, key=lambda lab: (t.node_height(first[lab]), canonical_key(lab)))
    index = {lab: i for i, lab in enumerate(ordered)}
    classes = []
    for lab in ordered:
        v = first[lab]
        edges: dict[int, int] = {}
        for c in t.children(v):
            j = index[labels[c]]
            edges[j] = edges.get(j, 0) + 1
        classes.append(DagClass(t.node_height(v), dict(sorted(edges.items())), lab))
    return DagReduction(tuple(classes), index[labels[t.root]])


def is_linear(d: DagReduction) -> bool:
    """True iff some path visits every class.

    Every class of height h+1 points to a class of height h, so this holds
    exactly when each height level 0..H carries a single class.
    """
    heights = [c.height for c in d.classes]
    return heights == list(range(d.height + 1))


def expand(d: DagReduction) -> Tree:
    children: dict[int, list[int]] = {}
    counter = 0
    stack = [(d.root_class, 0)]
    children[0] = []
    while stack:
        k, v = stack.pop()
        for j, n in d.classes[k].out_edges.items():
            for _ in range(n):
                counter += 1
                children[v].append(counter)
                children[counter] = []
                stack.append((j, counter))
    return build(children, 0)


def class_sizes(d: DagReduction) -> list[int]:
    """Number of tree nodes under each class, m(C) = 1 + sum N(C,C') m(C')."""
    m: list[int] = []
    for c in d.classes:  # children always precede parents
        m.append(1 + sum(n * m[j] for j, n in c.out_edges.items()))
    return m


def node_count(d: DagReduction) -> int:
    return class_sizes(d)[d.root_class]


def to_dot(d: DagReduction, name: str = "dag") -> str:
    m = class_sizes(d)
    lines = [f"digraph {name} {{"]
    for i, c in enumerate(d.classes):
        lines.append(f'  c{i} [label="h={c.height},n={m[i]}"];')
    for i, j, n in d.edges():
        lines.append(f'  c{i} -> c{j} [label="{n}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
