"""Height profiles of unordered trees.

The height profile of a tree lists, for every pair of heights h2 < h1 and
every node v of height h1 (in depth-first order), the number of children of
v whose subtree has height h2.  Self-nested trees have constant profile
vectors and are fully determined by one integer per entry, see
:class:`ScalarProfile`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .tree import Tree, build


class UnrealizableProfile(ValueError):
    """No tree has this scalar profile."""


class NotSelfNested(ValueError):
    pass


@dataclass(frozen=True)
class HeightProfile:
    """Triangular array of count vectors.

    ``rows[h1 - 1]`` holds one sparse count map ``{h2: count}`` per node of
    height ``h1``; zero counts are not stored.  Vectors are materialised on
    demand by :meth:`vector`.
    """

    rows: tuple[tuple[Mapping[int, int], ...], ...]
    ops: int = 0  # operation counter filled by compute_profile

    @property
    def dim(self) -> int:
        return len(self.rows)

    def n_vertices(self, h1: int) -> int:
        return len(self.rows[h1 - 1]) if 1 <= h1 <= self.dim else 0

    def vector(self, h1: int, h2: int) -> tuple[int, ...]:
        if not 0 <= h2 < h1 <= self.dim:
            return ()
        return tuple(g.get(h2, 0) for g in self.rows[h1 - 1])

    def __getitem__(self, key: tuple[int, int]) -> tuple[int, ...]:
        return self.vector(*key)

    def vertex_tuples(self, h1: int) -> list[tuple[int, ...]]:
        """Per-node column tuples (gamma_0, ..., gamma_{h1-1}) of row ``h1``."""
        return [tuple(g.get(h2, 0) for h2 in range(h1)) for g in self.rows[h1 - 1]]

    def dense(self) -> list[list[list[int]]]:
        """``dense()[h1-1][h2]`` is the list form of ``vector(h1, h2)``."""
        return [[list(self.vector(h1, h2)) for h2 in range(h1)] for h1 in range(1, self.dim + 1)]

    @classmethod
    def from_vectors(cls, vectors: Mapping[tuple[int, int], Sequence[int]]) -> "HeightProfile":
        """Build a profile from explicit vectors keyed by ``(h1, h2)``.

        Missing entries of a non-empty row are read as zero vectors.
        """
        dim = max((h1 for h1, _ in vectors), default=0)
        rows = []
        for h1 in range(1, dim + 1):
            lengths = {len(v) for (a, _), v in vectors.items() if a == h1}
            if len(lengths) != 1:
                raise ValueError(f"row {h1}: vectors missing or of unequal length")
            (n,) = lengths
            row = []
            for i in range(n):
                g = {}
                for h2 in range(h1):
                    c = vectors.get((h1, h2), [0] * n)[i]
                    if c < 0:
                        raise ValueError("profile entries must be non-negative")
                    if c:
                        g[h2] = c
                row.append(g)
            rows.append(tuple(row))
        return cls(tuple(rows))

    def render(self) -> str:
        lines = [f"dim {self.dim}"]
        for h1 in range(1, self.dim + 1):
            cells = ["(" + ",".join(map(str, self.vector(h1, h2))) + ")" for h2 in range(h1)]
            lines.append(f"{h1}: " + " ".join(cells))
        return "\n".join(lines)


@dataclass(frozen=True)
class ScalarProfile:
    """Profile of a self-nested tree: ``rows[h1 - 1][h2]`` is an integer."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for h1, row in enumerate(self.rows, 1):
            if len(row) != h1:
                raise ValueError(f"row {h1} must have {h1} entries, got {len(row)}")
            if any(x < 0 for x in row):
                raise ValueError(f"row {h1} has a negative entry")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, key: tuple[int, int]) -> int:
        h1, h2 = key
        if not 0 <= h2 < h1 <= self.dim:
            raise KeyError(key)
        return self.rows[h1 - 1][h2]

    @classmethod
    def from_entries(cls, entries: Mapping[tuple[int, int], int]) -> "ScalarProfile":
        dim = max((h1 for h1, _ in entries), default=0)
        return cls(tuple(tuple(entries.get((h1, h2), 0) for h2 in range(h1)) for h1 in range(1, dim + 1)))

    def is_realizable(self) -> bool:
        return all(row[-1] >= 1 for row in self.rows)

    def check_realizable(self) -> None:
        for h1, row in enumerate(self.rows, 1):
            if row[-1] < 1:
                raise UnrealizableProfile(
                    f"entry ({h1},{h1 - 1}) is {row[-1]}: a subtree of height {h1} "
                    f"needs at least one child of height {h1 - 1}"
                )

    def render(self) -> str:
        lines = [f"dim {self.dim}"]
        for h1, row in enumerate(self.rows, 1):
            lines.append(f"{h1}: " + " ".join(f"({x})" for x in row))
        return "\n".join(lines)


Profile = Union[HeightProfile, ScalarProfile]


def compute_profile(t: Tree) -> HeightProfile:
    """Height profile of ``t``; rows are filled in depth-first pre-order.

    ``ops`` counts one unit per visited node plus one per child edge, so
    ``ops <= 2 * #V(t) * max(D(t), 1)``.
    """
    rows: list[list[dict[int, int]]] = [[] for _ in range(t.height)]
    ops = 0
    for v in t.preorder():
        ops += 1
        h = t.node_height(v)
        if h == 0:
            continue
        gamma: dict[int, int] = {}
        for c in t.children(v):
            ops += 1
            hc = t.node_height(c)
            gamma[hc] = gamma.get(hc, 0) + 1
        rows[h - 1].append(gamma)
    return HeightProfile(tuple(tuple(r) for r in rows), ops)


# Counter constant for compute_profile: ops <= PROFILE_OPS_CONSTANT * #V * max(D, 1).
PROFILE_OPS_CONSTANT = 2


def dim(p: Profile) -> int:
    return p.dim


def restrict(p: Profile, h: int) -> Profile:
    if h < 0:
        raise ValueError("restriction height must be non-negative")
    return type(p)(p.rows[:h])


def profiles_equivalent(a: HeightProfile, b: HeightProfile) -> bool:
    """True iff each row of ``a`` is a joint permutation of the same row of ``b``."""
    if a.dim != b.dim:
        return False
    return all(Counter(a.vertex_tuples(h1)) == Counter(b.vertex_tuples(h1)) for h1 in range(1, a.dim + 1))


def is_self_nested_profile(p: HeightProfile) -> bool:
    for row in p.rows:
        first = row[0]
        if any(g != first for g in row[1:]):
            return False
    return True


def to_scalar(p: HeightProfile) -> ScalarProfile:
    if not is_self_nested_profile(p):
        raise NotSelfNested("profile vectors are not constant")
    return ScalarProfile(tuple(tuple(row[0].get(h2, 0) for h2 in range(h1)) for h1, row in enumerate(p.rows, 1)))


def sn_tree_from_profile(s: ScalarProfile) -> Tree:
    """Rebuild the unique self-nested tree with scalar profile ``s``.

    The root of a height-``d`` tree receives ``s[d, i]`` copies of the tree
    built from ``s`` restricted to height ``i``, for ``i < d``.
    """
    s.check_realizable()
    children: dict[int, list[int]] = {0: []}
    stack = [(0, s.dim)]
    while stack:
        v, d = stack.pop()
        for i in range(d):
            for _ in range(s.rows[d - 1][i]):
                w = len(children)
                children[w] = []
                children[v].append(w)
                stack.append((w, i))
    return build(children, 0)


def sn_sizes(s: ScalarProfile) -> list[int]:
    """``sn_sizes(s)[h]`` is the node count of the self-nested subtree of height h."""
    n = [1]
    for h, row in enumerate(s.rows, 1):
        n.append(1 + sum(row[j] * n[j] for j in range(h)))
    return n


def sn_node_count(s: ScalarProfile) -> int:
    return sn_sizes(s)[s.dim]
