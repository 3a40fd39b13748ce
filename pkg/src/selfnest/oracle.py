"""Brute-force ground truth for the self-nested approximations.

These searches are exponential and meant for trees of about a dozen nodes.
They share no code with :mod:`selfnest.approx`: the NEST search walks the
space of scalar profiles and tests embeddability node by node, the NeST
search explores every tree reachable by legal deletions.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator, Optional

from .edits import apply, legal_deletions
from .profile import ScalarProfile, sn_sizes, sn_tree_from_profile
from .tree import Tree, build, canonical_labels, leaf, parse_tree, serialize_canonical

MAX_ORACLE_NODES = 12


class OracleError(RuntimeError):
    pass


class BudgetExhausted(OracleError):
    pass


def _bipartite_match(options: list[list[int]], n_slots: int) -> bool:
    """Whether every left vertex can take a distinct slot (Kuhn's algorithm)."""
    owner: list[Optional[int]] = [None] * n_slots

    def augment(u, seen):
        for s in options[u]:
            if s in seen:
                continue
            seen.add(s)
            if owner[s] is None or augment(owner[s], seen):
                owner[s] = u
                return True
        return False

    return all(augment(u, set()) for u in range(len(options)))


class Embedder:
    """Decides whether subtrees grow into self-nested targets by AI/AS edits.

    ``embeds(v, G)``: can the subtree at ``v`` (height g <= G) be turned into
    the self-nested tree of height G?  If G > g, ``v`` must first be lifted
    by an inserted unary parent whose chain child has height G-1.  If G == g,
    the children of ``v`` must go to distinct child slots of the target, a
    child of height h into a slot of height >= h that it embeds into; the
    remaining slots are filled by grafting.
    """

    def __init__(self, t: Tree, s: ScalarProfile):
        s.check_realizable()
        self.t = t
        self.s = s
        self.labels = canonical_labels(t)
        self.memo: dict[tuple[str, int], bool] = {}

    def embeds(self, v: int, target: int) -> bool:
        key = (self.labels[v], target)
        if key in self.memo:
            return self.memo[key]
        g = self.t.node_height(v)
        if target < g:
            result = False
        elif target > g:
            result = self.embeds(v, target - 1)
        elif g == 0:
            result = True
        else:
            slot_heights = [h2 for h2 in range(g) for _ in range(self.s[g, h2])]
            kids = self.t.children(v)
            if len(kids) > len(slot_heights):
                result = False
            else:
                options = [
                    [k for k, sh in enumerate(slot_heights) if self.embeds(c, sh)]
                    for c in kids
                ]
                result = _bipartite_match(options, len(slot_heights))
        self.memo[key] = result
        return result


def embeds_into_sn(t: Tree, s: ScalarProfile) -> bool:
    """True iff AI/AS edits turn ``t`` into the self-nested tree with profile ``s``."""
    if t.height != s.dim:
        raise ValueError(f"height mismatch: tree {t.height}, profile {s.dim}")
    return Embedder(t, s).embeds(t.root, s.dim)


def _row_choices(h: int, sizes: list[int], cap: int) -> Iterator[tuple[int, ...]]:
    """Rows (s_0..s_{h-1}) with s_{h-1} >= 1 and 1 + sum s_j sizes[j] <= cap."""

    def rec(j, budget):
        if j < 0:
            yield ()
            return
        lo = 1 if j == h - 1 else 0
        for x in range(lo, budget // sizes[j] + 1):
            for rest in rec(j - 1, budget - x * sizes[j]):
                yield rest + (x,)

    yield from rec(h - 1, cap - 1)


def embedding_profiles(t: Tree, node_budget: int) -> Iterator[ScalarProfile]:
    """All realizable scalar profiles of dim H(t) with at most ``node_budget``
    nodes into which ``t`` embeds.

    Rows are chosen bottom-up; a prefix is dropped as soon as some node of
    the current height fails to embed, which is necessary for the whole.
    """
    if node_budget < 1:
        return
    H = t.height
    by_height: dict[int, list[int]] = {}
    for v in t.nodes:
        by_height.setdefault(t.node_height(v), []).append(v)

    def rec(rows: tuple, sizes: list[int]):
        h = len(rows)
        if h == H:
            yield ScalarProfile(rows)
            return
        h += 1
        cap = node_budget - (H - h)  # each level above adds at least one node
        for row in _row_choices(h, sizes, cap):
            s = ScalarProfile(rows + (row,))
            e = Embedder(t, s)
            if all(e.embeds(v, h) for v in by_height[h]):
                new_size = 1 + sum(x * sizes[j] for j, x in enumerate(row))
                yield from rec(rows + (row,), sizes + [new_size])

    yield from rec((), [1])


def brute_nest_profile(t: Tree, node_budget: int) -> ScalarProfile:
    best: list[ScalarProfile] = []
    best_n = None
    for s in embedding_profiles(t, node_budget):
        n = sn_sizes(s)[-1]
        if best_n is None or n < best_n:
            best, best_n = [s], n
        elif n == best_n:
            best.append(s)
    if not best:
        raise BudgetExhausted(f"no embedding self-nested tree with <= {node_budget} nodes")
    if len(best) > 1:
        raise OracleError(f"{len(best)} distinct optima with {best_n} nodes: NEST not unique")
    return best[0]


def brute_nest(t: Tree, node_budget: int) -> Tree:
    return sn_tree_from_profile(brute_nest_profile(t, node_budget))


def is_self_nested(t: Tree) -> bool:
    """All subtrees of equal height are isomorphic (checked on canonical strings)."""
    labels = canonical_labels(t)
    seen: dict[int, str] = {}
    for v, lab in labels.items():
        if seen.setdefault(t.node_height(v), lab) != lab:
            return False
    return True


def deletion_closure(t: Tree) -> dict[str, Tree]:
    """Every tree reachable from ``t`` by legal DI/DS edits, keyed by canonical form."""
    start = serialize_canonical(t)
    seen = {start: t}
    queue = deque([t])
    while queue:
        u = queue.popleft()
        for op in legal_deletions(u):
            w = apply(u, op)
            key = serialize_canonical(w)
            if key not in seen:
                seen[key] = w
                queue.append(w)
    return seen


class Reducer:
    """Decides whether subtrees shrink into self-nested targets by DI/DS edits.

    ``reduces(v, g)``: can the subtree at ``v`` end up as a child subtree of
    height g equal to the self-nested tree of height g?  If g == H(v) the
    root stays and every child slot of the target is taken by a distinct
    child that reduces into it (other children are pruned).  If g < H(v)
    the root of ``v`` is spliced out after pruning it down to one child of
    height H(v)-1, which must then reduce to g itself.
    """

    def __init__(self, t: Tree, s: ScalarProfile):
        s.check_realizable()
        self.t = t
        self.s = s
        self.labels = canonical_labels(t)
        self.memo: dict[tuple[str, int], bool] = {}

    def reduces(self, v: int, target: int) -> bool:
        key = (self.labels[v], target)
        if key in self.memo:
            return self.memo[key]
        g = self.t.node_height(v)
        kids = self.t.children(v)
        if target > g:
            result = False
        elif target < g:
            result = any(self.t.node_height(c) == g - 1 and self.reduces(c, target) for c in kids)
        elif g == 0:
            result = True
        else:
            slot_heights = [h2 for h2 in range(g) for _ in range(self.s[g, h2])]
            if len(slot_heights) > len(kids):
                result = False
            else:
                options = [[k for k, c in enumerate(kids) if self.reduces(c, sh)] for sh in slot_heights]
                result = _bipartite_match(options, len(kids))
        self.memo[key] = result
        return result


def reduces_to_sn(t: Tree, s: ScalarProfile) -> bool:
    """True iff DI/DS edits turn ``t`` into the self-nested tree with profile ``s``."""
    if t.height != s.dim:
        raise ValueError(f"height mismatch: tree {t.height}, profile {s.dim}")
    return Reducer(t, s).reduces(t.root, s.dim)


def scalar_profiles(dim: int, max_nodes: int) -> Iterator[ScalarProfile]:
    """Every realizable scalar profile of dimension ``dim`` with at most ``max_nodes`` nodes."""
    if max_nodes < 1:
        return

    def rec(rows: tuple, sizes: list[int]):
        h = len(rows)
        if h == dim:
            yield ScalarProfile(rows)
            return
        h += 1
        for row in _row_choices(h, sizes, max_nodes - (dim - h)):
            yield from rec(rows + (row,), sizes + [1 + sum(x * sizes[j] for j, x in enumerate(row))])

    yield from rec((), [1])


def nest_embedded_optima(t: Tree) -> list[ScalarProfile]:
    """Profiles of all largest self-nested trees reachable from ``t`` by deletions.

    Searches profile space with :func:`reduces_to_sn`; this scales further
    than the deletion closure and is cross-checked against it in the tests.
    """
    found = [s for s in scalar_profiles(t.height, len(t)) if reduces_to_sn(t, s)]
    best = max(sn_sizes(s)[-1] for s in found)
    return [s for s in found if sn_sizes(s)[-1] == best]


def brute_nest_embedded_all(t: Tree) -> list[Tree]:
    """All largest self-nested trees in the deletion closure of ``t``."""
    best = [w for w in deletion_closure(t).values() if is_self_nested(w)]
    n = max(len(w) for w in best)
    return [w for w in best if len(w) == n]


def brute_nest_embedded(t: Tree) -> Tree:
    """The largest self-nested tree reachable from ``t`` by DI/DS edits.

    Raises :class:`OracleError` when several non-isomorphic trees tie.
    """
    best = brute_nest_embedded_all(t)
    if len(best) > 1:
        raise OracleError(f"{len(best)} distinct optima with {len(best[0])} nodes: NeST not unique")
    return best[0]


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Every unordered rooted tree with ``n`` nodes, once, in canonical form.

    Trees of size n are obtained by hanging a new leaf under each node of
    each tree of size n-1, deduplicated on canonical strings.
    """
    if not 1 <= n <= MAX_ORACLE_NODES:
        raise ValueError(f"n must be in 1..{MAX_ORACLE_NODES}")
    level = {"()": leaf()}
    for _ in range(n - 1):
        nxt: dict[str, Tree] = {}
        for t in level.values():
            for v in t.nodes:
                kids = {u: list(t.children(u)) for u in t.nodes}
                w = t.next_id
                kids[v].append(w)
                kids[w] = []
                grown = build(kids, t.root)
                nxt.setdefault(serialize_canonical(grown), grown)
        level = nxt
    for key in sorted(level):
        yield parse_tree(key)
