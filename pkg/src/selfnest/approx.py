"""Self-nested approximations computed on height profiles.

``nest`` returns the nearest embedding self-nested tree (smallest
self-nested tree reachable by AI/AS insertions), ``nest_embedded`` the
nearest embedded one (largest reachable by DI/DS deletions).  Both walk
the profile row by row (h1 ascending) and, inside a row, column by column
from h2 = h1-1 down to 0, turning each vector into a single integer.

Operation counters treat one component-wise vector operation as one unit,
so ``nest`` performs at most ``NEST_OPS_CONSTANT * H**2 * max(D, 1)`` units
and ``nest_embedded`` at most ``NEST_EMBEDDED_OPS_CONSTANT * H**2``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .profile import HeightProfile, ScalarProfile, compute_profile, sn_node_count, sn_tree_from_profile
from .tree import Tree

NEST_OPS_CONSTANT = 2
NEST_EMBEDDED_OPS_CONSTANT = 1

PROPAGATIONS = ("clamped", "literal")
CARRY_RULES = ("always", "unary-h2", "unary-above")


class NegativeRowError(AssertionError):
    """A finalized NEST entry was negative before clamping."""


def _debug_enabled(debug):
    if debug is not None:
        return debug
    return os.environ.get("SELFNEST_DEBUG_ASSERT") == "1"


@dataclass(frozen=True)
class ApproxResult:
    kind: str  # "nest" or "nest_embedded"
    profile: ScalarProfile
    n_input: int
    op_count: int
    n_output: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n_output", sn_node_count(self.profile))

    @cached_property
    def tree(self) -> Tree:
        return sn_tree_from_profile(self.profile)

    @property
    def distance(self) -> int:
        return abs(self.n_output - self.n_input)

    @property
    def delta(self) -> Fraction:
        if self.kind == "nest":
            return delta_nest_from_counts(self.n_input, self.n_output)
        return delta_nest_embedded_from_counts(self.n_input, self.n_output)


def _working_row(p: HeightProfile, h1: int) -> np.ndarray:
    # row[h2] is the vector rho(h1, h2); int64 so deficits may go negative
    row = np.zeros((h1, p.n_vertices(h1)), dtype=np.int64)
    for i, g in enumerate(p.rows[h1 - 1]):
        for h2, c in g.items():
            row[h2, i] = c
    return row


def nest_profile(p: HeightProfile, propagation: str = "clamped", debug=None) -> tuple[ScalarProfile, int]:
    """Scalar profile of the NEST and the operation count.

    For each column the deficit of every node relative to the column max is
    covered by promoting that node's own shorter subtrees, tallest first.
    With ``propagation="clamped"`` a column never drops below zero when its
    subtrees are used up.  ``"literal"`` subtracts the full incoming deficit
    and lets entries go negative; that reading double counts deficits and
    is kept only for comparison.
    """
    if propagation not in PROPAGATIONS:
        raise ValueError(f"propagation must be one of {PROPAGATIONS}")
    debug = _debug_enabled(debug)
    rows = []
    ops = 0
    for h1 in range(1, p.dim + 1):
        rho = _working_row(p, h1)
        out = [0] * h1
        for h2 in range(h1 - 1, -1, -1):
            ops += 1
            top = int(rho[h2].max())
            if top < 0 and debug:
                raise NegativeRowError(f"entry ({h1},{h2}) finalized at {top} before clamping")
            delta = top - rho[h2]
            rho[h2] = top
            out[h2] = max(top, 0)
            i = 1
            while delta.any() and i <= h2:
                ops += 1
                lower = rho[h2 - i]
                delta, rho[h2 - i] = np.maximum(delta - lower, 0), lower - delta
                if propagation == "clamped":
                    np.maximum(rho[h2 - i], 0, out=rho[h2 - i])
                i += 1
        rows.append(tuple(out))
    return ScalarProfile(tuple(rows)), ops


def _is_unary_row(row) -> bool:
    return row[-1] == 1 and not any(row[:-1])


def nest_embedded_profile(p: HeightProfile, carry: str = "always") -> tuple[ScalarProfile, int]:
    """Scalar profile of the NeST and the operation count.

    Each column is lowered to its minimum.  The excess subtrees of height
    h2 are shortened by one level instead of being deleted, which adds them
    to column h2-1.  Any subtree of height >= 1 can be shortened: prune it
    down to a single tallest child, then splice out its root.

    ``carry`` selects when the excess moves down a column: ``"always"``
    (optimal), ``"unary-h2"`` only if the finished row h2 is a unary chain,
    ``"unary-above"`` only if row h1-1 is.  The last two are kept for
    comparison against the brute-force oracle.
    """
    if carry not in CARRY_RULES:
        raise ValueError(f"carry must be one of {CARRY_RULES}")
    rows: list[tuple[int, ...]] = []
    ops = 0
    for h1 in range(1, p.dim + 1):
        rho = _working_row(p, h1)
        out = [0] * h1
        for h2 in range(h1 - 1, -1, -1):
            ops += 1
            low = int(rho[h2].min())
            delta = rho[h2] - low
            out[h2] = low
            if h2 == 0:
                continue
            if carry == "always":
                ok = True
            elif carry == "unary-h2":
                ok = _is_unary_row(rows[h2 - 1])
            else:
                ok = h1 >= 2 and _is_unary_row(rows[h1 - 2])
            if ok:
                rho[h2 - 1] += delta
        rows.append(tuple(out))
    return ScalarProfile(tuple(rows)), ops


def nest(t: Tree, propagation: str = "clamped", debug=None) -> ApproxResult:
    s, ops = nest_profile(compute_profile(t), propagation, debug)
    return ApproxResult("nest", s, len(t), ops)


def nest_embedded(t: Tree, carry: str = "always") -> ApproxResult:
    s, ops = nest_embedded_profile(compute_profile(t), carry)
    return ApproxResult("nest_embedded", s, len(t), ops)


def delta_nest_from_counts(n_tree: int, n_nest: int) -> Fraction:
    return Fraction(2 * n_tree - n_nest, n_tree)


def delta_nest_embedded_from_counts(n_tree: int, n_nest_embedded: int) -> Fraction:
    return Fraction(n_nest_embedded, n_tree)


def delta_nest(t: Tree) -> Fraction:
    """Self-nestedness index 1 - D(NEST, t)/#V(t); may be negative."""
    return nest(t).delta


def delta_nest_embedded(t: Tree) -> Fraction:
    """Self-nestedness index #V(NeST)/#V(t), in (0, 1]."""
    return nest_embedded(t).delta
