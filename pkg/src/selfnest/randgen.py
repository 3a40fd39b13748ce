"""Seeded random unordered trees.

The generator is fixed by algorithm (splitmix64 + uniform attachment) rather
than by Python's ``random`` so the same (seed, size) gives the same tree in
any implementation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .tree import Tree, build

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Integer in [0, n) as ``next_u64() % n``."""
        return self.next_u64() % n


class Model(enum.Enum):
    UNIFORM_ATTACHMENT = "uniform-attachment"


@dataclass(frozen=True)
class GenSpec:
    n_nodes: int
    seed: int = 0
    model: Model = Model.UNIFORM_ATTACHMENT

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be >= 1")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def random_tree(spec: GenSpec) -> Tree:
    """Node i (1 <= i < n) attaches under a uniformly drawn node among 0..i-1."""
    rng = SplitMix64(spec.seed)
    children: dict[int, list[int]] = {0: []}
    for i in range(1, spec.n_nodes):
        children[rng.below(i)].append(i)
        children[i] = []
    return build(children, 0)


def trial_seed(master_seed: int, size: int, trial: int) -> int:
    """Counter-based per-trial seed, independent of the order trials run in."""
    return mix64(master_seed ^ mix64((size << 32) | trial))
