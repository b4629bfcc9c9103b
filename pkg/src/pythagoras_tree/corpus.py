"""Synthetic hierarchies used by the tests, benchmarks and demos.

All generators return unweighted trees (weights are the 0 sentinel); run
:func:`~pythagoras_tree.hierarchy.assign_subtree_weights` before layout.
"""
from __future__ import annotations

import numpy as np

from .hierarchy import Hierarchy, build_hierarchy


def _tree(parents) -> Hierarchy:
    return build_hierarchy([f"n{i}" for i in range(len(parents))], parents)


def complete_tree(branching: int, depth: int) -> Hierarchy:
    """Every internal node has ``branching`` children; leaves sit at ``depth``."""
    parents: list[int | None] = [None]
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for _ in range(branching):
                nxt.append(len(parents))
                parents.append(p)
        frontier = nxt
    return _tree(parents)


def chain_with_siblings(depth: int) -> Hierarchy:
    """A spine of ``depth`` edges where each spine node also has one leaf."""
    parents: list[int | None] = [None]
    spine = 0
    for _ in range(depth):
        nxt = len(parents)
        parents += [spine, spine]
        spine = nxt
    return _tree(parents)


def fan_out(leaves: int) -> Hierarchy:
    return _tree([None] + [0] * leaves)


def self_similar(order: int) -> Hierarchy:
    """A node of order d has children of orders d-1, d-2, d-2 (order 0 is a leaf)."""
    parents: list[int | None] = [None]
    stack = [(0, order)]
    while stack:
        i, d = stack.pop()
        for child_order in (d - 1, d - 2, d - 2):
            if child_order < 0:
                continue
            stack.append((len(parents), child_order))
            parents.append(i)
    return _tree(parents)


def random_tree(n: int, seed: int) -> Hierarchy:
    """Random recursive tree: node i attaches to a uniform earlier node."""
    rng = np.random.default_rng(seed)
    parents: list[int | None] = [None]
    parents += [int(rng.integers(0, i)) for i in range(1, n)]
    return _tree(parents)


def random_trees(count: int = 20, low: int = 100, high: int = 5000, seed: int = 2024):
    """``count`` seeded random trees with sizes drawn from [low, high]."""
    rng = np.random.default_rng(seed)
    sizes = rng.integers(low, high + 1, size=count)
    return [(f"random-{i}-n{int(n)}", random_tree(int(n), seed + i)) for i, n in enumerate(sizes)]


def acceptance_corpus():
    """(name, hierarchy) pairs covering the shapes the solver must handle."""
    corpus = [
        ("binary-depth10", complete_tree(2, 10)),
        ("4ary-depth5", complete_tree(4, 5)),
        ("chain-depth200", chain_with_siblings(200)),
        ("fan-500", fan_out(500)),
        ("self-similar-11", self_similar(11)),
    ]
    return corpus + random_trees()
