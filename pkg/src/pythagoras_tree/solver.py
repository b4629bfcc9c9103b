"""Force-directed overlap removal.

Every iteration, each overlapping pair (u, v) votes: their lowest common
ancestor should spread its ellipse (taller, pushing the two subtrees
apart) and every node on the paths from u and v up to it should narrow
its own (flatter, pulling its subtree in). Per node, whichever vote wins
scales ``b`` up by ``push_factor`` (capped) or down by ``pull_factor``;
a decaying neutral force then draws ``b`` back toward 1. The tree is
relaid out and the loop repeats until nothing overlaps.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .collision import build_index, find_collisions
from .geometry import PHI
from .hierarchy import Hierarchy
from .layout import LayoutConfig, TreeLayout, compute_rects, initial_layout

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    push_factor: float = 1.1
    pull_factor: float = 0.9
    b_cap: float = PHI
    lr_init: float = 0.1
    lr_decay: float = 0.9
    max_iterations: int = 10_000
    eps_rel: float = 1e-9

    def __post_init__(self):
        if not self.push_factor > 1:
            raise ValueError("push_factor must exceed 1")
        if not 0 < self.pull_factor < 1:
            raise ValueError("pull_factor must be in (0, 1)")
        if not self.b_cap >= 1:
            raise ValueError("b_cap must be at least 1")
        if not 0 <= self.lr_init < 1:
            raise ValueError("lr_init must be in [0, 1)")


@dataclass(frozen=True)
class IterationStats:
    iteration: int
    collisions: int
    max_b: float
    min_b: float
    wall_time: float | None = None


@dataclass
class SolveResult:
    layout: TreeLayout
    stats: list[IterationStats] = field(default_factory=list)
    resolved: bool = False
    collisions: np.ndarray | None = None

    @property
    def iterations(self) -> int:
        return self.stats[-1].iteration if self.stats else 0

    @property
    def status(self) -> str:
        return "resolved" if self.resolved else "iteration-cap"


def lowest_common_ancestor(h: Hierarchy, u: int, v: int) -> int:
    parent, depth = h.parent, h.depth
    while depth[u] > depth[v]:
        u = parent[u]
    while depth[v] > depth[u]:
        v = parent[v]
    while u != v:
        u, v = parent[u], parent[v]
    return int(u)


def tally_counters(h: Hierarchy, layout: TreeLayout, pairs) -> TreeLayout:
    """Add one spread vote per pair at its LCA and narrow votes on both paths.

    The narrow path runs from each endpoint up to, but not including, the
    LCA; an endpoint that is itself the LCA contributes no narrow votes.
    All pairs are walked upward together.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    spread = np.array(layout.spread, dtype=np.int64)
    narrow = np.array(layout.narrow, dtype=np.int64)
    if len(pairs) == 0:
        return replace(layout, spread=spread, narrow=narrow)
    parent, depth = h.parent, h.depth
    u, v = pairs[:, 0].copy(), pairs[:, 1].copy()
    while True:
        deeper_u = depth[u] > depth[v]
        deeper_v = depth[v] > depth[u]
        level = (depth[u] == depth[v]) & (u != v)
        move_u = deeper_u | level
        move_v = deeper_v | level
        if not (move_u.any() or move_v.any()):
            break
        np.add.at(narrow, u[move_u], 1)
        np.add.at(narrow, v[move_v], 1)
        u[move_u] = parent[u[move_u]]
        v[move_v] = parent[v[move_v]]
    np.add.at(spread, u, 1)
    return replace(layout, spread=spread, narrow=narrow)


def apply_forces(layout: TreeLayout, cfg: SolverConfig = SolverConfig()) -> TreeLayout:
    """Push, pull and neutral updates of ``b``; decays ``lr`` and clears counters."""
    b = np.asarray(layout.b, dtype=float)
    spread, narrow = layout.spread, layout.narrow
    b = np.where(
        spread > narrow,
        np.minimum(cfg.push_factor * b, cfg.b_cap),
        np.where(narrow > spread, cfg.pull_factor * b, b),
    )
    b = b + (1 - b) * layout.lr
    return replace(
        layout,
        b=b,
        lr=layout.lr * cfg.lr_decay,
        spread=np.zeros_like(layout.spread),
        narrow=np.zeros_like(layout.narrow),
    )


def _collisions(layout, eps):
    return find_collisions(layout, build_index(layout), eps)


def _stats(t, pairs, layout, started):
    return IterationStats(t, len(pairs), float(layout.b.max()), float(layout.b.min()), time.perf_counter() - started)


def step(
    h: Hierarchy,
    layout: TreeLayout,
    pairs,
    cfg_layout: LayoutConfig = LayoutConfig(),
    cfg: SolverConfig = SolverConfig(),
):
    """One relaxation iteration; returns the new layout and its collisions."""
    layout = tally_counters(h, layout, pairs)
    layout = apply_forces(layout, cfg)
    layout = compute_rects(h, layout, cfg_layout)
    return layout, _collisions(layout, cfg.eps_rel * cfg_layout.root_width)


def solve(
    h: Hierarchy,
    cfg_layout: LayoutConfig = LayoutConfig(),
    cfg: SolverConfig = SolverConfig(),
    layout: TreeLayout | None = None,
    callback=None,
) -> SolveResult:
    """Relax until no rectangles overlap or ``cfg.max_iterations`` is hit.

    ``stats[0]`` describes the starting layout. ``callback(t, layout,
    pairs)`` is called after every iteration, including t = 0.
    """
    started = time.perf_counter()
    if layout is None:
        layout = initial_layout(h, cfg_layout, cfg.lr_init)
    eps = cfg.eps_rel * cfg_layout.root_width
    pairs = _collisions(layout, eps)
    stats = [_stats(0, pairs, layout, started)]
    if callback is not None:
        callback(0, layout, pairs)
    t = 0
    while len(pairs) and t < cfg.max_iterations:
        t += 1
        tick = time.perf_counter()
        layout, pairs = step(h, layout, pairs, cfg_layout, cfg)
        stats.append(_stats(t, pairs, layout, tick))
        if callback is not None:
            callback(t, layout, pairs)
        log.debug("iteration %d: %d collisions", t, len(pairs))
    resolved = len(pairs) == 0
    if not resolved:
        log.warning("stopped after %d iterations with %d collisions left", t, len(pairs))
    return SolveResult(layout, stats, resolved, pairs)
