"""Timing of quadtree-backed collision detection against the all-pairs scan."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import astuple, dataclass, fields

import numpy as np

from .collision import build_index, find_collisions, find_collisions_naive
from .corpus import random_tree
from .hierarchy import assign_subtree_weights
from .layout import LayoutConfig, initial_layout


class BenchMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class BenchRow:
    n: int
    reps: int
    collisions: int
    quadtree_depth: int
    index_s: float
    naive_s: float

    @property
    def speedup(self) -> float:
        return self.naive_s / self.index_s if self.index_s > 0 else float("inf")


def bench_layout(n: int, seed: int = 7, cfg: LayoutConfig = LayoutConfig()):
    """The unresolved layout of a seeded random tree with ``n`` nodes."""
    h = assign_subtree_weights(random_tree(n, seed))
    return h, initial_layout(h, cfg)


def _best_of(fn, reps):
    best, result = float("inf"), None
    for _ in range(reps):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def bench_collision(sizes, reps: int = 5, seed: int = 7, eps_rel: float = 1e-9, naive_reps: int | None = None):
    """Best-of-``reps`` wall time of one detection pass per method and size.

    The quadtree timing includes building the index. Raises BenchMismatch
    if the two methods ever disagree.
    """
    rows = []
    for n in sizes:
        _, layout = bench_layout(int(n), seed)
        eps = eps_rel * float(layout.width[0])

        def indexed():
            q = build_index(layout)
            return q, find_collisions(layout, q, eps)

        t_index, (q, fast) = _best_of(indexed, reps)
        t_naive, slow = _best_of(lambda: find_collisions_naive(layout, eps), naive_reps or reps)
        if not np.array_equal(fast, slow):
            raise BenchMismatch(f"n={n}: quadtree found {len(fast)} pairs, naive {len(slow)}")
        rows.append(BenchRow(int(n), reps, len(fast), q.depth, t_index, t_naive))
    return rows


def bench_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(BenchRow)] + ["speedup"])
    for r in rows:
        w.writerow([*astuple(r), "%.3f" % r.speedup])
    return buf.getvalue()
