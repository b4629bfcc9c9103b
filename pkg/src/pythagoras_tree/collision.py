"""Overlap detection between node rectangles.

A region quadtree over axis-aligned bounding boxes supplies candidate
pairs; each candidate is then confirmed with the exact separating-axis
test. :func:`find_collisions_naive` checks every pair and serves as the
reference.

Collision sets are returned as ``(m, 2)`` integer arrays of canonical
pairs (``u < v``), unique and sorted lexicographically.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .geometry import sat_overlap, shrink_rects

BUCKET_CAPACITY = 8
MAX_DEPTH = 16

# upper bound on query-by-entry blocks compared at once
_BLOCK = 1 << 21


class CollisionPair(NamedTuple):
    u: int
    v: int


class _Quad:
    __slots__ = ("region", "entries", "children", "depth")

    def __init__(self, region, depth):
        self.region = region
        self.depth = depth
        self.entries = None
        self.children = ()


def _boxes_intersect(q, boxes):
    """Closed intersection of one box ``q`` against an (m, 4) array."""
    return (boxes[:, 0] <= q[2]) & (q[0] <= boxes[:, 2]) & (boxes[:, 1] <= q[3]) & (q[1] <= boxes[:, 3])


class QuadtreeIndex:
    """Region quadtree of AABBs ``(xmin, ymin, xmax, ymax)``.

    A node splits once it holds more than ``capacity`` boxes and is above
    ``max_depth``. Boxes that straddle a split line stay at the node where
    they no longer fit a single quadrant; at ``max_depth`` buckets may
    overflow.
    """

    def __init__(self, boxes, capacity: int = BUCKET_CAPACITY, max_depth: int = MAX_DEPTH, ids=None):
        self.boxes = np.asarray(boxes, dtype=float).reshape(-1, 4)
        self.ids = np.arange(len(self.boxes)) if ids is None else np.asarray(ids, dtype=np.int64)
        self.capacity = capacity
        self.max_depth = max_depth
        if len(self.boxes):
            region = (*self.boxes[:, :2].min(axis=0), *self.boxes[:, 2:].max(axis=0))
        else:
            region = (0.0, 0.0, 0.0, 0.0)
        self.root = _Quad(tuple(float(x) for x in region), 0)
        self.node_count = 1
        self.depth = 0
        self._build(self.root, np.arange(len(self.boxes)))

    def _build(self, node, idx):
        stack = [(node, idx)]
        while stack:
            node, idx = stack.pop()
            self.depth = max(self.depth, node.depth)
            if len(idx) <= self.capacity or node.depth >= self.max_depth:
                node.entries = idx
                continue
            x0, y0, x1, y1 = node.region
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            b = self.boxes[idx]
            left, right = b[:, 2] <= mx, b[:, 0] >= mx
            low, high = b[:, 3] <= my, b[:, 1] >= my
            # a box touching the split line from the left belongs left
            right &= ~left
            high &= ~low
            quads = (
                ((x0, y0, mx, my), left & low),
                ((mx, y0, x1, my), right & low),
                ((x0, my, mx, y1), left & high),
                ((mx, my, x1, y1), right & high),
            )
            placed = np.zeros(len(idx), dtype=bool)
            children = []
            for region, mask in quads:
                if mask.any():
                    child = _Quad(region, node.depth + 1)
                    children.append(child)
                    stack.append((child, idx[mask]))
                    placed |= mask
            node.children = tuple(children)
            node.entries = idx[~placed]
            self.node_count += len(children)

    def __len__(self):
        return len(self.boxes)

    def window_query(self, box) -> set[int]:
        """Ids whose box intersects ``box`` (closed)."""
        q = np.asarray(box, dtype=float)
        hits = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if len(node.entries):
                e = node.entries
                hits.append(e[_boxes_intersect(q, self.boxes[e])])
            stack.extend(c for c in node.children if _boxes_intersect(q, np.array([c.region]))[0])
        if not hits:
            return set()
        return set(self.ids[np.concatenate(hits)].tolist())

    def query_all(self, queries) -> np.ndarray:
        """Run a window query for every row of ``queries`` in one traversal.

        Returns an (m, 2) array of (query row, entry position) hits.
        """
        queries = np.asarray(queries, dtype=float).reshape(-1, 4)
        out = []
        stack = [(self.root, np.arange(len(queries)))]
        while stack:
            node, qs = stack.pop()
            e = node.entries
            if len(e):
                eb = self.boxes[e]
                step = max(1, _BLOCK // len(e))
                for s in range(0, len(qs), step):
                    qq = qs[s : s + step]
                    qb = queries[qq]
                    hit = (
                        (eb[None, :, 0] <= qb[:, None, 2])
                        & (qb[:, None, 0] <= eb[None, :, 2])
                        & (eb[None, :, 1] <= qb[:, None, 3])
                        & (qb[:, None, 1] <= eb[None, :, 3])
                    )
                    qi, ei = np.nonzero(hit)
                    out.append(np.stack([qq[qi], e[ei]], axis=1))
            for c in node.children:
                sub = qs[_boxes_intersect(c.region, queries[qs])]
                if len(sub):
                    stack.append((c, sub))
        if not out:
            return np.zeros((0, 2), dtype=np.int64)
        return np.concatenate(out)

    def candidate_pairs(self) -> np.ndarray:
        """Pairs of indexed boxes whose interiors may intersect.

        Every box lives at exactly one quadtree node, and boxes at
        unrelated nodes can at most touch along a split line, so only pairs
        within one node or between a node and its ancestors are compared.
        Returns an (m, 2) array of entry positions; boxes that merely touch
        may or may not be included.
        """
        own, above = [], []
        empty = np.zeros(0, dtype=np.int64)
        stack = [(self.root, empty)]
        while stack:
            node, anc = stack.pop()
            e = node.entries
            if len(e):
                own.append(e)
                above.append(anc)
            if not node.children:
                continue
            down = np.concatenate([anc, e]) if len(e) else anc
            if len(down) == 0:
                stack.extend((c, empty) for c in node.children)
                continue
            b = self.boxes[down]
            x0, y0, x1, y1 = node.region
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            # everything in ``down`` already meets this node's region
            side = ((b[:, 0] <= mx, b[:, 2] >= mx), (b[:, 1] <= my, b[:, 3] >= my))
            for c in node.children:
                cx0, cy0 = c.region[:2]
                stack.append((c, down[side[0][cx0 >= mx] & side[1][cy0 >= my]]))
        if not own:
            return np.zeros((0, 2), dtype=np.int64)
        i, j = _ragged_cross(own, own)
        keep = i < j
        within = np.column_stack([np.concatenate(own)[i[keep]], np.concatenate(own)[j[keep]]])
        i, j = _ragged_cross(own, above)
        across = np.column_stack([np.concatenate(own)[i], np.concatenate(above)[j]])
        pairs = np.concatenate([within, across])
        return pairs[_overlap_rows(self.boxes[pairs[:, 0]], self.boxes[pairs[:, 1]])]


def _ragged_cross(left, right):
    """Index pairs into concat(left), concat(right) for each group's product."""
    nl = np.array([len(x) for x in left])
    nr = np.array([len(x) for x in right])
    sr = np.cumsum(nr) - nr
    group = np.repeat(np.arange(len(nl)), nl)
    li = np.arange(nl.sum())
    counts = nr[group]
    total = counts.sum()
    i = np.repeat(li, counts)
    offset = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    j = np.repeat(sr[group], counts) + offset
    return i, j


def _overlap_rows(a, b):
    return (a[:, 0] <= b[:, 2]) & (b[:, 0] <= a[:, 2]) & (a[:, 1] <= b[:, 3]) & (b[:, 1] <= a[:, 3])


def build_index(layout, capacity: int = BUCKET_CAPACITY, max_depth: int = MAX_DEPTH) -> QuadtreeIndex:
    return QuadtreeIndex(layout.aabbs(), capacity, max_depth)


def window_query(q: QuadtreeIndex, box) -> set[int]:
    return q.window_query(box)


def _canonical(pairs, n):
    if len(pairs) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    u = np.minimum(pairs[:, 0], pairs[:, 1])
    v = np.maximum(pairs[:, 0], pairs[:, 1])
    keep = u != v
    key = np.unique(u[keep] * n + v[keep])
    return np.stack([key // n, key % n], axis=1)


def find_collisions(layout, q: QuadtreeIndex | None = None, eps: float = 0.0) -> np.ndarray:
    """All overlapping pairs, using the quadtree for candidates.

    ``q`` must index this layout's bounding boxes in node order (as built
    by :func:`build_index`).
    """
    if q is None:
        q = build_index(layout)
    n = len(layout)
    cand = _canonical(q.ids[q.candidate_pairs()], n)
    if len(cand) == 0:
        return cand
    shrunk = shrink_rects(layout.origin, layout.base_dir, layout.width, layout.height, eps)
    return cand[sat_overlap(shrunk, cand[:, 0], cand[:, 1])]


def find_collisions_naive(layout, eps: float = 0.0) -> np.ndarray:
    """All overlapping pairs by checking each node against every later one.

    A vectorized bounding-box rejection precedes the exact test, but no
    spatial structure is used: the work is quadratic in the node count.
    """
    n = len(layout)
    shrunk = shrink_rects(layout.origin, layout.base_dir, layout.width, layout.height, eps)
    boxes = layout.aabbs()
    out = []
    for i in range(n - 1):
        rest = boxes[i + 1 :]
        j = i + 1 + np.flatnonzero(_boxes_intersect(boxes[i], rest))
        if len(j) == 0:
            continue
        j = j[sat_overlap(shrunk, np.full(len(j), i), j)]
        if len(j):
            out.append(np.stack([np.full(len(j), i), j], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(out)


def as_pair_set(pairs) -> set[CollisionPair]:
    return {CollisionPair(int(u), int(v)) for u, v in np.asarray(pairs).reshape(-1, 2)}
