"""Top-down construction of a generalized Pythagoras tree.

Each node is an oriented rectangle. Its children stand on chords of a
semi-ellipse raised over its top edge; the ellipse's height is the node's
``b`` times half the edge length. Only the ``b`` values (and the force
bookkeeping) carry over between calls to :func:`compute_rects`; all
coordinates are rebuilt from the root each time.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .geometry import (
    RESCALE_MAX_ITER,
    RESCALE_TOL,
    DegenerateChord,
    OrientedRect,
    Point,
    cos_sin_deg,
    rect_aabbs,
    rect_corners,
    rescale_groups,
)
from .hierarchy import Hierarchy

HEIGHT_MODES = ("square", "limited")


@dataclass(frozen=True)
class LayoutConfig:
    root_width: float = 1.0
    height_mode: str = "square"
    rescale_tol: float = RESCALE_TOL
    rescale_max_iter: int = RESCALE_MAX_ITER

    def __post_init__(self):
        if not self.root_width > 0:
            raise ValueError(f"root_width must be positive, got {self.root_width}")
        if self.height_mode not in HEIGHT_MODES:
            raise ValueError(f"height_mode must be one of {HEIGHT_MODES}, got {self.height_mode!r}")


@dataclass(frozen=True)
class NodeLayout:
    rect: OrientedRect
    b: float
    lr: float
    spread: int
    narrow: int
    original_height: float


@dataclass(frozen=True, eq=False)
class TreeLayout:
    """Per-node geometry and force state, as arrays indexed by node id.

    ``origin`` and ``base_dir`` are (n, 2); everything else is (n,).
    """

    origin: np.ndarray
    base_dir: np.ndarray
    width: np.ndarray
    height: np.ndarray
    b: np.ndarray
    lr: np.ndarray
    spread: np.ndarray
    narrow: np.ndarray
    original_height: np.ndarray
    max_depth: int = 0
    rescale_converged: bool = True

    def __len__(self):
        return len(self.width)

    @classmethod
    def from_rects(cls, origin, base_dir, width, height) -> "TreeLayout":
        """Wrap bare rectangle arrays (force state at its initial values)."""
        width = np.asarray(width, dtype=float)
        n = len(width)
        height = np.asarray(height, dtype=float)
        return cls(
            origin=np.asarray(origin, dtype=float).reshape(n, 2),
            base_dir=np.asarray(base_dir, dtype=float).reshape(n, 2),
            width=width,
            height=height,
            b=np.ones(n),
            lr=np.full(n, 0.1),
            spread=np.zeros(n, dtype=np.int64),
            narrow=np.zeros(n, dtype=np.int64),
            original_height=height.copy(),
        )

    def rect(self, i: int) -> OrientedRect:
        return OrientedRect(
            Point(*map(float, self.origin[i])),
            Point(*map(float, self.base_dir[i])),
            float(self.width[i]),
            float(self.height[i]),
        )

    def node(self, i: int) -> NodeLayout:
        return NodeLayout(
            self.rect(i),
            float(self.b[i]),
            float(self.lr[i]),
            int(self.spread[i]),
            int(self.narrow[i]),
            float(self.original_height[i]),
        )

    def corners(self) -> np.ndarray:
        return rect_corners(self.origin, self.base_dir, self.width, self.height)

    def aabbs(self) -> np.ndarray:
        return rect_aabbs(self.origin, self.base_dir, self.width, self.height)

    def bounds(self):
        """Overall (xmin, ymin, xmax, ymax)."""
        boxes = self.aabbs()
        return (*boxes[:, :2].min(axis=0), *boxes[:, 2:].max(axis=0))


def node_height(mode: str, width, original_height):
    """Rectangle height for a node of the given width."""
    if mode == "square":
        return width
    if mode == "limited":
        return np.minimum(original_height, width)
    raise ValueError(f"unknown height mode {mode!r}")


def compute_rects(h: Hierarchy, layout: TreeLayout, cfg: LayoutConfig = LayoutConfig()) -> TreeLayout:
    """Recompute every rectangle from the root down using ``layout.b``."""
    n = h.n
    weights = h.weights
    if np.any(weights <= 0):
        raise ValueError("hierarchy has unassigned weights; call assign_subtree_weights first")
    b = np.asarray(layout.b, dtype=float)
    origin = np.zeros((n, 2))
    base_dir = np.zeros((n, 2))
    width = np.zeros(n)
    height = np.zeros(n)
    base_dir[0] = (1.0, 0.0)
    width[0] = cfg.root_width
    height[0] = node_height(cfg.height_mode, cfg.root_width, layout.original_height[0])

    converged = True
    if n > 1:
        internal, starts = h.sibling_groups
        starts = starts - 1
        theta_l, theta_r, conv = rescale_groups(
            weights[1:], starts, b[internal], cfg.rescale_tol, cfg.rescale_max_iter
        )
        converged = bool(conv.all())
        cl, sl = cos_sin_deg(theta_l)
        cr, sr = cos_sin_deg(theta_r)
        parent = h.parent
        bounds = h.level_bounds
        for d in range(1, len(bounds) - 1):
            lo, hi = bounds[d], bounds[d + 1]
            p = parent[lo:hi]
            u = base_dir[p]
            v = np.stack([-u[:, 1], u[:, 0]], axis=1)
            a = width[p] / 2
            center = origin[p] + height[p][:, None] * v + a[:, None] * u
            bb = b[p] * a
            k = slice(lo - 1, hi - 1)
            left = center + (a * cl[k])[:, None] * u + (bb * sl[k])[:, None] * v
            right = center + (a * cr[k])[:, None] * u + (bb * sr[k])[:, None] * v
            chord = right - left
            w = np.hypot(chord[:, 0], chord[:, 1])
            if np.any(w < 1e-12 * a):
                bad = lo + int(np.argmin(w / a))
                raise DegenerateChord(f"node {bad} has chord length {w[bad - lo]}")
            origin[lo:hi] = left
            base_dir[lo:hi] = chord / w[:, None]
            width[lo:hi] = w
            height[lo:hi] = node_height(cfg.height_mode, w, layout.original_height[lo:hi])

    return replace(
        layout,
        origin=origin,
        base_dir=base_dir,
        width=width,
        height=height,
        max_depth=h.max_depth,
        rescale_converged=converged,
    )


def initial_layout(h: Hierarchy, cfg: LayoutConfig = LayoutConfig(), lr_init: float = 0.1) -> TreeLayout:
    """The classic generalized Pythagoras tree: every ellipse a semicircle.

    ``original_height`` is taken from this square layout and stays fixed
    for the limited height mode.
    """
    n = h.n
    blank = TreeLayout(
        origin=np.zeros((n, 2)),
        base_dir=np.zeros((n, 2)),
        width=np.zeros(n),
        height=np.zeros(n),
        b=np.ones(n),
        lr=np.full(n, float(lr_init)),
        spread=np.zeros(n, dtype=np.int64),
        narrow=np.zeros(n, dtype=np.int64),
        original_height=np.full(n, np.inf),
    )
    square = compute_rects(h, blank, replace(cfg, height_mode="square"))
    out = replace(square, original_height=square.height.copy())
    if cfg.height_mode != "square":
        out = compute_rects(h, out, cfg)
    return out


def with_b(layout: TreeLayout, b) -> TreeLayout:
    """Copy of ``layout`` with ellipse ratios replaced (geometry is stale)."""
    b = np.broadcast_to(np.asarray(b, dtype=float), layout.b.shape).copy()
    return replace(layout, b=b)
