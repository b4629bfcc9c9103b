"""Planar geometry for semi-ellipse child placement.

Angles are in degrees and run from 180 (left end of the parent's top edge)
to 0 (right end), so children read left to right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

PHI = (1 + math.sqrt(5)) / 2

RESCALE_TOL = 1e-6
RESCALE_MAX_ITER = 100


class DomainError(ValueError):
    pass


class DegenerateChord(ValueError):
    pass


class Point(NamedTuple):
    x: float
    y: float


class AABB(NamedTuple):
    xmin: float
    ymin: float
    xmax: float
    ymax: float


@dataclass(frozen=True)
class EllipseArc:
    """Upper half of an ellipse standing on a parent's top edge.

    ``a`` is half the edge length; the perpendicular semi-axis is
    ``b_ratio * a``.
    """

    center: Point
    u_axis: Point
    a: float
    b_ratio: float = 1.0

    @property
    def v_axis(self) -> Point:
        return Point(-self.u_axis.y, self.u_axis.x)


@dataclass(frozen=True)
class OrientedRect:
    origin: Point
    base_dir: Point
    width: float
    height: float

    @property
    def up_dir(self) -> Point:
        return Point(-self.base_dir.y, self.base_dir.x)

    def corners(self) -> list[Point]:
        """Bottom-left, bottom-right, top-right, top-left."""
        ox, oy = self.origin
        ux, uy = self.base_dir
        vx, vy = -uy, ux
        w, h = self.width, self.height
        return [
            Point(ox, oy),
            Point(ox + w * ux, oy + w * uy),
            Point(ox + w * ux + h * vx, oy + w * uy + h * vy),
            Point(ox + h * vx, oy + h * vy),
        ]

    @classmethod
    def axis_aligned(cls, x, y, width, height=None):
        return cls(Point(x, y), Point(1.0, 0.0), width, width if height is None else height)


@dataclass(frozen=True)
class AngleLayout:
    boundaries: tuple[float, ...]
    converged: bool = True
    error: float = 0.0

    @property
    def spans(self) -> list[tuple[float, float]]:
        b = self.boundaries
        return list(zip(b[:-1], b[1:]))


def cos_sin_deg(theta):
    """cos and sin of angles in degrees, exact at 0, 90 and 180."""
    theta = np.asarray(theta, dtype=float)
    r = np.radians(theta)
    c, s = np.cos(r), np.sin(r)
    c = np.where(theta == 90.0, 0.0, c)
    s = np.where(theta == 180.0, 0.0, s)
    return c, s


def ellipse_point(e: EllipseArc, theta: float) -> Point:
    if not 0.0 <= theta <= 180.0:
        raise DomainError(f"angle {theta} outside [0, 180]")
    c, s = cos_sin_deg(theta)
    c, s = float(c), float(s)
    (cx, cy), (ux, uy) = e.center, e.u_axis
    vx, vy = -uy, ux
    ax, bx = e.a * c, e.b_ratio * e.a * s
    return Point(cx + ax * ux + bx * vx, cy + ax * uy + bx * vy)


def _boundaries(alpha):
    phi = np.empty((alpha.shape[0], alpha.shape[1] + 1))
    phi[:, 0] = 180.0
    phi[:, 1:] = 180.0 - np.cumsum(alpha, axis=1)
    phi[:, -1] = 0.0
    return phi


def _unit_chords(phi, b):
    c, s = cos_sin_deg(phi)
    dx = c[:, :-1] - c[:, 1:]
    dy = (s[:, :-1] - s[:, 1:]) * b[:, None]
    return np.hypot(dx, dy)


def _rescale_block(w, b, tol, max_iter):
    """Angle rescaling for g sibling groups of equal size k (rows of ``w``).

    Returns boundaries (g, k+1), a converged flag per row, and the worst
    relative share error per row.
    """
    share = w / w.sum(axis=1, keepdims=True)
    alpha = 180.0 * share
    best_alpha = alpha.copy()
    best_err = np.full(len(w), np.inf)
    prev_err = np.full(len(w), np.inf)
    step = np.ones(len(w))
    converged = np.zeros(len(w), dtype=bool)
    active = np.ones(len(w), dtype=bool)
    for _ in range(max(1, max_iter)):
        chords = _unit_chords(_boundaries(alpha), b)
        cshare = chords / chords.sum(axis=1, keepdims=True)
        err = np.max(np.abs(cshare - share) / share, axis=1)
        better = active & (err < best_err)
        best_alpha[better] = alpha[better]
        best_err[better] = err[better]
        done = active & (err <= tol)
        converged |= done
        active &= ~done
        if not active.any():
            break
        # flat ellipses make the plain update flip between two states;
        # halve the exponent whenever a sweep fails to improve
        step = np.where(err >= prev_err, 0.5 * step, step)
        prev_err = err
        ratio = share / cshare
        new = alpha * np.where(step[:, None] == 1.0, ratio, ratio ** step[:, None])
        new *= 180.0 / new.sum(axis=1, keepdims=True)
        alpha = np.where(active[:, None], new, alpha)
    return _boundaries(best_alpha), converged, best_err


def rescale_angles(
    weights: Sequence[float],
    e: EllipseArc,
    tol: float = RESCALE_TOL,
    max_iter: int = RESCALE_MAX_ITER,
) -> AngleLayout:
    """Split the semi-ellipse into k arcs whose chords follow the weights.

    Starts from angles proportional to the weights, then repeatedly scales
    each angle by (weight share / chord share) and renormalizes to 180.
    If a sweep does not reduce the error, later sweeps use a damped
    factor (share ratio raised to 1/2, 1/4, ...). Stops once every chord
    share is within ``tol`` (relative) of its weight share. Otherwise the
    best layout seen is returned with ``converged=False``.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("need at least one weight")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    phi, conv, err = _rescale_block(w[None, :], np.array([float(e.b_ratio)]), tol, max_iter)
    return AngleLayout(tuple(float(x) for x in phi[0]), bool(conv[0]), float(err[0]))


def rescale_groups(weights, starts, b_ratios, tol=RESCALE_TOL, max_iter=RESCALE_MAX_ITER):
    """Batched :func:`rescale_angles` over contiguous sibling groups.

    ``weights`` holds all children; group g covers
    ``weights[starts[g]:starts[g+1]]`` (``starts`` has one extra trailing
    entry). Returns per-child (theta_left, theta_right) and a per-group
    converged flag. Each group goes through exactly the arithmetic of
    :func:`rescale_angles`, so results match it bit for bit.
    """
    weights = np.asarray(weights, dtype=float)
    starts = np.asarray(starts, dtype=np.int64)
    b_ratios = np.asarray(b_ratios, dtype=float)
    sizes = np.diff(starts)
    left = np.empty(len(weights))
    right = np.empty(len(weights))
    converged = np.ones(len(sizes), dtype=bool)
    for k in np.unique(sizes):
        if k == 0:
            continue
        groups = np.flatnonzero(sizes == k)
        idx = starts[groups][:, None] + np.arange(k)
        phi, conv, _ = _rescale_block(weights[idx], b_ratios[groups], tol, max_iter)
        left[idx] = phi[:, :-1]
        right[idx] = phi[:, 1:]
        converged[groups] = conv
    return left, right, converged


def chord_rect(e: EllipseArc, theta_left: float, theta_right: float, height: float) -> OrientedRect:
    if not 180.0 >= theta_left > theta_right >= 0.0:
        raise DomainError(f"need 180 >= left > right >= 0, got {theta_left}, {theta_right}")
    p = ellipse_point(e, theta_left)
    q = ellipse_point(e, theta_right)
    dx, dy = q.x - p.x, q.y - p.y
    width = math.hypot(dx, dy)
    if width < 1e-12 * e.a:
        raise DegenerateChord(f"chord of length {width} between {theta_left} and {theta_right}")
    return OrientedRect(p, Point(dx / width, dy / width), width, height)


def rect_aabb(r: OrientedRect) -> AABB:
    xs, ys = zip(*r.corners())
    return AABB(min(xs), min(ys), max(xs), max(ys))


def _shrink(r: OrientedRect, eps: float) -> OrientedRect | None:
    if r.width <= 2 * eps or r.height <= 2 * eps:
        return None
    (ox, oy), (ux, uy) = r.origin, r.base_dir
    origin = Point(ox + eps * (ux - uy), oy + eps * (uy + ux))
    return OrientedRect(origin, r.base_dir, r.width - 2 * eps, r.height - 2 * eps)


def rects_overlap(r1: OrientedRect, r2: OrientedRect, eps: float = 0.0) -> bool:
    """Separating-axis test on the interiors, each inset by ``eps``.

    Rectangles that only share an edge or a corner (up to ``eps``) do not
    overlap.
    """
    a, b = _shrink(r1, eps), _shrink(r2, eps)
    if a is None or b is None:
        return False
    ca, cb = a.corners(), b.corners()
    for axis in (a.base_dir, a.up_dir, b.base_dir, b.up_dir):
        pa = [p.x * axis.x + p.y * axis.y for p in ca]
        pb = [p.x * axis.x + p.y * axis.y for p in cb]
        if max(pa) <= min(pb) or max(pb) <= min(pa):
            return False
    return True


def rect_corners(origin, base_dir, width, height):
    """Corner array (n, 4, 2) for arrays of rectangles."""
    u = np.asarray(base_dir, dtype=float)
    v = np.stack([-u[:, 1], u[:, 0]], axis=1)
    o = np.asarray(origin, dtype=float)
    wu = u * np.asarray(width, dtype=float)[:, None]
    hv = v * np.asarray(height, dtype=float)[:, None]
    return np.stack([o, o + wu, o + wu + hv, o + hv], axis=1)


def rect_aabbs(origin, base_dir, width, height):
    """(n, 4) array of xmin, ymin, xmax, ymax."""
    c = rect_corners(origin, base_dir, width, height)
    return np.concatenate([c.min(axis=1), c.max(axis=1)], axis=1)


class ShrunkRects(NamedTuple):
    corners: np.ndarray
    u: np.ndarray
    v: np.ndarray
    valid: np.ndarray


def shrink_rects(origin, base_dir, width, height, eps=0.0) -> ShrunkRects:
    """Rectangles inset by ``eps`` on every side, ready for :func:`sat_overlap`."""
    u = np.asarray(base_dir, dtype=float)
    v = np.stack([-u[:, 1], u[:, 0]], axis=1)
    o = np.asarray(origin, dtype=float) + eps * (u + v)
    w = np.asarray(width, dtype=float) - 2 * eps
    h = np.asarray(height, dtype=float) - 2 * eps
    return ShrunkRects(rect_corners(o, u, w, h), u, v, (w > 0) & (h > 0))


def sat_overlap(r: ShrunkRects, i, j) -> np.ndarray:
    """Strict separating-axis overlap for index pairs ``(i[m], j[m])``."""
    ok = r.valid[i] & r.valid[j]
    ci, cj = r.corners[i], r.corners[j]
    for axis in (r.u[i], r.v[i], r.u[j], r.v[j]):
        pi = np.einsum("mkd,md->mk", ci, axis)
        pj = np.einsum("mkd,md->mk", cj, axis)
        ok &= (pi.max(axis=1) > pj.min(axis=1)) & (pj.max(axis=1) > pi.min(axis=1))
    return ok


def overlap_mask(origin, base_dir, width, height, i, j, eps=0.0):
    """Vectorized :func:`rects_overlap` for index pairs ``(i[m], j[m])``."""
    return sat_overlap(shrink_rects(origin, base_dir, width, height, eps), i, j)
