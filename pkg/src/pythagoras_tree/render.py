"""SVG output for tree layouts."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .hierarchy import Hierarchy
from .layout import TreeLayout

RGB = tuple[int, int, int]


@dataclass(frozen=True)
class RenderConfig:
    padding: float = 0.05
    color_start: RGB = (8, 48, 107)
    color_end: RGB = (198, 219, 239)
    stroke: RGB | None = (255, 255, 255)
    stroke_width: float = 0.5
    background: RGB | None = None
    pixels: int = 1024

    def __post_init__(self):
        if self.padding < 0:
            raise ValueError("padding must be non-negative")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def depth_color(depth: int, max_depth: int, cfg: RenderConfig = RenderConfig()) -> RGB:
    t = depth / max(1, max_depth)
    return tuple(_round_half_up(s + (e - s) * t) for s, e in zip(cfg.color_start, cfg.color_end))


def _hex(rgb: RGB) -> str:
    return "#%02x%02x%02x" % rgb


def _num(x: float) -> str:
    s = "%.6f" % x
    return "0.000000" if s == "-0.000000" else s


def render_svg(layout: TreeLayout, h: Hierarchy, cfg: RenderConfig = RenderConfig()) -> str:
    """One polygon per node, in id (breadth-first) order.

    Scene coordinates are y-up; they are shifted so the drawing's bounding
    box starts at (0, 0) and flipped for SVG's y-down axis.
    """
    xmin, ymin, xmax, ymax = (float(v) for v in layout.bounds())
    pad = cfg.padding
    w, hgt = xmax - xmin, ymax - ymin
    vb = (-pad, -pad, w + 2 * pad, hgt + 2 * pad)
    scale = cfg.pixels / max(vb[2], vb[3]) if max(vb[2], vb[3]) > 0 else 1.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="%s" width="%s" height="%s">'
        % (" ".join(map(_num, vb)), _num(vb[2] * scale), _num(vb[3] * scale)),
    ]
    if cfg.background is not None:
        lines.append(
            '<rect x="%s" y="%s" width="%s" height="%s" fill="%s"/>'
            % (*map(_num, vb), _hex(cfg.background))
        )
    if cfg.stroke is not None:
        lines.append(
            '<g stroke="%s" stroke-width="%s" vector-effect="non-scaling-stroke" stroke-linejoin="round">'
            % (_hex(cfg.stroke), _num(cfg.stroke_width))
        )
    else:
        lines.append('<g stroke="none">')
    corners = layout.corners()
    xs = corners[:, :, 0] - xmin
    ys = ymax - corners[:, :, 1]
    max_depth = h.max_depth
    palette = [_hex(depth_color(d, max_depth, cfg)) for d in range(max_depth + 1)]
    for i, rec in enumerate(h.nodes):
        pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in zip(xs[i], ys[i]))
        lines.append(f'<polygon points="{pts}" fill="{palette[rec.depth]}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)
