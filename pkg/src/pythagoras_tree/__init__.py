"""Generalized Pythagoras tree layouts with force-directed overlap removal."""
from .collision import QuadtreeIndex, build_index, find_collisions, find_collisions_naive, window_query
from .geometry import PHI, EllipseArc, OrientedRect, Point, chord_rect, ellipse_point, rect_aabb, rects_overlap, rescale_angles
from .hierarchy import Hierarchy, assign_subtree_weights, load_hierarchy, scan_filesystem
from .layout import LayoutConfig, TreeLayout, compute_rects, initial_layout, node_height
from .render import RenderConfig, depth_color, render_svg
from .solver import SolverConfig, apply_forces, lowest_common_ancestor, solve, step, tally_counters
from .stats import fit_exponential, read_stats_csv, write_stats_csv

__version__ = "0.1.0"
