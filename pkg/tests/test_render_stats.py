import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from pythagoras_tree.corpus import random_tree
from pythagoras_tree.layout import initial_layout
from pythagoras_tree.render import RenderConfig, depth_color, render_svg
from pythagoras_tree.solver import IterationStats, solve
from pythagoras_tree.stats import (
    STATS_HEADER,
    InsufficientData,
    fit_exponential,
    read_stats_csv,
    write_stats_csv,
)

from conftest import tree_from_parents, weighted

NS = "{http://www.w3.org/2000/svg}"


def polygons(svg):
    root = ET.fromstring(svg.encode())
    return root, root.findall(f".//{NS}polygon")


def points(poly):
    return [tuple(map(float, p.split(","))) for p in poly.get("points").split()]


class TestColor:
    def test_endpoints_and_midpoint(self):
        cfg = RenderConfig(color_start=(0, 0, 0), color_end=(200, 100, 50))
        assert depth_color(0, 4, cfg) == (0, 0, 0)
        assert depth_color(4, 4, cfg) == (200, 100, 50)
        assert depth_color(2, 4, cfg) == (100, 50, 25)

    def test_half_rounds_up(self):
        cfg = RenderConfig(color_start=(0, 0, 0), color_end=(1, 3, 5))
        assert depth_color(1, 2, cfg) == (1, 2, 3)

    def test_single_level(self):
        assert depth_color(0, 0) == RenderConfig().color_start


class TestSvg:
    def test_single_square_viewbox(self):
        h = weighted(tree_from_parents([None]))
        pad = 0.05
        root, polys = polygons(render_svg(initial_layout(h), h, RenderConfig(padding=pad)))
        vb = [float(x) for x in root.get("viewBox").split()]
        assert vb == pytest.approx([-pad, -pad, 1 + 2 * pad, 1 + 2 * pad], abs=1e-12)
        assert len(polys) == 1
        # y flipped: the root's base runs along the bottom of the drawing
        assert points(polys[0]) == [(0, 1), (1, 1), (1, 0), (0, 0)]

    def test_polygons_in_breadth_first_order(self):
        h = weighted(random_tree(80, 3))
        lay = initial_layout(h)
        _, polys = polygons(render_svg(lay, h))
        assert len(polys) == h.n
        xmin, _, _, ymax = lay.bounds()
        corners = lay.corners()
        for i, poly in enumerate(polys):
            expected = np.column_stack([corners[i, :, 0] - xmin, ymax - corners[i, :, 1]])
            assert np.allclose(points(poly), expected, rtol=0, atol=1e-6)
        fills = [p.get("fill") for p in polys]
        assert fills[0] == "#08306b"
        assert len(set(fills)) == h.max_depth + 1

    def test_fixed_precision(self):
        h = weighted(random_tree(30, 1))
        svg = render_svg(initial_layout(h), h)
        nums = re.findall(r"-?\d+\.\d+", svg[svg.index("<svg") :])
        assert nums and all(len(n.split(".")[1]) == 6 for n in nums)
        assert "-0.000000" not in svg

    def test_byte_identical(self):
        h = weighted(random_tree(1000, 2))
        lay = initial_layout(h)
        assert render_svg(lay, h) == render_svg(initial_layout(h), h)

    def test_background_and_no_stroke(self):
        h = weighted(tree_from_parents([None, 0]))
        svg = render_svg(initial_layout(h), h, RenderConfig(background=(255, 255, 255), stroke=None))
        assert 'fill="#ffffff"' in svg and 'stroke="none"' in svg
        ET.fromstring(svg.encode())

    def test_negative_padding(self):
        with pytest.raises(ValueError):
            RenderConfig(padding=-1)


def series(counts):
    return [IterationStats(t, c, 1.0 + t / 100, 1.0 - t / 100, 0.002) for t, c in enumerate(counts)]


class TestCsv:
    def test_lines_and_header(self):
        text = write_stats_csv(series([5, 3, 0]))
        lines = text.splitlines()
        assert lines[0] == ",".join(STATS_HEADER)
        assert len(lines) == 4

    def test_round_trip(self):
        s = series([9, 7, 2, 0])
        assert read_stats_csv(write_stats_csv(s)) == s

    def test_untimed_is_blank(self):
        text = write_stats_csv(series([1, 0]), timing=False)
        assert all(line.endswith(",") for line in text.splitlines()[1:])
        assert read_stats_csv(text)[0].wall_time is None

    def test_solve_rows(self, binary10):
        res = solve(binary10)
        lines = write_stats_csv(res.stats, timing=False).splitlines()
        assert len(lines) == res.iterations + 2
        assert lines[-1].split(",")[1] == "0"

    def test_errors(self):
        with pytest.raises(ValueError):
            write_stats_csv([])
        with pytest.raises(ValueError):
            read_stats_csv("a,b\n1,2\n")


class TestFit:
    def test_exact_exponential(self):
        t = np.arange(20)
        fit = fit_exponential(list(zip(t, 100 * np.exp(-0.5 * t))))
        assert fit.A == pytest.approx(100, rel=1e-9)
        assert fit.lam == pytest.approx(0.5, rel=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_constant(self):
        fit = fit_exponential([(t, 7) for t in range(5)])
        assert fit == (7.0, 0.0, 1.0)

    def test_zero_rows_dropped(self):
        fit = fit_exponential(series([8, 4, 2, 0]))
        assert fit.lam == pytest.approx(math.log(2), rel=1e-12)

    def test_against_polyfit(self):
        rng = np.random.default_rng(0)
        t = np.arange(40)
        c = np.maximum(1, np.round(300 * np.exp(-0.1 * t) * rng.uniform(0.7, 1.3, 40)))
        fit = fit_exponential(list(zip(t, c)))
        slope, intercept = np.polyfit(t, np.log(c), 1)
        assert fit.lam == pytest.approx(-slope, rel=1e-10)
        assert fit.A == pytest.approx(math.exp(intercept), rel=1e-10)
        resid = np.log(c) - (intercept + slope * t)
        r2 = 1 - resid @ resid / np.sum((np.log(c) - np.log(c).mean()) ** 2)
        assert fit.r_squared == pytest.approx(r2, rel=1e-10)
        assert np.allclose(fit.predict(t), np.exp(intercept + slope * t))

    @pytest.mark.parametrize("counts", [[], [3, 0, 0, 0], [4, 2]])
    def test_insufficient(self, counts):
        with pytest.raises(InsufficientData):
            fit_exponential(series(counts))

    def test_pinned_random_run(self):
        res = solve(weighted(random_tree(1000, 5)))
        fit = fit_exponential(res.stats)
        assert res.iterations == 59
        assert fit.lam == pytest.approx(0.07599305821472384, rel=1e-9)
        assert fit.r_squared == pytest.approx(0.9653910968669814, rel=1e-9)
