import math

import numpy as np
import pytest

from pythagoras_tree.corpus import complete_tree, random_tree
from pythagoras_tree.geometry import EllipseArc, Point, rescale_angles
from pythagoras_tree.hierarchy import assign_subtree_weights, build_hierarchy
from pythagoras_tree.layout import TreeLayout

_acceptance = []
_report_lines = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _acceptance.append((marker.args[0], marker.args[1], rep.outcome, item.name))


def pytest_terminal_summary(terminalreporter):
    if _report_lines:
        terminalreporter.section("acceptance measurements")
        for line in _report_lines:
            terminalreporter.write_line(line)
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, outcome, name in sorted(_acceptance):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number:>2}. {text} ({name})")


@pytest.fixture(scope="session")
def report():
    """Append a line to the measurements printed after the run."""
    return _report_lines.append


def weighted(h):
    return assign_subtree_weights(h)


def tree_from_parents(parents, weights=None):
    return build_hierarchy([f"n{i}" for i in range(len(parents))], parents, weights)


@pytest.fixture
def three_node():
    return weighted(tree_from_parents([None, 0, 0]))


@pytest.fixture
def binary10():
    return weighted(complete_tree(2, 10))


@pytest.fixture(params=[3, 17, 41])
def small_random(request):
    return weighted(random_tree(60, request.param))


def random_rects(rng, n, spread=3.0, size=(0.05, 1.0)):
    """A TreeLayout holding ``n`` random oriented rectangles."""
    ang = rng.uniform(0, 2 * np.pi, n)
    return TreeLayout.from_rects(
        rng.uniform(-spread, spread, (n, 2)),
        np.stack([np.cos(ang), np.sin(ang)], axis=1),
        rng.uniform(*size, n),
        rng.uniform(*size, n),
    )


def recursive_layout(h, b, root_width=1.0):
    """Second layout implementation: parent before child, scalar, plain math.

    Returns {node: (ox, oy, ux, uy, width, height)} for the square mode.
    """
    out = {}
    todo = [(0, 0.0, 0.0, 1.0, 0.0, root_width)]
    while todo:
        i, ox, oy, ux, uy, w = todo.pop()
        out[i] = (ox, oy, ux, uy, w, w)
        kids = h[i].children
        if not kids:
            continue
        vx, vy = -uy, ux
        a = w / 2
        cx, cy = ox + w * vx + a * ux, oy + w * vy + a * uy
        arc = EllipseArc(Point(0, 0), Point(1, 0), 1.0, float(b[i]))
        bd = rescale_angles([h[c].weight for c in kids], arc).boundaries
        pts = []
        for t in bd:
            r = math.radians(t)
            s, c = a * math.cos(r), b[i] * a * math.sin(r)
            pts.append((cx + s * ux + c * vx, cy + s * uy + c * vy))
        for c, (x1, y1), (x2, y2) in zip(kids, pts, pts[1:]):
            L = math.hypot(x2 - x1, y2 - y1)
            todo.append((c, x1, y1, (x2 - x1) / L, (y2 - y1) / L, L))
    return out
