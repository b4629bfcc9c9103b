import numpy as np
import pytest

from pythagoras_tree.collision import (
    QuadtreeIndex,
    as_pair_set,
    build_index,
    find_collisions,
    find_collisions_naive,
    window_query,
)
from pythagoras_tree.corpus import complete_tree
from pythagoras_tree.geometry import rects_overlap
from pythagoras_tree.layout import TreeLayout, initial_layout

from conftest import random_rects, weighted


def random_boxes(rng, n, spread=10.0):
    lo = rng.uniform(-spread, spread, (n, 2))
    return np.hstack([lo, lo + rng.uniform(0.01, 2.0, (n, 2))])


def linear_scan(boxes, q):
    return {
        i
        for i, b in enumerate(boxes)
        if b[0] <= q[2] and q[0] <= b[2] and b[1] <= q[3] and q[1] <= b[3]
    }


def scalar_pairs(layout, eps):
    n = len(layout)
    rects = [layout.rect(i) for i in range(n)]
    return {(i, j) for i in range(n) for j in range(i + 1, n) if rects_overlap(rects[i], rects[j], eps)}


class TestQuadtree:
    @pytest.mark.parametrize("n", [100, 500])
    def test_queries_against_linear_scan(self, n):
        rng = np.random.default_rng(n)
        boxes = random_boxes(rng, n)
        q = QuadtreeIndex(boxes)
        assert len(q) == n and q.depth > 0
        for box in random_boxes(rng, 100, spread=12.0):
            assert q.window_query(box) == linear_scan(boxes, box)

    def test_query_all_matches_window_query(self):
        rng = np.random.default_rng(8)
        boxes = random_boxes(rng, 400)
        queries = random_boxes(rng, 60, spread=12.0)
        q = QuadtreeIndex(boxes)
        hits = q.query_all(queries)
        for r, box in enumerate(queries):
            assert set(hits[hits[:, 0] == r, 1].tolist()) == q.window_query(box)

    def test_disjoint_and_root_queries(self):
        rng = np.random.default_rng(2)
        boxes = random_boxes(rng, 200)
        q = QuadtreeIndex(boxes)
        assert q.window_query((100, 100, 101, 101)) == set()
        assert q.window_query(q.root.region) == set(range(200))

    def test_depth_cap_on_identical_boxes(self):
        boxes = np.tile([0.0, 0.0, 1.0, 1.0], (50, 1))
        q = QuadtreeIndex(boxes)
        assert q.depth <= 16
        assert q.window_query((0.5, 0.5, 0.6, 0.6)) == set(range(50))

    def test_identical_points_reach_cap(self):
        boxes = np.vstack([np.tile([0.1, 0.1, 0.1, 0.1], (20, 1)), [[0, 0, 1, 1e-9]], [[1, 1, 1, 1]]])
        q = QuadtreeIndex(boxes)
        assert q.depth == 16
        assert q.window_query((0.1, 0.1, 0.1, 0.1)) == set(range(20))

    def test_single_box(self):
        q = QuadtreeIndex([[0, 0, 1, 1]])
        assert q.depth == 0 and q.node_count == 1
        assert window_query(q, (0.5, 0.5, 2, 2)) == {0}

    def test_empty(self):
        q = QuadtreeIndex(np.zeros((0, 4)))
        assert q.window_query((0, 0, 1, 1)) == set()
        assert len(q.candidate_pairs()) == 0

    def test_insertion_order_independent(self):
        rng = np.random.default_rng(4)
        boxes = random_boxes(rng, 300)
        perm = rng.permutation(300)
        a = QuadtreeIndex(boxes)
        b = QuadtreeIndex(boxes[perm], ids=perm)
        for box in random_boxes(rng, 50, spread=12.0):
            assert a.window_query(box) == b.window_query(box)

    def test_candidate_pairs_cover_all_box_overlaps(self):
        rng = np.random.default_rng(6)
        boxes = random_boxes(rng, 400)
        cand = QuadtreeIndex(boxes).candidate_pairs()
        got = {tuple(sorted(p)) for p in cand.tolist()}
        for i in range(400):
            for j in linear_scan(boxes, boxes[i]):
                if j <= i:
                    continue
                # interiors meet: the pair must be a candidate
                if boxes[i][0] < boxes[j][2] and boxes[j][0] < boxes[i][2] and boxes[i][1] < boxes[j][3] and boxes[j][1] < boxes[i][3]:
                    assert (i, j) in got


class TestFindCollisions:
    def test_matches_naive_on_random_layouts(self):
        rng = np.random.default_rng(2024)
        total = 0
        for _ in range(200):
            n = int(rng.integers(2, 501))
            lay = random_rects(rng, n, spread=float(rng.uniform(0.5, 8.0)))
            eps = 1e-9 * float(lay.width[0])
            fast = find_collisions(lay, eps=eps)
            assert np.array_equal(fast, find_collisions_naive(lay, eps))
            total += len(fast)
        assert total > 0

    def test_matches_scalar_predicate(self):
        rng = np.random.default_rng(11)
        lay = random_rects(rng, 150, spread=2.0)
        assert as_pair_set(find_collisions(lay, eps=1e-9)) == scalar_pairs(lay, 1e-9)

    def test_twelve_children_depth_three(self):
        h = weighted(complete_tree(12, 3))
        lay = initial_layout(h)
        eps = 1e-9 * lay.width[0]
        fast = find_collisions(lay, build_index(lay), eps)
        assert len(fast) > 0
        assert np.array_equal(fast, find_collisions_naive(lay, eps))

    def test_canonical_unique_sorted(self):
        rng = np.random.default_rng(12)
        pairs = find_collisions(random_rects(rng, 300, spread=1.5), eps=1e-9)
        assert len(pairs) > 0
        assert np.all(pairs[:, 0] < pairs[:, 1])
        keys = [tuple(p) for p in pairs.tolist()]
        assert keys == sorted(set(keys))

    def test_touching_squares_are_not_collisions(self):
        lay = TreeLayout.from_rects([[0, 0], [1, 0], [0, 1], [1, 1]], [[1, 0]] * 4, [1.0] * 4, [1.0] * 4)
        assert len(find_collisions(lay, eps=1e-9)) == 0
        assert len(find_collisions_naive(lay, 1e-9)) == 0

    def test_classic_binary_tree(self):
        h = weighted(complete_tree(2, 10))
        lay = initial_layout(h)
        pairs = find_collisions(lay, eps=1e-9)
        assert len(pairs) > 0
        assert np.array_equal(pairs, find_collisions_naive(lay, 1e-9))

    def test_single_node(self):
        lay = TreeLayout.from_rects([[0, 0]], [[1, 0]], [1.0], [1.0])
        assert find_collisions(lay).shape == (0, 2)
        assert find_collisions_naive(lay).shape == (0, 2)
