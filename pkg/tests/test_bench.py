import numpy as np

from pythagoras_tree.bench import BenchRow, bench_collision, bench_csv, bench_layout
from pythagoras_tree.collision import find_collisions, find_collisions_naive


def test_small_sizes_agree():
    rows = bench_collision([100, 300], reps=1)
    assert [r.n for r in rows] == [100, 300]
    assert all(r.collisions > 0 and r.index_s > 0 and r.naive_s > 0 for r in rows)


def test_layout_is_seeded():
    h1, a = bench_layout(200, seed=3)
    h2, b = bench_layout(200, seed=3)
    assert h1 == h2 and np.array_equal(a.origin, b.origin)
    assert np.array_equal(find_collisions(a, eps=1e-9), find_collisions_naive(a, 1e-9))


def test_empty_report():
    assert bench_collision([]) == []
    assert bench_csv([]) == "n,reps,collisions,quadtree_depth,index_s,naive_s,speedup\n"


def test_speedup():
    assert BenchRow(10, 1, 0, 0, 0.5, 2.0).speedup == 4.0
    assert BenchRow(10, 1, 0, 0, 0.0, 2.0).speedup == float("inf")
