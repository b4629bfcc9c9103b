"""Command-line interface.

Exit status: 0 when the layout was rendered (and, for ``resolve`` and
``scan``, is overlap-free), 2 when the iteration cap was reached (the SVG
is still written), 1 on bad input.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import bench as _bench
from .geometry import PHI
from .hierarchy import HierarchyError, assign_subtree_weights, load_hierarchy, scan_filesystem
from .layout import LayoutConfig, initial_layout
from .render import render_svg
from .solver import SolverConfig, solve
from .stats import InsufficientData, fit_exponential, write_stats_csv

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 1, 2


def _layout_args(p, with_input=True):
    if with_input:
        p.add_argument("--input", required=True, help="hierarchy file")
        p.add_argument("--format", required=True, choices=["csv", "json"])
        p.add_argument(
            "--weights",
            choices=["subtree", "explicit"],
            default="subtree",
            help="subtree: node counts; explicit: keep weights given in the file",
        )
    p.add_argument("--root-width", type=float, default=1.0)
    p.add_argument("--height-mode", choices=["square", "limited"], default="square")
    p.add_argument("--out-svg", required=True)


def _solver_args(p):
    p.add_argument("--push", type=float, default=1.1)
    p.add_argument("--pull", type=float, default=0.9)
    p.add_argument("--b-cap", type=float, default=PHI)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--lr-decay", type=float, default=0.9)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--eps-rel", type=float, default=1e-9)
    p.add_argument("--stats", help="write per-iteration statistics CSV here")
    p.add_argument("--timing", action="store_true", help="fill the wall_ms column of --stats")
    p.add_argument("--fit", action="store_true", help="print an exponential fit of the collision counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pythagoras-tree", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="render the classic tree without overlap removal")
    _layout_args(p)

    p = sub.add_parser("resolve", help="remove overlap and render")
    _layout_args(p)
    _solver_args(p)

    p = sub.add_parser("scan", help="like resolve, for a directory weighted by file size")
    p.add_argument("--path", required=True)
    p.add_argument("--follow-symlinks", action="store_true")
    _layout_args(p, with_input=False)
    _solver_args(p)

    p = sub.add_parser("bench", help="time quadtree vs all-pairs collision detection")
    p.add_argument("--sizes", default="100,1000,10000")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    return parser


def _read(args):
    with open(args.input, "rb") as fh:
        h = load_hierarchy(fh, args.format)
    return assign_subtree_weights(h, preserve_explicit=args.weights == "explicit")


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _resolve(h, args) -> int:
    cfg_layout = LayoutConfig(root_width=args.root_width, height_mode=args.height_mode)
    cfg = SolverConfig(
        push_factor=args.push,
        pull_factor=args.pull,
        b_cap=args.b_cap,
        lr_init=args.lr,
        lr_decay=args.lr_decay,
        max_iterations=args.max_iter,
        eps_rel=args.eps_rel,
    )
    result = solve(h, cfg_layout, cfg)
    _write(args.out_svg, render_svg(result.layout, h))
    if args.stats:
        _write(args.stats, write_stats_csv(result.stats, timing=args.timing))
    print(
        f"{result.status}: {h.n} nodes, {result.stats[0].collisions} initial collisions, "
        f"{result.iterations} iterations, {result.stats[-1].collisions} remaining"
    )
    if args.fit:
        try:
            fit = fit_exponential(result.stats)
            print(f"A={fit.A!r} lambda={fit.lam!r} r_squared={fit.r_squared!r}")
        except InsufficientData as exc:
            print(f"fit: {exc}")
    return EXIT_OK if result.resolved else EXIT_CAP


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "layout":
            h = _read(args)
            cfg = LayoutConfig(root_width=args.root_width, height_mode=args.height_mode)
            _write(args.out_svg, render_svg(initial_layout(h, cfg), h))
            return EXIT_OK
        if args.command == "resolve":
            return _resolve(_read(args), args)
        if args.command == "scan":
            return _resolve(scan_filesystem(args.path, args.follow_symlinks), args)
        if args.command == "bench":
            sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            rows = _bench.bench_collision(sizes, args.reps, args.seed)
            _write(args.out, _bench.bench_csv(rows))
            for r in rows:
                print(f"n={r.n}: quadtree {r.index_s * 1e3:.2f} ms, naive {r.naive_s * 1e3:.2f} ms, {r.speedup:.1f}x")
            return EXIT_OK
    except (HierarchyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
