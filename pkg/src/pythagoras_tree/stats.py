"""Iteration statistics: CSV export and the exponential decay fit."""
from __future__ import annotations

import csv
import io
import math
from typing import NamedTuple, Sequence

import numpy as np

from .solver import IterationStats

STATS_HEADER = ("iteration", "collisions", "max_b", "min_b", "wall_ms")


class InsufficientData(ValueError):
    pass


class ExponentialFit(NamedTuple):
    A: float
    lam: float
    r_squared: float

    def predict(self, t):
        return self.A * np.exp(-self.lam * np.asarray(t, dtype=float))


def write_stats_csv(series: Sequence[IterationStats], timing: bool = True) -> str:
    """CSV text with one row per iteration.

    With ``timing=False`` the ``wall_ms`` column is left empty so that
    repeated runs produce identical files.
    """
    if not series:
        raise ValueError("empty stats series")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_HEADER)
    for s in series:
        wall = "" if (not timing or s.wall_time is None) else repr(s.wall_time * 1000.0)
        w.writerow([s.iteration, s.collisions, repr(s.max_b), repr(s.min_b), wall])
    return buf.getvalue()


def read_stats_csv(text: str) -> list[IterationStats]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != STATS_HEADER:
        raise ValueError(f"unexpected header {rows.fieldnames}")
    out = []
    for r in rows:
        wall = r["wall_ms"]
        out.append(
            IterationStats(
                int(r["iteration"]),
                int(r["collisions"]),
                float(r["max_b"]),
                float(r["min_b"]),
                float(wall) / 1000.0 if wall else None,
            )
        )
    return out


def fit_exponential(series) -> ExponentialFit:
    """Least-squares line through ``ln(collisions)`` against iteration.

    ``series`` is a sequence of IterationStats or of (iteration, count)
    pairs. Rows with zero collisions are dropped. R² is measured in log
    space and taken as 1 when the log counts do not vary.
    """
    pts = [(s.iteration, s.collisions) if isinstance(s, IterationStats) else tuple(s) for s in series]
    pts = [(float(t), float(c)) for t, c in pts if c > 0]
    if len(pts) < 3:
        raise InsufficientData(f"need at least 3 rows with collisions, got {len(pts)}")
    t, c = np.array(pts).T
    y = np.log(c)
    tm, ym = t.mean(), y.mean()
    stt = np.sum((t - tm) ** 2)
    if stt == 0:
        raise InsufficientData("all rows share one iteration index")
    if np.ptp(y) == 0:
        return ExponentialFit(float(c[0]), 0.0, 1.0)
    slope = np.sum((t - tm) * (y - ym)) / stt
    intercept = ym - slope * tm
    ss_tot = np.sum((y - ym) ** 2)
    ss_res = np.sum((y - (intercept + slope * t)) ** 2)
    return ExponentialFit(math.exp(intercept), float(-slope), float(1.0 - ss_res / ss_tot))
