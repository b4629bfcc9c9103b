"""How children share a parent's ellipse.

Chord lengths, not angles, are made proportional to the weights. On a
flatter ellipse the same weights need different angles.
"""
# %%
import numpy as np

from pythagoras_tree.geometry import EllipseArc, Point, rescale_angles

weights = [3.0, 1.0, 2.0]
share = np.array(weights) / sum(weights)

# %%
for b in (1.0, 0.3, 1.618):
    arc = EllipseArc(Point(0, 0), Point(1, 0), 1.0, b)
    res = rescale_angles(weights, arc)
    r = np.radians(res.boundaries)
    chords = np.hypot(np.diff(np.cos(r)), b * np.diff(np.sin(r)))
    print(f"b={b:<6} boundaries {np.round(res.boundaries, 3)}")
    print(f"         chord shares {np.round(chords / chords.sum(), 6)} (target {np.round(share, 6)})")

# %% [markdown]
# Three-to-one on a circle has a closed form: the split sits at
# 2*atan(1/3) degrees from the right end.

# %%
arc = EllipseArc(Point(0, 0), Point(1, 0), 1.0, 1.0)
got = rescale_angles([3, 1], arc, tol=1e-12, max_iter=200).boundaries[1]
print(f"split {got:.10f} vs {np.degrees(2 * np.arctan(1 / 3)):.10f}")
