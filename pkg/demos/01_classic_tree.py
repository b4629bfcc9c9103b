"""The classic generalized Pythagoras tree, before any overlap removal.

Run from the repository root:  python demos/01_classic_tree.py
"""
# %%
from pathlib import Path

import numpy as np

from pythagoras_tree import assign_subtree_weights, find_collisions, initial_layout, render_svg
from pythagoras_tree.corpus import complete_tree

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# %% [markdown]
# A complete binary tree of depth 10. Every node gets its subtree size as
# weight, so siblings share their parent's semicircle evenly and each level
# shrinks by 1/sqrt(2), exactly like the textbook fractal.

# %%
h = assign_subtree_weights(complete_tree(2, 10))
layout = initial_layout(h)
print(f"{h.n} nodes, depth {h.max_depth}")
for d in (0, 1, 2, 10):
    print(f"  side at depth {d:2d}: {layout.width[h.depth == d][0]:.6f}")

# %% [markdown]
# Deep branches fold back onto each other. Counting overlapping pairs shows
# how much work the relaxation has to do.

# %%
pairs = find_collisions(layout, eps=1e-9)
print(f"{len(pairs)} overlapping pairs; deepest involved node depth {h.depth[pairs].max()}")
print("bounding box:", np.round(layout.bounds(), 4))

(out / "classic.svg").write_text(render_svg(layout, h))
print("wrote", out / "classic.svg")
