"""A directory tree weighted by file size.

Pass a directory to scan; defaults to the installed package sources.
"""
# %%
import sys
from pathlib import Path

import pythagoras_tree
from pythagoras_tree import render_svg, scan_filesystem, solve
from pythagoras_tree.layout import LayoutConfig

root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(pythagoras_tree.__file__).parent
out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# %%
h = scan_filesystem(root)
print(f"{root}: {h.n} entries, {h[0].weight:.0f} bytes, depth {h.max_depth}")
biggest = sorted(h[0].children, key=lambda c: -h[c].weight)[:5]
for c in biggest:
    print(f"  {h[c].label:30s} {h[c].weight:10.0f}")

# %% [markdown]
# The limited height mode keeps rectangles from growing taller than they
# were in the classic layout, which suits long thin directories.

# %%
cfg = LayoutConfig(height_mode="limited")
res = solve(h, cfg)
print(f"{res.status} after {res.iterations} iterations")
(out / "filesystem.svg").write_text(render_svg(res.layout, h))
print("wrote", out / "filesystem.svg")
