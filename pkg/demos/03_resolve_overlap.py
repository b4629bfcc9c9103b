"""Removing overlap from a random tree and watching the collision count decay."""
# %%
from pathlib import Path

from pythagoras_tree import assign_subtree_weights, render_svg, solve
from pythagoras_tree.corpus import random_tree
from pythagoras_tree.stats import fit_exponential, write_stats_csv

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

h = assign_subtree_weights(random_tree(3000, 42))

# %% [markdown]
# Each iteration, colliding pairs make their lowest common ancestor's
# ellipse taller and the ellipses along both paths flatter. A decaying pull
# toward b = 1 keeps the shape close to the classic tree.

# %%
res = solve(h)
print(f"{res.status} after {res.iterations} iterations")
for s in res.stats[:: max(1, len(res.stats) // 10)]:
    print(f"  t={s.iteration:3d} collisions={s.collisions:5d} b in [{s.min_b:.3f}, {s.max_b:.3f}]")

# %%
fit = fit_exponential(res.stats)
print(f"collisions ~ {fit.A:.1f} * exp(-{fit.lam:.4f} t), R^2 = {fit.r_squared:.4f}")

(out / "resolved.svg").write_text(render_svg(res.layout, h))
(out / "resolved_stats.csv").write_text(write_stats_csv(res.stats))
print("wrote", out / "resolved.svg", "and", out / "resolved_stats.csv")
