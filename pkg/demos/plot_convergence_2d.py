"""
Averaged iterates on a two-dimensional box
==========================================

Project ``(2, 3)`` onto the unit square by minimizing
``0.5 * ||x - (2, 3)||**2`` over ``[0, 1]**2``. With the default scale
``c = 1`` the first step already lands on the corner ``(1, 1)``, so here we
shrink the steps to watch the averaged sequence travel there.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import extsum

problem = extsum.builtin("quad-box-2d")

# %%
# Three selection strategies
# --------------------------
# ``min_norm`` uses the exact gradient, ``boundary`` steps to the edge of
# the eps-subdifferential ball, and ``random`` draws a point inside it.

strategies = {
    "min_norm": extsum.SelectionStrategy.min_norm(),
    "boundary": extsum.SelectionStrategy.boundary(),
    "random": extsum.SelectionStrategy.random(0),
}
traces = {}
for name, strategy in strategies.items():
    config = extsum.AlgorithmConfig(
        schedule=extsum.PowerSchedule(0.3, 1, "1/3"),
        strategy=strategy,
        max_iter=20_000,
    )
    traces[name] = extsum.run_efb(problem.spec, config)
    print(f"{name:9s} final dist(xbar, S) = {traces[name].dist[-1]:.3e}")

# %%
# Distance to the solution
# ------------------------
# The weights ``lambda_k`` sum like ``log n``, so the early iterates keep a
# noticeable share of the average and the distance falls slowly. Each
# strategy gets there at its own pace.

fig, ax = plt.subplots(figsize=(6, 3.5))
for name, trace in traces.items():
    ax.loglog(trace.n, np.maximum(trace.dist, 1e-16), label=name)
ax.set_xlabel("n")
ax.set_ylabel("dist(xbar_n, S)")
ax.legend()
fig.tight_layout()
fig.savefig("convergence_2d.png", dpi=120)

# %%
# Paths in the plane
# ------------------

fig, ax = plt.subplots(figsize=(4, 4))
ax.add_patch(plt.Rectangle((0, 0), 1, 1, fill=False, lw=1))
for name, trace in traces.items():
    ax.plot(trace.xbar[:, 0], trace.xbar[:, 1], lw=1, label=f"xbar ({name})")
ax.plot(*problem.solution, "k*", ms=10)
ax.set_aspect("equal")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig("paths_2d.png", dpi=120)
