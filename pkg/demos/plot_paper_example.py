"""
A minimization problem with no qualification condition
======================================================

Minimize ``f(x) = -sqrt(x)`` over the one-point set ``C = {0}``. The
solution is obviously 0, but ``f`` has no subgradient there, so the sum
rule fails and a classical forward-backward (projected subgradient) method
cannot even take its first step from 0.

The extended method only asks for eps-subgradients, which exist at 0 for
every ``eps > 0``.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import extsum

problem = extsum.builtin("paper-example")
print(problem.description)

# %%
# Run the extended iteration
# --------------------------
# The ``boundary`` strategy picks ``u_n = -1/(4 eps_n)`` once the iterate
# sits at 0, so ``eps_n * u_n`` stays at ``-1/4`` forever: bounded, as the
# first hypothesis requires, even though ``u_n`` itself blows up.

config = extsum.AlgorithmConfig(
    schedule=extsum.PowerSchedule(1, 1, "1/3"),
    strategy=extsum.SelectionStrategy.boundary(),
    max_iter=2000,
)
trace = extsum.run_efb(problem.spec, config)
print("all iterates at 0:", bool(np.all(trace.x == 0.0)))
print("sup eps_n |u_n|  :", trace.h1_sup)

# %%
# The classical method fails at the first iterate that lands on 0.

try:
    extsum.run_passty_fb(problem.spec, config)
except extsum.BaselineInapplicableError as exc:
    print(f"exact-subgradient baseline stopped at n={exc.n}: {exc}")

# %%
# Look at the selected subgradients
# ---------------------------------
# ``|u_n|`` grows like ``n**(1/3)`` while the product with ``eps_n`` is flat.

u_norm = trace.eps_u_norm / trace.eps
fig, ax = plt.subplots(figsize=(6, 3.5))
ax.loglog(trace.n, u_norm, label="|u_n|")
ax.loglog(trace.n, trace.eps_u_norm, label="eps_n |u_n|")
ax.set_xlabel("n")
ax.legend()
fig.tight_layout()
fig.savefig("paper_example.png", dpi=120)

# %%
# Diagnostics
# -----------
# The report checks both hypotheses and the quasi-Fejer inequality on the
# recorded trajectory.

report = extsum.diagnose(trace, problem)
for key, value in report.to_dict().items():
    print(f"{key:24s} {value}")
