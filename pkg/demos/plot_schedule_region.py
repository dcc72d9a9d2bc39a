"""
Which power-law schedules are admissible?
=========================================

Step sizes ``lambda_n = c * n**-p`` and tolerances ``eps_n = n**-q`` must
satisfy four conditions:

* ``sum lambda_n`` diverges,
* ``sum (lambda_n / eps_n)**2`` converges,
* ``sum lambda_n * eps_n`` converges,
* ``eps_n`` decreases to 0.

For power laws these reduce to ``p <= 1``, ``2 (p - q) > 1``,
``p + q > 1`` and ``q > 0``. We map the region by asking the validator
at every point of a grid.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import extsum

ps = np.linspace(0.3, 1.3, 201)
qs = np.linspace(0.01, 1.0, 199)
valid = np.array([[extsum.validate_schedule(extsum.PowerSchedule(1, p, q)).valid for p in ps]
                  for q in qs])
print(f"{valid.mean():.1%} of the grid is admissible")

# %%
# The canonical family ``q = p / 3`` crosses the region for
# ``3/4 < p <= 1``.

fig, ax = plt.subplots(figsize=(5, 4))
ax.contourf(ps, qs, valid, levels=[-0.5, 0.5, 1.5], colors=["white", "tab:green"], alpha=0.5)
ax.plot(ps, ps / 3, "k--", lw=1, label="q = p/3")
ax.set_xlabel("p")
ax.set_ylabel("q")
ax.legend()
fig.tight_layout()
fig.savefig("schedule_region.png", dpi=120)

for p in (0.7, 0.8, 1.0, 1.2):
    report = extsum.validate_schedule(extsum.PowerSchedule.canonical(p))
    print(f"p={p}:", "valid" if report.valid else "; ".join(report.reasons))
