"""
Enlargements of the identity
============================

For the identity operator the eps-enlargement has a closed form: ``u``
belongs to it at ``x`` exactly when ``|u - x| <= 2 sqrt(eps)``. We recover
that band from the brute-force membership test, then check the
transportation inequality on random members.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import extsum

identity = extsum.SampledOperator.identity(np.linspace(-10, 10, 4001))

# %%
# Membership band
# ---------------

eps = 0.5
xs = np.linspace(-2, 2, 81)
us = np.linspace(-4, 4, 161)
member = np.array([[extsum.check_eps_enlargement(identity, [x], [u], eps) for x in xs] for u in us])

fig, ax = plt.subplots(figsize=(5, 4))
ax.contourf(xs, us, member, levels=[-0.5, 0.5, 1.5], colors=["white", "tab:blue"], alpha=0.5)
ax.plot(xs, xs + 2 * np.sqrt(eps), "k--", lw=1)
ax.plot(xs, xs - 2 * np.sqrt(eps), "k--", lw=1)
ax.set_xlabel("x")
ax.set_ylabel("u")
fig.tight_layout()
fig.savefig("identity_enlargement.png", dpi=120)

# %%
# Random pairs
# ------------
# Two members ``(x, u)`` and ``(y, v)`` of the eps1 and eps2 enlargements
# always satisfy ``<v - u, y - x> >= -(sqrt(eps1) + sqrt(eps2))**2``.

rng = np.random.default_rng(1)
slack = []
for _ in range(1000):
    x, y = rng.uniform(-3, 3, 2)
    e1, e2 = rng.uniform(0, 2, 2)
    u = x + rng.uniform(-1, 1) * 2 * np.sqrt(e1)
    v = y + rng.uniform(-1, 1) * 2 * np.sqrt(e2)
    r = extsum.check_transportation(identity, ([x], [u]), e1, ([y], [v]), e2)
    slack.append(r.lhs - r.rhs)
print(f"smallest lhs - rhs over 1000 pairs: {min(slack):.3g}")

tight = extsum.check_transportation(identity, ([0.0], [2.0]), 1.0, ([2.0], [0.0]), 1.0)
print(f"tight pair: lhs={tight.lhs}, rhs={tight.rhs}, holds={tight.holds}")
