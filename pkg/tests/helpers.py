"""Independent reference implementations used as test oracles."""

import math

import numpy as np


def bit_identical(a, b, check_sup=True):
    """Column-by-column byte equality of two traces (plus the running sup)."""
    cols = ("n", "lam", "eps", "x", "xbar", "eps_u_norm", "dist")
    return all(
        np.ascontiguousarray(getattr(a, c)).tobytes() == np.ascontiguousarray(getattr(b, c)).tobytes()
        for c in cols
    ) and (not check_sup or a.h1_sup == b.h1_sup)


def projected_gradient_baseline(grad, project, x0, N, c=1.0, p=1.0):
    """Plain-loop projected exact-gradient method with steps ``c * n**-p``.

    Step ``n`` (0-based) uses ``lam_max(n,1)``; iterate ``x_k`` enters the
    average with weight ``lam_k``. The average is formed by exact
    summation at the end, independently of the library's running update.
    """
    x = np.array(x0, dtype=float)
    xs, weights = [], []
    for n in range(N):
        lam = c * max(n, 1) ** (-p)
        x = project(x - lam * grad(x))
        xs.append(x.copy())
        weights.append(c * (n + 1) ** (-p))
    xs = np.array(xs)
    sigma = math.fsum(weights)
    xbar = np.array([math.fsum(w * v for w, v in zip(weights, xs[:, j])) for j in range(xs.shape[1])])
    return xs, xbar / sigma
