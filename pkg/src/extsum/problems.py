"""Builtin constrained-minimization problems with known solutions.

Every problem reads ``minimize f over C`` and is split as ``A = d(indicator
of C)`` (backward) and ``B = df`` (forward).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .core import as_point
from .errors import InvalidParameterError
from .oracles import Abs, Box, Halfspace, Indicator, NegSqrt, Quadratic, Singleton
from .splitting import ProblemSpec

__all__ = ["BuiltinProblem", "builtin", "list_problems", "grid_minimum_gap"]


@dataclass(frozen=True)
class BuiltinProblem:
    """A registered problem.

    `notes` keys: ``h1_bound`` (expected sup of ``eps_n ||u_n||`` or None),
    ``h2`` and ``h2prime`` (``"verified"``, ``"refuted"`` or ``"unknown"``),
    ``passty_applicable`` (bool).
    """

    id: str
    spec: ProblemSpec
    solution: np.ndarray
    notes: dict = field(default_factory=dict)
    description: str = ""

    @property
    def f(self):
        return self.spec.B

    @property
    def C(self):
        return self.spec.A.C


def grid_minimum_gap(problem, half_width=5.0, points=10_000):
    """``f(solution) - min f`` over a feasible grid around the solution.

    The grid has `points` nodes in 1-D and a ``sqrt(points)``-per-axis
    lattice in 2-D. A value ``<= 0`` (up to rounding) means no feasible grid
    point beats the registered solution.
    """
    sol = problem.solution
    d = sol.size
    per_axis = points if d == 1 else int(round(points ** (1.0 / d)))
    axes = [np.linspace(s - half_width, s + half_width, per_axis) for s in sol]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    feasible = grid[np.isfinite(problem.spec.A(grid))]
    fsol = problem.f.value(sol)
    if feasible.size == 0:
        return 0.0
    return float(fsol - np.min(problem.f(feasible)))


def _register(problem):
    C = problem.C
    if not C.contains(problem.solution):
        raise AssertionError(f"{problem.id}: registered solution is infeasible")
    gap = grid_minimum_gap(problem)
    if gap > 1e-6:
        raise AssertionError(f"{problem.id}: grid point beats the solution by {gap}")
    return problem.id, problem


def _make(id, f, C, x0, solution, description, **notes):
    solution = as_point(solution, name="solution")
    spec = ProblemSpec(
        A=Indicator(C),
        B=f,
        x0=x0,
        solution_set=Singleton(solution),
        h2prime=notes["h2prime"] == "verified",
        h1_bound_hint=notes.get("h1_bound"),
    )
    return BuiltinProblem(id=id, spec=spec, solution=solution, notes=notes,
                          description=description)


_REGISTRY = MappingProxyType(dict(
    _register(p)
    for p in (
        _make(
            "paper-example", NegSqrt(), Singleton([0.0]), [4.0], [0.0],
            "minimize -sqrt(x) over C = {0}; no qualification condition holds",
            h1_bound=0.25, h2="verified", h2prime="refuted", passty_applicable=False,
        ),
        _make(
            "quad-halfspace", Quadratic([2.0]), Halfspace([1.0], 1.0), [-3.0], [1.0],
            "minimize (x-2)^2/2 over x <= 1",
            h1_bound=None, h2="verified", h2prime="verified", passty_applicable=True,
        ),
        _make(
            "abs-box", Abs(), Box([1.0], [2.0]), [2.0], [1.0],
            "minimize |x| over [1, 2]",
            h1_bound=None, h2="verified", h2prime="verified", passty_applicable=True,
        ),
        _make(
            "quad-box-2d", Quadratic([2.0, 3.0]), Box([0.0, 0.0], [1.0, 1.0]), [0.0, 0.0],
            [1.0, 1.0],
            "minimize ||x-(2,3)||^2/2 over [0,1]^2",
            h1_bound=None, h2="verified", h2prime="verified", passty_applicable=True,
        ),
    )
))


def list_problems():
    return list(_REGISTRY)


def builtin(id):
    """Look up a builtin problem by its stable id."""
    try:
        return _REGISTRY[id]
    except KeyError:
        raise InvalidParameterError(
            f"unknown problem id {id!r}; choose from {', '.join(_REGISTRY)}") from None
