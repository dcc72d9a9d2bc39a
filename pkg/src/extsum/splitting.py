"""Extended forward-backward splitting and the exact-subgradient baseline.

One step maps ``x_n`` to::

    u_n     in  d_{eps_n} f_B (x_n)
    x_{n+1} =   (I + lam_n dA)^-1 (x_n - lam_n u_n)

and the output of a run is the step-weighted average of ``x_1, x_2, ...``
where ``x_k`` carries the weight ``lam_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    IterationState,
    PowerSchedule,
    TraceRecorder,
    as_point,
    average_update,
    schedule_at,
    validate_passty_schedule,
    validate_schedule,
)
from .errors import (
    BaselineInapplicableError,
    DimensionMismatchError,
    DomainError,
    EmptySubdifferentialError,
    ExtsumError,
    InvalidParameterError,
    InvalidScheduleError,
    SpecializationMismatchError,
)
from .oracles import ConvexFunction, ConvexSet, Indicator, SelectionStrategy, eps_subgradient, resolvent

__all__ = [
    "AlgorithmConfig",
    "ProblemSpec",
    "efb_step",
    "run_efb",
    "run_projected_eps_subgradient",
    "run_passty_fb",
]


@dataclass(frozen=True)
class AlgorithmConfig:
    """Run parameters.

    `tol` enables early stopping once the distance from the running average
    to the known solution set drops below it. `unsafe_schedule` lets a run
    proceed with a schedule that failed validation; the trace records it.
    """

    schedule: object = field(default_factory=PowerSchedule)
    strategy: SelectionStrategy = field(default_factory=SelectionStrategy)
    max_iter: int = 1000
    record_every: int = 1
    unsafe_schedule: bool = False
    tol: Optional[float] = None

    def __post_init__(self):
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidParameterError(f"max_iter must be a positive integer, got {self.max_iter}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise InvalidParameterError(
                f"record_every must be a positive integer, got {self.record_every}")
        if self.tol is not None and not self.tol > 0:
            raise InvalidParameterError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class ProblemSpec:
    """Operator pair and metadata for ``0 in (A +e B) x``.

    `A` is the backward operator (used through its resolvent), `B` the
    forward one (used through eps-subgradients). `domain_condition` records
    the author's claim that ``D(A)`` lies in every ``D(B^eps)``; it is not
    checked. `h2prime` records whether the solution set is known to equal
    ``(A + B)^-1(0)``.
    """

    A: ConvexFunction
    B: ConvexFunction
    x0: np.ndarray
    solution_set: Optional[ConvexSet] = None
    h2prime: bool = False
    h1_bound_hint: Optional[float] = None
    domain_condition: bool = True

    def __post_init__(self):
        x0 = as_point(self.x0, name="x0")
        object.__setattr__(self, "x0", x0)
        for name, dim in (("A", self.A.dim), ("B", self.B.dim),
                          ("solution_set", getattr(self.solution_set, "dim", None))):
            if dim is not None and dim != x0.size:
                raise DimensionMismatchError(f"{name} lives in R^{dim} but x0 in R^{x0.size}")
        if not self.B.in_domain(x0):
            raise DomainError(f"x0={x0.tolist()} is outside dom f_B")

    @property
    def dim(self):
        return self.x0.size


def efb_step(problem, state, lam, eps, strategy=SelectionStrategy(), weight=None):
    """Advance one extended forward-backward step.

    Returns ``(new_state, u)`` where `u` is the eps-subgradient selected at
    ``state.x`` before the resolvent is applied. The new iterate enters the
    running average with weight `weight` (defaults to `lam`).
    """
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    if not eps >= 0:
        raise InvalidParameterError(f"eps must be >= 0, got {eps}")
    u = eps_subgradient(problem.B, state.x, eps, strategy)
    x_next = resolvent(problem.A, lam, state.x - lam * u)
    return average_update(state, x_next, lam if weight is None else weight, u=u), u


def _iterate(problem, config, report, exact=False):
    """Shared driver. Returns ``(trace, exception_or_None)``."""
    if not report.valid and not config.unsafe_schedule:
        raise InvalidScheduleError("; ".join(report.reasons))
    schedule = config.schedule
    N = int(config.max_iter)
    every = int(config.record_every)
    S = problem.solution_set
    rec = TraceRecorder(problem.dim)
    state = IterationState.initial(problem.x0)
    failure = None
    n = 0
    try:
        for n in range(N + 1):
            lam, eps = schedule_at(schedule, n)
            if exact:
                eps = 0.0
            strategy = config.strategy.at_step(n)
            if n < N:
                # x_{n+1} enters the average with its own step size lam_{n+1}
                weight = schedule_at(schedule, n + 1)[0]
                new_state, u = efb_step(problem, state, lam, eps, strategy, weight=weight)
            else:
                u = eps_subgradient(problem.B, state.x, eps, strategy)
            eps_u = eps * math.sqrt(float(u @ u))
            rec.observe(eps_u)
            if n >= 1 and (n % every == 0 or n == N):
                dist = S.distance(state.xbar) if S is not None else None
                rec.append(n, lam, eps, state.x, state.xbar, eps_u, dist)
                if config.tol is not None and dist is not None and dist < config.tol:
                    break
            if n < N:
                state = new_state
    except ExtsumError as exc:
        failure = exc
    trace = rec.finish(
        record_every=every,
        schedule_valid=report.valid,
        unsafe=bool(config.unsafe_schedule),
        error=None if failure is None else str(failure),
        error_n=None if failure is None else n,
    )
    if failure is not None:
        trace.meta["error_x"] = state.x.tolist()
    return trace, failure


def run_efb(problem, config):
    """Run the extended forward-backward iteration.

    Rows are kept for ``n = 1..max_iter`` whenever ``n % record_every == 0``,
    and the last row is always kept, so an unstopped run has
    ``ceil(max_iter / record_every)`` rows. An oracle failure ends the run
    early; the partial trace carries the message in ``trace.error``.
    """
    trace, _ = _iterate(problem, config, validate_schedule(config.schedule))
    return trace


def run_projected_eps_subgradient(problem, config):
    """Projected approximate subgradient method: `run_efb` with ``A`` an indicator."""
    if not isinstance(problem.A, Indicator):
        raise SpecializationMismatchError(
            f"projected eps-subgradient needs A = indicator(C), got {problem.A!r}")
    return run_efb(problem, config)


def run_passty_fb(problem, config):
    """Classical forward-backward with exact subgradients (``eps = 0``).

    The schedule must satisfy ``sum lam = inf`` and ``sum lam**2 < inf``.
    Raises `BaselineInapplicableError` as soon as an iterate has an empty
    exact subdifferential; the partial trace is attached to the exception.
    """
    trace, failure = _iterate(problem, config, validate_passty_schedule(config.schedule), exact=True)
    if isinstance(failure, EmptySubdifferentialError):
        raise BaselineInapplicableError(
            str(failure), n=trace.error_n, x=trace.meta.get("error_x"), trace=trace
        ) from failure
    if failure is not None:
        raise failure
    return trace
