"""Points, step schedules, running weighted averages and convergence traces.

Points are plain one-dimensional float arrays. Every array stored inside a
state or trace is marked read-only so values can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    ScheduleRangeError,
)

__all__ = [
    "as_point",
    "PowerSchedule",
    "ExplicitSchedule",
    "StepSchedule",
    "ValidityReport",
    "validate_schedule",
    "validate_passty_schedule",
    "schedule_at",
    "IterationState",
    "average_update",
    "TraceRow",
    "ConvergenceTrace",
    "TraceRecorder",
]


def as_point(coords, dim=None, name="point"):
    """Return `coords` as a read-only 1-D float array with finite entries.

    Scalars are promoted to 1-D arrays of length one.
    """
    if (type(coords) is np.ndarray and coords.dtype == np.float64 and coords.ndim == 1
            and not coords.flags.writeable):
        arr = coords
    else:
        arr = np.array(coords, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatchError(f"{name} must be a non-empty vector, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidParameterError(f"{name} has non-finite coordinates: {arr}")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.size}, expected {dim}")
    if arr.flags.writeable:
        arr.flags.writeable = False
    return arr


# ---------------------------------------------------------------------------
# Step schedules
# ---------------------------------------------------------------------------

def _positive(value, name):
    value = float(Fraction(value)) if isinstance(value, str) else float(value)
    if not value > 0 or not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value}")
    return value


@dataclass(frozen=True)
class PowerSchedule:
    """Power-law steps ``lambda_n = c * n**-p`` and ``eps_n = n**-q``.

    Strings such as ``"1/3"`` are accepted for the parameters.
    """

    c: float = 1.0
    p: float = 1.0
    q: float = 1.0 / 3.0

    def __post_init__(self):
        for name in ("c", "p", "q"):
            object.__setattr__(self, name, _positive(getattr(self, name), name))

    @classmethod
    def canonical(cls, p=1.0):
        """The family with ``eps_n = lambda_n ** (1/3)``."""
        return cls(1.0, p, p / 3.0)

    def at(self, n):
        n = max(int(n), 1)
        return self.c * n ** (-self.p), float(n) ** (-self.q)


@dataclass(frozen=True)
class ExplicitSchedule:
    """A finite list of ``(lambda_n, eps_n)`` pairs for ``n = 1..len``."""

    lambdas: tuple
    epsilons: tuple

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        eps = tuple(float(v) for v in self.epsilons)
        if len(lam) != len(eps) or not lam:
            raise InvalidParameterError("lambdas and epsilons must be non-empty and of equal length")
        if not all(v > 0 and math.isfinite(v) for v in lam + eps):
            raise InvalidParameterError("explicit schedules need strictly positive finite entries")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "epsilons", eps)

    def __len__(self):
        return len(self.lambdas)

    def at(self, n):
        n = max(int(n), 1)
        if n > len(self.lambdas):
            raise ScheduleRangeError(f"index {n} beyond explicit schedule of length {len(self)}")
        return self.lambdas[n - 1], self.epsilons[n - 1]


StepSchedule = Union[PowerSchedule, ExplicitSchedule]


def schedule_at(spec, n):
    """Return ``(lambda_n, eps_n)``; index 0 reuses the index-1 values."""
    if n < 0:
        raise ScheduleRangeError(f"negative schedule index {n}")
    return spec.at(n)


RELATION_LABELS = {
    "sum_lambda_diverges": "sum lambda_n = inf",
    "sum_ratio_sq_converges": "sum (lambda_n/eps_n)^2 < inf",
    "sum_lambda_eps_converges": "sum lambda_n*eps_n < inf",
    "eps_decreases_to_zero": "eps_n decreases to 0",
    "sum_lambda_sq_converges": "sum lambda_n^2 < inf",
    "sum_lambda_4_3_converges": "sum lambda_n^(4/3) < inf",
    "eps_is_cube_root_lambda": "eps_n = lambda_n^(1/3)",
}


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a schedule check.

    `relations` maps relation keys to verdicts; `valid` is the conjunction
    of the keys listed in `required`. `reasons` names each failed required
    relation. Informational relations (e.g. the canonical cube-root link)
    never affect `valid`.
    """

    valid: bool
    relations: dict
    required: tuple
    reasons: tuple
    heuristic: bool = False

    def lines(self):
        out = []
        for key, ok in self.relations.items():
            tag = "required" if key in self.required else "info"
            out.append(f"{RELATION_LABELS.get(key, key)}: {'holds' if ok else 'FAILS'} ({tag})")
        return out


def _tail_exponent(terms):
    """Least-squares decay exponent ``s`` of ``terms ~ n**-s`` over the second half."""
    terms = np.asarray(terms, dtype=float)
    m = terms.size
    if m < 4:
        return 0.0
    idx = np.arange(m // 2, m) + 1.0
    slope = np.polyfit(np.log(idx), np.log(terms[m // 2:]), 1)[0]
    return float(-slope)


# fitted exponents within this band of the critical value count as critical
_EXPONENT_TOL = 1e-6


def _series_converges(terms):
    return _tail_exponent(terms) > 1.0 + _EXPONENT_TOL


def _report(relations, required, heuristic=False):
    reasons = tuple(
        f"{RELATION_LABELS[k]} violated" for k in required if not relations[k]
    )
    return ValidityReport(
        valid=not reasons,
        relations=relations,
        required=tuple(required),
        reasons=reasons,
        heuristic=heuristic,
    )


_EFB_REQUIRED = (
    "sum_lambda_diverges",
    "sum_ratio_sq_converges",
    "sum_lambda_eps_converges",
    "eps_decreases_to_zero",
)


def validate_schedule(spec):
    """Check the step relations under which the averaged iterates converge.

    For power schedules the verdict is exact (p-series tests on the
    exponents). For explicit lists it is a tail-slope heuristic and the
    report is marked ``heuristic=True``.

    Examples
    --------
    >>> validate_schedule(PowerSchedule(1, 1, "1/3")).valid
    True
    >>> validate_schedule(PowerSchedule(1, 1.2, 0.4)).reasons
    ('sum lambda_n = inf violated',)
    """
    if isinstance(spec, PowerSchedule):
        p, q = spec.p, spec.q
        relations = {
            "sum_lambda_diverges": p <= 1.0,
            "sum_ratio_sq_converges": 2.0 * (p - q) > 1.0,
            "sum_lambda_eps_converges": p + q > 1.0,
            "eps_decreases_to_zero": q > 0.0,
            "sum_lambda_4_3_converges": 4.0 * p / 3.0 > 1.0,
            "eps_is_cube_root_lambda": spec.c == 1.0 and math.isclose(q, p / 3.0, rel_tol=1e-12),
        }
        return _report(relations, _EFB_REQUIRED)
    if isinstance(spec, ExplicitSchedule):
        lam = np.array(spec.lambdas)
        eps = np.array(spec.epsilons)
        relations = {
            "sum_lambda_diverges": not _series_converges(lam),
            "sum_ratio_sq_converges": _series_converges((lam / eps) ** 2),
            "sum_lambda_eps_converges": _series_converges(lam * eps),
            "eps_decreases_to_zero": bool(np.all(np.diff(eps) <= 0) and _tail_exponent(eps) > _EXPONENT_TOL),
            "sum_lambda_4_3_converges": _series_converges(lam ** (4.0 / 3.0)),
            "eps_is_cube_root_lambda": bool(np.allclose(eps ** 3, lam, rtol=1e-12, atol=0.0)),
        }
        return _report(relations, _EFB_REQUIRED, heuristic=True)
    raise InvalidParameterError(f"unknown schedule type {type(spec).__name__}")


def validate_passty_schedule(spec):
    """Check ``sum lambda_n = inf`` and ``sum lambda_n**2 < inf`` (``1/2 < p <= 1``)."""
    required = ("sum_lambda_diverges", "sum_lambda_sq_converges")
    if isinstance(spec, PowerSchedule):
        relations = {
            "sum_lambda_diverges": spec.p <= 1.0,
            "sum_lambda_sq_converges": 2.0 * spec.p > 1.0,
        }
        return _report(relations, required)
    lam = np.array(spec.lambdas)
    relations = {
        "sum_lambda_diverges": not _series_converges(lam),
        "sum_lambda_sq_converges": _series_converges(lam ** 2),
    }
    return _report(relations, required, heuristic=True)


# ---------------------------------------------------------------------------
# Running weighted average
# ---------------------------------------------------------------------------

def _neumaier_add(total, comp, value):
    t = total + value
    if abs(total) >= abs(value):
        comp += (total - t) + value
    else:
        comp += (value - t) + total
    return t, comp


@dataclass(frozen=True)
class IterationState:
    """Everything needed to advance one step and keep the running average.

    `xbar` averages ``x_1 .. x_n`` weighted by their step sizes; the starting
    point is excluded, so at ``n == 0`` `xbar` is a placeholder equal to `x`
    and `sigma` is zero. `sigma` is carried as a compensated sum
    (``sigma_sum + sigma_comp``).
    """

    n: int
    x: np.ndarray
    xbar: np.ndarray
    sigma_sum: float = 0.0
    sigma_comp: float = 0.0
    last_u: Optional[np.ndarray] = None

    @classmethod
    def initial(cls, x0):
        x0 = as_point(x0, name="x0")
        return cls(n=0, x=x0, xbar=x0)

    @property
    def sigma(self):
        return self.sigma_sum + self.sigma_comp

    @property
    def dim(self):
        return self.x.size


def average_update(state, x_next, lambda_next, u=None):
    """Advance `state` by one iterate carrying weight `lambda_next`.

    Returns a new state with ``n + 1``, ``x = x_next`` and the average
    ``(sigma * xbar + lambda_next * x_next) / (sigma + lambda_next)``.
    """
    if not lambda_next > 0:
        raise InvalidParameterError(f"weight must be positive, got {lambda_next}")
    x_next = as_point(x_next, dim=state.dim, name="x_next")
    total, comp = _neumaier_add(state.sigma_sum, state.sigma_comp, float(lambda_next))
    if state.n == 0:
        xbar = x_next
    else:
        xbar = state.xbar + lambda_next * (x_next - state.xbar) / (total + comp)
        xbar.flags.writeable = False
    return IterationState(
        n=state.n + 1,
        x=x_next,
        xbar=xbar,
        sigma_sum=total,
        sigma_comp=comp,
        last_u=state.last_u if u is None else as_point(u, name="u"),
    )


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceRow:
    n: int
    lam: float
    eps: float
    x: np.ndarray
    xbar: np.ndarray
    eps_u_norm: float
    dist_to_solution: Optional[float]


@dataclass(eq=False)
class ConvergenceTrace:
    """Column-oriented record of a run.

    Row ``i`` describes iteration ``n[i]``: the step sizes ``lam[i]``,
    ``eps[i]`` used from iterate ``x[i]``, the weighted average ``xbar[i]``
    of ``x_1..x_n``, and ``eps_u_norm[i] = eps_n * ||u_n||`` for the
    selection made at ``x[i]``. ``dist`` holds NaN where no solution set is
    known.

    `h1_sup` is the supremum of ``eps_n * ||u_n||`` over every selection of
    the run, recorded or not, including the one made at the starting point.
    """

    n: np.ndarray
    lam: np.ndarray
    eps: np.ndarray
    x: np.ndarray
    xbar: np.ndarray
    eps_u_norm: np.ndarray
    dist: np.ndarray
    h1_sup: float = 0.0
    record_every: int = 1
    schedule_valid: Optional[bool] = None
    unsafe: bool = False
    error: Optional[str] = None
    error_n: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return int(self.n.size)

    @property
    def dim(self):
        return int(self.x.shape[1]) if self.x.ndim == 2 else 0

    @property
    def has_solution(self):
        return bool(self.dist.size) and not np.all(np.isnan(self.dist))

    @property
    def complete(self):
        return self.error is None

    def row(self, i):
        d = float(self.dist[i])
        return TraceRow(
            n=int(self.n[i]),
            lam=float(self.lam[i]),
            eps=float(self.eps[i]),
            x=self.x[i],
            xbar=self.xbar[i],
            eps_u_norm=float(self.eps_u_norm[i]),
            dist_to_solution=None if math.isnan(d) else d,
        )

    def rows(self) -> Iterator[TraceRow]:
        for i in range(len(self)):
            yield self.row(i)

    def is_unthinned(self):
        """True when rows are consecutive iterations with no gaps."""
        return bool(np.all(np.diff(self.n) == 1))

    def same_rows(self, other):
        """Bit-for-bit equality of every column and of the running supremum."""
        cols = ("n", "lam", "eps", "x", "xbar", "eps_u_norm", "dist")
        return all(
            np.array_equal(getattr(self, c), getattr(other, c), equal_nan=(c == "dist"))
            for c in cols
        ) and self.h1_sup == other.h1_sup and self.error == other.error

    def __eq__(self, other):
        if not isinstance(other, ConvergenceTrace):
            return NotImplemented
        return (
            self.same_rows(other)
            and self.record_every == other.record_every
            and self.schedule_valid == other.schedule_valid
            and self.unsafe == other.unsafe
            and self.error_n == other.error_n
        )

    @classmethod
    def from_rows(cls, rows: Sequence[TraceRow], **kwargs):
        """Build a trace from row objects (used for fixtures and parsing)."""
        rows = list(rows)
        dim = rows[0].x.size if rows else 0
        trace = cls(
            n=np.array([r.n for r in rows], dtype=np.int64),
            lam=np.array([r.lam for r in rows], dtype=float),
            eps=np.array([r.eps for r in rows], dtype=float),
            x=np.array([r.x for r in rows], dtype=float).reshape(len(rows), dim),
            xbar=np.array([r.xbar for r in rows], dtype=float).reshape(len(rows), dim),
            eps_u_norm=np.array([r.eps_u_norm for r in rows], dtype=float),
            dist=np.array([np.nan if r.dist_to_solution is None else r.dist_to_solution
                           for r in rows], dtype=float),
            **kwargs,
        )
        if "h1_sup" not in kwargs and rows:
            trace.h1_sup = float(trace.eps_u_norm.max())
        return trace


class TraceRecorder:
    """Append-only accumulator that produces a `ConvergenceTrace`."""

    def __init__(self, dim):
        self.dim = dim
        self._cols = {k: [] for k in ("n", "lam", "eps", "x", "xbar", "eps_u_norm", "dist")}
        self.h1_sup = 0.0

    def observe(self, eps_u_norm):
        if eps_u_norm > self.h1_sup:
            self.h1_sup = eps_u_norm

    def append(self, n, lam, eps, x, xbar, eps_u_norm, dist):
        c = self._cols
        c["n"].append(n)
        c["lam"].append(lam)
        c["eps"].append(eps)
        c["x"].append(x)
        c["xbar"].append(xbar)
        c["eps_u_norm"].append(eps_u_norm)
        c["dist"].append(np.nan if dist is None else dist)

    def finish(self, **kwargs):
        c = self._cols
        m = len(c["n"])
        return ConvergenceTrace(
            n=np.array(c["n"], dtype=np.int64),
            lam=np.array(c["lam"], dtype=float),
            eps=np.array(c["eps"], dtype=float),
            x=np.array(c["x"], dtype=float).reshape(m, self.dim),
            xbar=np.array(c["xbar"], dtype=float).reshape(m, self.dim),
            eps_u_norm=np.array(c["eps_u_norm"], dtype=float),
            dist=np.array(c["dist"], dtype=float),
            h1_sup=self.h1_sup,
            **kwargs,
        )
