"""Executable checks for the inequalities and hypotheses behind convergence.

Nothing here proves anything: every check evaluates an inequality on the
data at hand (a trace, a sampled graph, a probe grid) and reports what it
found, with a small numerical slack.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import EmptySubdifferentialError, InsufficientResolutionError, UnsupportedOracleError
from .oracles import Indicator, NegSqrt, Singleton, check_eps_enlargement, check_eps_subgradient

__all__ = [
    "TransportationResult",
    "H1Result",
    "FejerResult",
    "H2PrimeResult",
    "HypothesisReport",
    "check_transportation",
    "check_h1",
    "check_fejer",
    "check_h2_example",
    "check_h2prime",
    "lattice_probes",
    "diagnose",
]

FEJER_SLACK = 1e-9
TRANSPORT_SLACK = 1e-12


@dataclass(frozen=True)
class TransportationResult:
    holds: bool
    lhs: float
    rhs: float
    vacuous: bool = False


def check_transportation(op, p1, eps1, p2, eps2):
    """Evaluate ``<v - u, y - x> >= -(sqrt(eps1) + sqrt(eps2))**2``.

    ``p1 = (x, u)`` and ``p2 = (y, v)`` should lie in the eps1- and
    eps2-enlargements of the sampled operator; when either membership check
    fails the result is flagged ``vacuous``.
    """
    x, u = (np.atleast_1d(np.asarray(a, dtype=float)) for a in p1)
    y, v = (np.atleast_1d(np.asarray(a, dtype=float)) for a in p2)
    lhs = float((v - u) @ (y - x))
    rhs = -(math.sqrt(eps1) + math.sqrt(eps2)) ** 2
    vacuous = not (check_eps_enlargement(op, x, u, eps1) and check_eps_enlargement(op, y, v, eps2))
    return TransportationResult(holds=lhs >= rhs - TRANSPORT_SLACK, lhs=lhs, rhs=rhs, vacuous=vacuous)


@dataclass(frozen=True)
class H1Result:
    """Observed behaviour of ``eps_n * ||u_n||`` along a trace.

    `trend` is ``"plateau"`` when the last-quartile supremum does not exceed
    the first-quartile one, ``"growth"`` otherwise (suspected unbounded), and
    ``"undetermined"`` for traces shorter than four rows.
    """

    sup: float
    first_quartile_sup: float
    last_quartile_sup: float
    trend: str
    bound: Optional[float] = None
    violated: bool = False


def check_h1(trace, bound=None):
    vals = trace.eps_u_norm
    if vals.size == 0:
        raise InsufficientResolutionError("trace has no rows")
    sup = max(float(vals.max()), float(trace.h1_sup))
    q = vals.size // 4
    if q == 0:
        first = last = float(vals.max())
        trend = "undetermined"
    else:
        first = float(vals[:q].max())
        last = float(vals[-q:].max())
        trend = "plateau" if last <= first * (1.0 + 1e-9) + 1e-12 else "growth"
    violated = bound is not None and sup > bound + 1e-12 * (1.0 + abs(bound))
    return H1Result(sup=sup, first_quartile_sup=first, last_quartile_sup=last,
                    trend=trend, bound=bound, violated=bool(violated))


@dataclass(frozen=True)
class FejerResult:
    violations: int
    worst_margin: Optional[float]
    pairs: int
    M: float


def check_fejer(trace, x_star, M):
    """Count steps breaking ``|x_{n+1}-x*|^2 <= |x_n-x*|^2 + lam_n^(4/3) (4M^2+12)``.

    Needs every iterate: a thinned trace raises `InsufficientResolutionError`.
    `worst_margin` is the largest ``lhs - rhs`` over all consecutive pairs.
    """
    if not trace.is_unthinned():
        raise InsufficientResolutionError(
            "Fejer check needs consecutive iterates; rerun with record_every=1")
    x_star = np.asarray(x_star, dtype=float).reshape(-1)
    if len(trace) < 2:
        return FejerResult(violations=0, worst_margin=None, pairs=0, M=float(M))
    sq = np.sum((trace.x - x_star) ** 2, axis=1)
    lhs = sq[1:]
    rhs = sq[:-1] + trace.lam[:-1] ** (4.0 / 3.0) * (4.0 * M * M + 12.0)
    margin = lhs - rhs
    return FejerResult(
        violations=int(np.count_nonzero(margin > FEJER_SLACK)),
        worst_margin=float(margin.max()),
        pairs=int(margin.size),
        M=float(M),
    )


def check_h2_example(eps):
    """Verify the qualification-free hypothesis for ``-sqrt`` over ``{0}`` at one eps.

    Checks that ``u = -1/(4 eps)`` is an eps-subgradient of ``-sqrt`` at 0
    lying in the ball of radius ``1/(4 eps)``, and that ``+1/(4 eps)`` is an
    eps-subgradient of the indicator of ``{0}`` at 0, so the two sum to 0.
    """
    eps = float(eps)
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    radius = 0.25 / eps
    u = -radius
    y_tight = 4.0 * eps * eps
    probes = np.concatenate([
        [0.0, y_tight],
        y_tight * np.logspace(-6, 6, 2001),
        np.linspace(0.0, 10.0 * max(1.0, y_tight), 1001),
    ])[:, None]
    origin = np.zeros(1)
    in_f = check_eps_subgradient(NegSqrt(), origin, [u], eps, probes)
    in_ball = abs(u) <= radius
    in_indicator = check_eps_subgradient(Indicator(Singleton([0.0])), origin, [radius], eps, probes)
    return bool(in_f and in_ball and in_indicator)


@dataclass(frozen=True)
class H2PrimeResult:
    verified_points: list
    multipliers: list


def _multiplier(A, B, x):
    """Candidate ``v`` with ``v in dA(x)`` and ``-v in dB(x)``, or None."""
    if not (A.in_domain(x) and B.in_domain(x)):
        return None
    try:
        return -np.asarray(B.gradient(x), dtype=float)
    except EmptySubdifferentialError:
        return None
    except UnsupportedOracleError:
        if x.size != 1:
            raise
    a = A.subdifferential_interval(x)
    b = B.subdifferential_interval(x)
    if a is None or b is None:
        return None
    lo, hi = max(a[0], -b[1]), min(a[1], -b[0])
    if lo > hi:
        return None
    if math.isfinite(lo) and math.isfinite(hi):
        v = 0.5 * (lo + hi)
    elif math.isfinite(lo) or math.isfinite(hi):
        v = lo if math.isfinite(lo) else hi
    else:
        v = 0.0
    return np.array([v])


def check_h2prime(problem, candidates, probes, tol=1e-9):
    """Find the candidates ``x`` with some ``v in dA(x)`` and ``-v in dB(x)``.

    The multiplier is obtained in closed form (gradient of `B`, or an
    intersection of 1-D subdifferential intervals) and then confirmed with
    the exact (``eps = 0``) subgradient inequality on `probes`.
    """
    A, B = problem.A, problem.B
    verified, multipliers = [], []
    for x in candidates:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        v = _multiplier(A, B, x)
        if v is None:
            continue
        if check_eps_subgradient(A, x, v, 0.0, probes, tol) and \
                check_eps_subgradient(B, x, -v, 0.0, probes, tol):
            verified.append(x)
            multipliers.append(v)
    return H2PrimeResult(verified_points=verified, multipliers=multipliers)


def lattice_probes(center, radius=10.0, per_axis=None):
    """Probe lattice around `center` (2001 nodes in 1-D, 41 per axis above)."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    d = center.size
    per_axis = per_axis or (2001 if d == 1 else 41)
    axes = [np.linspace(c - radius, c + radius, per_axis) for c in center]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    return np.vstack([center, pts])


@dataclass(frozen=True)
class HypothesisReport:
    h1_sup: float
    h1_trend: str
    h1_first_quartile_sup: float
    h1_last_quartile_sup: float
    h1_bound: Optional[float]
    h1_violation: bool
    h2_analytic: str
    fejer_violations: Optional[int]
    fejer_worst_margin: Optional[float]
    fejer_M: Optional[float]
    fejer_note: Optional[str] = None

    @property
    def failed(self):
        return (
            self.h1_violation
            or self.h1_trend == "growth"
            or (self.fejer_violations or 0) > 0
            or self.h2_analytic == "refuted"
        )

    def to_dict(self):
        out = asdict(self)
        out["failed"] = self.failed
        return out


def _h2_status(problem, trace):
    if problem is None:
        return "unknown"
    if problem.id == "paper-example":
        eps_values = np.unique(trace.eps[trace.eps > 0])
        if eps_values.size > 50:
            eps_values = eps_values[np.linspace(0, eps_values.size - 1, 50).astype(int)]
        if eps_values.size == 0:
            return "unknown"
        return "verified" if all(check_h2_example(e) for e in eps_values) else "refuted"
    if problem.spec.h2prime:
        found = check_h2prime(problem.spec, [problem.solution], lattice_probes(problem.solution))
        return "verified" if found.verified_points else "unknown"
    return "unknown"


def diagnose(trace, problem=None, x_star=None, bound=None, margin=0.01):
    """Assemble a `HypothesisReport` for a trace.

    `problem` (a builtin) supplies the solution, the expected bound on
    ``eps_n ||u_n||`` and the analytic second-hypothesis verdict when the
    explicit arguments are omitted. The Fejer check uses ``M = max(h1 sup, bound hint) + margin``
    and is skipped, with a note, on thinned traces.
    """
    if problem is not None:
        if x_star is None:
            x_star = problem.solution
        if bound is None:
            bound = problem.notes.get("h1_bound")
    h1 = check_h1(trace, bound)
    fejer = note = M = None
    if x_star is None:
        note = "no reference solution"
    elif not trace.is_unthinned():
        note = "trace is thinned"
    else:
        M = max(h1.sup, bound or 0.0) + margin
        fejer = check_fejer(trace, x_star, M)
    return HypothesisReport(
        h1_sup=h1.sup,
        h1_trend=h1.trend,
        h1_first_quartile_sup=h1.first_quartile_sup,
        h1_last_quartile_sup=h1.last_quartile_sup,
        h1_bound=bound,
        h1_violation=h1.violated,
        h2_analytic=_h2_status(problem, trace),
        fejer_violations=None if fejer is None else fejer.violations,
        fejer_worst_margin=None if fejer is None else fejer.worst_margin,
        fejer_M=M,
        fejer_note=note,
    )
