"""Closed-form eps-subgradient oracles, resolvents and brute-force validators.

Each function kind knows its effective domain, how to pick an element of
its eps-subdifferential, and (where one exists in closed form) its
resolvent ``(I + lam * df)^-1``. The validators at the bottom of the module
test the defining inequalities on finite probe sets. They are necessary
conditions only: ``False`` certifies a violation, ``True`` means no
violation was found among the probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import as_point
from .errors import (
    DimensionMismatchError,
    DomainError,
    EmptySubdifferentialError,
    InvalidParameterError,
    UnsupportedOracleError,
    UnsupportedResolventError,
)

__all__ = [
    "SelectionStrategy",
    "ConvexSet",
    "Singleton",
    "Box",
    "Halfspace",
    "Ball",
    "ConvexFunction",
    "NegSqrt",
    "Quadratic",
    "Abs",
    "Indicator",
    "Linear",
    "SampledOperator",
    "eps_subgradient",
    "check_eps_subgradient",
    "check_eps_enlargement",
    "check_monotone_graph",
    "project",
    "resolvent",
    "sample_graph",
    "probe_grid",
]

_INF = math.inf


# ---------------------------------------------------------------------------
# Selection strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SelectionStrategy:
    """Which element of an eps-subdifferential an oracle returns.

    ``min_norm``
        The least-norm exact subgradient when ``df(x)`` is nonempty,
        otherwise the least-norm eps-subgradient.
    ``boundary``
        A boundary point of ``d_eps f(x)`` (see each function kind).
    ``random``
        A draw from ``d_eps f(x)`` fully determined by `seed`.
    """

    kind: str = "min_norm"
    seed: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("min_norm", "boundary", "random"):
            raise InvalidParameterError(f"unknown selection strategy {self.kind!r}")
        if self.kind == "random":
            seed = self.seed
            if seed is None:
                raise InvalidParameterError("random strategy requires a seed")
            seed = (int(seed),) if np.ndim(seed) == 0 else tuple(int(s) for s in seed)
            object.__setattr__(self, "seed", seed)

    @classmethod
    def min_norm(cls):
        return cls("min_norm")

    @classmethod
    def boundary(cls):
        return cls("boundary")

    @classmethod
    def random(cls, seed):
        return cls("random", seed)

    def at_step(self, n):
        """Per-iteration strategy; random draws get the sub-seed ``(seed, n)``."""
        if self.kind != "random":
            return self
        return SelectionStrategy("random", self.seed + (int(n),))

    def rng(self):
        return np.random.default_rng(list(self.seed))


_MIN_NORM = SelectionStrategy()


def _pick_from_interval(lo, hi, strategy, prefer_high=True):
    """Choose from the closed interval [lo, hi] (ends may be infinite)."""
    if strategy.kind == "boundary":
        if prefer_high:
            return hi if math.isfinite(hi) else lo
        return lo if math.isfinite(lo) else hi
    rng = strategy.rng()
    if math.isfinite(lo) and math.isfinite(hi):
        return float(rng.uniform(lo, hi))
    if math.isfinite(lo):
        return lo + float(rng.exponential())
    if math.isfinite(hi):
        return hi - float(rng.exponential())
    return float(rng.standard_normal())


# ---------------------------------------------------------------------------
# Convex sets
# ---------------------------------------------------------------------------

class ConvexSet:
    """Nonempty closed convex subset of R^d with a closed-form projection."""

    dim: int

    def project(self, z):
        raise NotImplementedError

    def contains(self, z, tol=1e-12):
        z = np.asarray(z, dtype=float)
        return bool(np.linalg.norm(z - self.project(z)) <= tol * (1.0 + np.linalg.norm(z)))

    def distance(self, z):
        z = np.asarray(z, dtype=float)
        r = z - self.project(z)
        return math.sqrt(float(r @ r))

    def normal_interval(self, x):
        """Normal cone at `x` as an interval (1-D sets only)."""
        raise UnsupportedOracleError(f"no 1-D normal cone for {type(self).__name__}")

    def eps_normal_interval(self, x, eps):
        """``{u : <u, y - x> <= eps for all y in C}`` as an interval (1-D only)."""
        raise UnsupportedOracleError(
            f"eps-normal set of {type(self).__name__} has no implemented closed form")

    def normal_samples(self, x):
        """A few elements of the normal cone at `x` (always includes 0)."""
        return [np.zeros(self.dim)]

    def _check_dim(self, z):
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.dim:
            raise DimensionMismatchError(f"point of dimension {z.shape[-1]} for a set in R^{self.dim}")
        return z


class Singleton(ConvexSet):
    def __init__(self, p):
        self.p = as_point(p, name="p")
        self.dim = self.p.size

    def __repr__(self):
        return f"Singleton({self.p.tolist()})"

    def project(self, z):
        z = self._check_dim(z)
        if z.ndim == 1:
            return self.p.copy()
        return np.broadcast_to(self.p, z.shape).copy()

    def normal_interval(self, x):
        return -_INF, _INF

    def eps_normal_interval(self, x, eps):
        if self.dim != 1:
            return super().eps_normal_interval(x, eps)
        return -_INF, _INF

    def normal_samples(self, x):
        eye = np.eye(self.dim)
        return [np.zeros(self.dim)] + [s * e for e in eye for s in (1.0, -1.0, 10.0, -10.0)]


class Box(ConvexSet):
    """Componentwise bounds ``lo <= x <= hi``; infinite bounds are allowed."""

    def __init__(self, lo, hi):
        lo = np.atleast_1d(np.array(lo, dtype=float))
        hi = np.atleast_1d(np.array(hi, dtype=float))
        lo, hi = np.broadcast_arrays(lo, hi)
        if lo.ndim != 1 or np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise InvalidParameterError("box bounds must be vectors without NaN")
        if np.any(lo > hi) or np.any(lo == _INF) or np.any(hi == -_INF):
            raise InvalidParameterError(f"empty box: lo={lo}, hi={hi}")
        self.lo = lo.copy()
        self.hi = hi.copy()
        self.lo.flags.writeable = False
        self.hi.flags.writeable = False
        self.dim = lo.size

    def __repr__(self):
        return f"Box({self.lo.tolist()}, {self.hi.tolist()})"

    def project(self, z):
        return np.clip(self._check_dim(z), self.lo, self.hi)

    def normal_interval(self, x):
        if self.dim != 1:
            return super().normal_interval(x)
        lo, hi, x = self.lo[0], self.hi[0], float(np.asarray(x).reshape(-1)[0])
        at_lo, at_hi = _close(x, lo), _close(x, hi)
        return (-_INF if at_lo else 0.0), (_INF if at_hi else 0.0)

    def eps_normal_interval(self, x, eps):
        if self.dim != 1:
            return super().eps_normal_interval(x, eps)
        x = float(np.asarray(x).reshape(-1)[0])
        up_room = self.hi[0] - x
        down_room = x - self.lo[0]
        hi = eps / up_room if up_room > 0 else _INF
        lo = -eps / down_room if down_room > 0 else -_INF
        return lo, hi

    def normal_samples(self, x):
        x = np.asarray(x, dtype=float)
        out = [np.zeros(self.dim)]
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = 1.0
            if _close(x[i], self.hi[i]):
                out += [e, 10.0 * e]
            if _close(x[i], self.lo[i]):
                out += [-e, -10.0 * e]
        return out


class Halfspace(ConvexSet):
    """``{x : <g, x> <= b}`` with ``g != 0``."""

    def __init__(self, g, b):
        self.g = as_point(g, name="g")
        self.b = float(b)
        self._gg = float(self.g @ self.g)
        if self._gg == 0.0:
            raise InvalidParameterError("halfspace normal g must be nonzero")
        self.dim = self.g.size

    def __repr__(self):
        return f"Halfspace({self.g.tolist()}, {self.b})"

    def project(self, z):
        z = self._check_dim(z)
        excess = np.maximum(0.0, z @ self.g - self.b)
        return z - np.multiply.outer(excess / self._gg, self.g)

    def _slack(self, x):
        return self.b - float(np.asarray(x, dtype=float) @ self.g)

    def normal_interval(self, x):
        if self.dim != 1:
            return super().normal_interval(x)
        if _close(self._slack(x), 0.0, scale=abs(self.b)):
            return (0.0, _INF) if self.g[0] > 0 else (-_INF, 0.0)
        return 0.0, 0.0

    def ray_bound(self, x, eps):
        """Largest ``t`` with ``t * g`` in the eps-normal set at `x`."""
        slack = self._slack(x)
        return eps / slack if slack > 0 else _INF

    def eps_normal_interval(self, x, eps):
        if self.dim != 1:
            return super().eps_normal_interval(x, eps)
        t = self.ray_bound(x, eps)
        ends = (0.0, t * self.g[0])
        return min(ends), max(ends)

    def normal_samples(self, x):
        out = [np.zeros(self.dim)]
        if _close(self._slack(x), 0.0, scale=abs(self.b)):
            out += [self.g.copy(), 10.0 * self.g]
        return out


class Ball(ConvexSet):
    def __init__(self, center, r):
        self.center = as_point(center, name="center")
        self.r = float(r)
        if not self.r >= 0:
            raise InvalidParameterError(f"ball radius must be >= 0, got {r}")
        self.dim = self.center.size

    def __repr__(self):
        return f"Ball({self.center.tolist()}, {self.r})"

    def project(self, z):
        z = self._check_dim(z)
        d = z - self.center
        norm = np.linalg.norm(d, axis=-1, keepdims=True)
        scale = np.where(norm > self.r, self.r / np.where(norm > 0, norm, 1.0), 1.0)
        return self.center + d * scale

    def normal_interval(self, x):
        if self.dim != 1:
            return super().normal_interval(x)
        return Box(self.center - self.r, self.center + self.r).normal_interval(x)

    def eps_normal_interval(self, x, eps):
        if self.dim != 1:
            return super().eps_normal_interval(x, eps)
        return Box(self.center - self.r, self.center + self.r).eps_normal_interval(x, eps)

    def normal_samples(self, x):
        d = np.asarray(x, dtype=float) - self.center
        out = [np.zeros(self.dim)]
        if self.r == 0:
            return Singleton(self.center).normal_samples(x)
        if _close(float(np.linalg.norm(d)), self.r):
            out += [d, 10.0 * d]
        return out


def _close(a, b, scale=0.0):
    if math.isinf(b):
        return False
    return abs(a - b) <= 1e-12 * (1.0 + abs(b) + scale)


# ---------------------------------------------------------------------------
# Convex functions
# ---------------------------------------------------------------------------

class ConvexFunction:
    """Proper convex lsc function with closed-form eps-subgradients.

    Subclasses evaluate on arrays of shape ``(..., d)`` and return ``+inf``
    outside the effective domain.
    """

    #: Fixed dimension, or None when any dimension is accepted.
    dim: Optional[int] = None

    def __call__(self, y):
        raise NotImplementedError

    def value(self, x):
        return float(self(np.asarray(x, dtype=float)))

    def in_domain(self, x):
        return math.isfinite(self.value(x))

    def _point(self, x):
        x = as_point(x, dim=self.dim)
        if not self.in_domain(x):
            raise DomainError(f"{x.tolist()} lies outside dom f for {self!r}")
        return x

    def eps_subgradient(self, x, eps, strategy=_MIN_NORM):
        raise NotImplementedError

    def resolvent(self, lam, z):
        raise UnsupportedResolventError(f"{self!r} has no closed-form resolvent")

    def subdifferential_interval(self, x):
        """Exact subdifferential at a 1-D point as ``(lo, hi)``; None if empty."""
        raise UnsupportedOracleError(f"no exact subdifferential for {self!r}")

    def gradient(self, x):
        """The unique subgradient at `x`; raises where ``df(x)`` is not a singleton."""
        lo, hi = self._interval_or_raise(x)
        if lo != hi:
            raise UnsupportedOracleError(f"{self!r} is not differentiable at {x}")
        return np.array([lo])

    def _interval_or_raise(self, x):
        x = self._point(x)
        if x.size != 1:
            raise UnsupportedOracleError(f"exact subdifferential of {self!r} only in 1-D")
        interval = self.subdifferential_interval(x)
        if interval is None:
            raise EmptySubdifferentialError(f"exact subdifferential empty at x={x[0]:g}")
        return interval

    def subgradient_samples(self, x):
        """A few elements of ``df(x)``; empty where the subdifferential is."""
        raise NotImplementedError


def _check_eps(eps):
    eps = float(eps)
    if not eps >= 0 or not math.isfinite(eps):
        raise InvalidParameterError(f"eps must be a finite number >= 0, got {eps}")
    return eps


class NegSqrt(ConvexFunction):
    """``f(t) = -sqrt(t)`` on ``t >= 0``, ``+inf`` elsewhere.

    At ``t = 0`` the exact subdifferential is empty while
    ``d_eps f(0) = (-inf, -1/(4 eps)]``. For ``t > 0`` the eps-subdifferential
    is the interval of ``u = -w`` with ``t*w**2 - (eps + sqrt(t))*w + 1/4 <= 0``.
    The ``boundary`` strategy returns the endpoint nearest zero, which tends
    to ``-1/(4 eps)`` as ``t -> 0+``.
    """

    dim = 1

    def __repr__(self):
        return "NegSqrt()"

    def __call__(self, y):
        y = np.asarray(y, dtype=float)[..., 0]
        with np.errstate(invalid="ignore"):
            return np.where(y >= 0, -np.sqrt(np.maximum(y, 0.0)), _INF)

    def eps_interval(self, x, eps):
        t = float(x[0])
        s = math.sqrt(t)
        beta = eps + s
        root = math.sqrt(eps * (eps + 2.0 * s))
        w_lo = 1.0 / (2.0 * (beta + root))
        w_hi = (beta + root) / (2.0 * t) if t > 0 else _INF
        return -w_hi, -w_lo

    def eps_subgradient(self, x, eps, strategy=_MIN_NORM):
        x = self._point(x)
        eps = _check_eps(eps)
        t = float(x[0])
        if t == 0.0 and eps == 0.0:
            raise EmptySubdifferentialError("exact subdifferential empty at x=0")
        if strategy.kind == "min_norm":
            u = -0.5 / math.sqrt(t) if t > 0 else -0.25 / eps
        else:
            lo, hi = self.eps_interval(x, eps)
            if strategy.kind == "boundary":
                u = hi
            elif math.isinf(lo):
                u = hi * (1.0 + float(strategy.rng().exponential()))
            else:
                u = float(strategy.rng().uniform(lo, hi))
        return np.array([u])

    def subdifferential_interval(self, x):
        t = float(self._point(x)[0])
        if t == 0.0:
            return None
        g = -0.5 / math.sqrt(t)
        return g, g

    def subgradient_samples(self, x):
        t = float(self._point(x)[0])
        return [] if t == 0.0 else [np.array([-0.5 / math.sqrt(t)])]


class Quadratic(ConvexFunction):
    """``f(x) = 0.5 * ||x - a||**2``.

    ``d_eps f(x)`` is the ball of radius ``sqrt(2 eps)`` around ``x - a``;
    ``boundary`` steps out along ``x - a`` (along ``e_1`` when ``x == a``).
    """

    def __init__(self, a):
        self.a = as_point(a, name="a")
        self.dim = self.a.size

    def __repr__(self):
        return f"Quadratic({self.a.tolist()})"

    def in_domain(self, x):
        return True

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return 0.5 * np.sum((y - self.a) ** 2, axis=-1)

    def eps_subgradient(self, x, eps, strategy=_MIN_NORM):
        x = self._point(x)
        eps = _check_eps(eps)
        center = x - self.a
        if strategy.kind == "min_norm" or eps == 0.0:
            return center
        radius = math.sqrt(2.0 * eps)
        if strategy.kind == "boundary":
            norm = np.linalg.norm(center)
            if norm > 0:
                direction = center / norm
            else:
                direction = np.zeros(self.dim)
                direction[0] = 1.0
            return center + radius * direction
        rng = strategy.rng()
        direction = rng.standard_normal(self.dim)
        direction /= np.linalg.norm(direction)
        return center + radius * rng.uniform() ** (1.0 / self.dim) * direction

    def resolvent(self, lam, z):
        z = as_point(z, dim=self.dim)
        return (z + lam * self.a) / (1.0 + lam)

    def subdifferential_interval(self, x):
        g = float(self._point(x)[0] - self.a[0])
        return g, g

    def gradient(self, x):
        return self._point(x) - self.a

    def subgradient_samples(self, x):
        return [self._point(x) - self.a]


class Abs(ConvexFunction):
    """``f(x) = sum_i |x_i|``, i.e. ``|t|`` in one dimension.

    In 1-D the eps-subdifferential is exact: ``[-1, 1]`` at 0 and
    ``[max(-1, 1 - eps/t), 1]`` for ``t > 0`` (mirrored for ``t < 0``). In
    higher dimension ``boundary`` and ``random`` work inside the subset
    obtained by giving every coordinate an ``eps/d`` share. ``boundary``
    picks the endpoint away from ``sign(t)`` (``+1`` at ``t = 0``).
    """

    def __repr__(self):
        return "Abs()"

    def in_domain(self, x):
        return True

    def __call__(self, y):
        return np.sum(np.abs(np.asarray(y, dtype=float)), axis=-1)

    def coordinate_interval(self, t, eps):
        if t > 0:
            return max(-1.0, 1.0 - eps / t), 1.0
        if t < 0:
            return -1.0, min(1.0, -1.0 + eps / -t)
        return -1.0, 1.0

    def eps_subgradient(self, x, eps, strategy=_MIN_NORM):
        x = self._point(x)
        eps = _check_eps(eps)
        if strategy.kind == "min_norm":
            return np.sign(x)
        share = eps / x.size
        rng = strategy.rng() if strategy.kind == "random" else None
        u = np.empty(x.size)
        for i, t in enumerate(x):
            lo, hi = self.coordinate_interval(float(t), share)
            if rng is not None:
                u[i] = rng.uniform(lo, hi)
            else:
                u[i] = hi if t <= 0 else lo
        return u

    def resolvent(self, lam, z):
        z = as_point(z)
        return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)

    def subdifferential_interval(self, x):
        t = float(self._point(x)[0])
        if t == 0.0:
            return -1.0, 1.0
        s = math.copysign(1.0, t)
        return s, s

    def gradient(self, x):
        x = self._point(x)
        if np.any(x == 0):
            raise UnsupportedOracleError(f"|.| is not differentiable at {x.tolist()}")
        return np.sign(x)

    def subgradient_samples(self, x):
        x = self._point(x)
        s = np.sign(x)
        zero = s == 0
        if not zero.any():
            return [s]
        return [np.where(zero, v, s) for v in (-1.0, -0.5, 0.0, 0.5, 1.0)]


class Linear(ConvexFunction):
    """``f(x) = <g, x>``; every eps-subdifferential is ``{g}``."""

    def __init__(self, g):
        self.g = as_point(g, name="g")
        self.dim = self.g.size

    def __repr__(self):
        return f"Linear({self.g.tolist()})"

    def in_domain(self, x):
        return True

    def __call__(self, y):
        return np.asarray(y, dtype=float) @ self.g

    def eps_subgradient(self, x, eps, strategy=_MIN_NORM):
        self._point(x)
        _check_eps(eps)
        return self.g.copy()

    def resolvent(self, lam, z):
        return as_point(z, dim=self.dim) - lam * self.g

    def subdifferential_interval(self, x):
        self._point(x)
        return float(self.g[0]), float(self.g[0])

    def gradient(self, x):
        self._point(x)
        return self.g.copy()

    def subgradient_samples(self, x):
        self._point(x)
        return [self.g.copy()]


class Indicator(ConvexFunction):
    """Indicator of a convex set: 0 on `C`, ``+inf`` off it.

    ``min_norm`` returns 0, which is always an exact subgradient on `C`.
    The other strategies need the eps-normal set in closed form, available
    for singletons, 1-D boxes and balls, and halfspaces; anything else raises
    `UnsupportedOracleError`. The resolvent is the projection for every step.
    """

    def __init__(self, C):
        self.C = C
        self.dim = C.dim

    def __repr__(self):
        return f"Indicator({self.C!r})"

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        proj = self.C.project(y)
        gap = np.linalg.norm(y - proj, axis=-1)
        scale = 1.0 + np.linalg.norm(y, axis=-1)
        return np.where(gap <= 1e-12 * scale, 0.0, _INF)

    def eps_subgradient(self, x, eps, strategy=_MIN_NORM):
        x = self._point(x)
        eps = _check_eps(eps)
        if strategy.kind == "min_norm":
            return np.zeros(self.dim)
        C = self.C
        if isinstance(C, Halfspace):
            t_max = C.ray_bound(x, eps)
            if strategy.kind == "boundary":
                t = t_max if math.isfinite(t_max) else 0.0
            else:
                t = _pick_from_interval(0.0, t_max, strategy)
            return t * C.g
        if isinstance(C, Singleton) and strategy.kind == "random":
            return strategy.rng().standard_normal(self.dim)
        if isinstance(C, Singleton):
            raise UnsupportedOracleError(
                "eps-normal set of a singleton is the whole space and has no boundary point")
        lo, hi = C.eps_normal_interval(x, eps)
        return np.array([_pick_from_interval(lo, hi, strategy)])

    def resolvent(self, lam, z):
        return self.C.project(as_point(z, dim=self.dim))

    def subdifferential_interval(self, x):
        return self.C.normal_interval(self._point(x))

    def subgradient_samples(self, x):
        return self.C.normal_samples(self._point(x))


# ---------------------------------------------------------------------------
# Sampled operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledOperator:
    """Finite sample ``{(x_i, v_i)}`` of the graph of a set-valued operator."""

    xs: np.ndarray
    vs: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        vs = np.asarray(self.vs, dtype=float)
        if xs.ndim == 1:
            xs = xs[:, None]
        if vs.ndim == 1:
            vs = vs[:, None]
        if xs.shape != vs.shape or xs.ndim != 2:
            raise DimensionMismatchError(f"graph arrays disagree: {xs.shape} vs {vs.shape}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "vs", vs)

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls(np.array([np.atleast_1d(p[0]) for p in pairs], dtype=float),
                   np.array([np.atleast_1d(p[1]) for p in pairs], dtype=float))

    @classmethod
    def identity(cls, points):
        pts = np.asarray(points, dtype=float)
        return cls(pts, pts.copy())

    @property
    def dim(self):
        return self.xs.shape[1]

    def __len__(self):
        return self.xs.shape[0]


def sample_graph(oracle, points):
    """Sample the graph of ``df`` at each point of `points` inside dom f."""
    pairs = []
    for y in np.asarray(points, dtype=float).reshape(len(points), -1):
        if not oracle.in_domain(y):
            continue
        pairs.extend((y, v) for v in oracle.subgradient_samples(y))
    return SampledOperator.from_pairs(pairs)


def probe_grid(center, radius, m=1001):
    """Regular 1-D probe grid of `m` points on ``[center - radius, center + radius]``."""
    return np.linspace(center - radius, center + radius, m)[:, None]


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def eps_subgradient(oracle, x, eps, strategy=_MIN_NORM):
    """Return an element of ``d_eps f(x)`` chosen by `strategy`.

    Raises `DomainError` outside dom f and `EmptySubdifferentialError` when
    ``eps == 0`` at a point where ``df(x)`` is empty.

    >>> float(eps_subgradient(NegSqrt(), [0.0], 0.25, SelectionStrategy.boundary())[0])
    -1.0
    """
    return oracle.eps_subgradient(x, eps, strategy)


def resolvent(oracle, lam, z):
    """``(I + lam * df)^-1 (z)`` for kinds with a closed form."""
    if not lam > 0:
        raise InvalidParameterError(f"resolvent step must be positive, got {lam}")
    return oracle.resolvent(float(lam), z)


def project(C, z):
    return C.project(as_point(z, dim=C.dim, name="z"))


def check_eps_subgradient(oracle, x, u, eps, probes, tol=1e-9):
    """True iff ``f(x) + <u, y - x> <= f(y) + eps`` at every probe `y`.

    Probes where ``f(y) = +inf`` satisfy the inequality automatically. The
    comparison allows a relative slack `tol` scaled by the magnitudes of the
    terms involved.
    """
    x = as_point(x, dim=oracle.dim)
    fx = oracle.value(x)
    if not math.isfinite(fx):
        raise DomainError(f"{x.tolist()} lies outside dom f for {oracle!r}")
    u = np.asarray(u, dtype=float).reshape(x.shape)
    Y = np.asarray(probes, dtype=float).reshape(-1, x.size)
    fy = oracle(Y)
    finite = np.isfinite(fy)
    if not finite.any():
        return True
    Y, fy = Y[finite], fy[finite]
    inner = (Y - x) @ u
    lhs = fx + inner
    rhs = fy + eps
    scale = 1.0 + abs(fx) + np.abs(fy) + np.abs(inner) + eps
    return bool(np.all(lhs - rhs <= tol * scale))


def check_eps_enlargement(op, x, u, eps, tol=1e-12):
    """True iff ``<v - u, y - x> >= -eps`` for every sampled pair ``(y, v)``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if x.size != op.dim or u.size != op.dim:
        raise DimensionMismatchError(
            f"point dims ({x.size}, {u.size}) do not match operator dim {op.dim}")
    inner = np.einsum("ij,ij->i", op.vs - u, op.xs - x)
    return bool(np.all(inner >= -eps - tol * (1.0 + np.abs(inner))))


def check_monotone_graph(op, tol=1e-12):
    """True iff ``<v - u, y - x> >= 0`` over all pairs of graph samples."""
    xs, vs = op.xs, op.vs
    dx = xs[:, None, :] - xs[None, :, :]
    dv = vs[:, None, :] - vs[None, :, :]
    inner = np.einsum("ijk,ijk->ij", dv, dx)
    return bool(np.all(inner >= -tol * (1.0 + np.abs(inner))))
