"""Self-similar orbits of the polygon flow: scalings, rotators, translators.

A motion X(t) is self-similar when it stays inside the initial polygon's
mode span for all time.  Scaling orbits g(t) X0 exist for any single mode
pair; rigid rotators exist exactly in the undamped flow; translators are
never nontrivial (the flow has no spatial drift term), only single points
drift along ballistic or saturating paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NoSuchSolutionError, SpanViolationError
from .flow import angular_rate, rate_pair
from .geometry import Polygon, decompose
from .spectral import CirculantOperator, eigenvalue, real_basis

SPAN_TOLERANCE = 1e-10


class ScalingBranch(Enum):
    LINEAR_ZERO_MODE = "linear-zero-mode"
    EXP_ZERO_MODE = "exp-zero-mode"
    UNDERDAMPED_OSC = "underdamped-oscillatory"
    OVERDAMPED_EXP = "overdamped-exponential"


def _g_oscillatory(lam: float, beta: float, c: float, t):
    """Profile exp(-beta t/2)(cos(gamma t) + c sin(gamma t)), gamma^2 = -lam - beta^2/4."""
    gam = math.sqrt(max(-lam - (beta / 2.0) ** 2, 0.0))
    t = np.asarray(t, dtype=float)
    return np.exp(-0.5 * beta * t) * (np.cos(gam * t) + c * np.sin(gam * t))


def _g_exponential(lam: float, beta: float, c: float, t):
    """Profile exp(r+ t) + c (exp(r- t) - exp(r+ t)), r+- from lam and beta."""
    rp, rm = rate_pair(lam, beta)
    t = np.asarray(t, dtype=float)
    ep = np.exp(rp * t)
    return ep + c * (np.exp(rm * t) - ep)


@dataclass(frozen=True, eq=False)
class ScalingProfile:
    """Scalar profile g with g(0) = 1; the orbit is X(t) = g(t) X0."""

    n: int
    k: int
    m: int
    beta: float
    c: float
    lam: float
    branch: ScalingBranch

    def g(self, t):
        t = np.asarray(t, dtype=float)
        if self.branch == ScalingBranch.LINEAR_ZERO_MODE:
            return 1.0 + self.c * t
        if self.branch == ScalingBranch.EXP_ZERO_MODE:
            ratio = self.c / self.beta
            return ratio + (1.0 - ratio) * np.exp(-self.beta * t)
        if self.branch == ScalingBranch.UNDERDAMPED_OSC:
            return _g_oscillatory(self.lam, self.beta, self.c, t)
        return _g_exponential(self.lam, self.beta, self.c, t)

    def orbit(self, x0: Polygon, t: float) -> Polygon:
        return Polygon(float(self.g(t)) * x0.vertices)


def scaling_profile(n: int, k: int, m: int, beta: float, c: float = 0.0) -> ScalingProfile:
    """Scaling profile for a polygon supported on mode pair k (0 <= k <= n//2)."""
    if beta < 0.0:
        raise DomainError(f"damping must be nonnegative, got {beta}")
    if not 0 <= k <= n // 2:
        raise DomainError(f"mode index must lie in [0, {n // 2}], got {k}")
    lam = eigenvalue(n, m, k)
    if k == 0:
        branch = (ScalingBranch.LINEAR_ZERO_MODE if beta == 0.0
                  else ScalingBranch.EXP_ZERO_MODE)
    elif beta < 2.0 * math.sqrt(-lam):
        branch = ScalingBranch.UNDERDAMPED_OSC
    else:
        branch = ScalingBranch.OVERDAMPED_EXP
    return ScalingProfile(n, k, m, beta, float(c), lam, branch)


@dataclass(frozen=True, eq=False)
class Rotator:
    """Rigid rotation orbit X(t) = X0 R(sign rate t) in the (i, j) plane.

    Exists only for the undamped flow; the rate sqrt(-lambda_{m,k}) is pinned
    by the mode eigenvalue and both senses of rotation occur.
    """

    n: int
    m: int
    k: int
    p: int
    axes: tuple[int, int]
    sign: int
    rate: float
    mixing: np.ndarray
    beta: float = 0.0

    @property
    def initial_polygon(self) -> Polygon:
        c, s = real_basis(self.n, self.k)
        block = np.zeros((2, self.p))
        i, j = self.axes
        block[:, i] = self.mixing[:, 0]
        block[:, j] = self.mixing[:, 1]
        return Polygon(np.outer(c, block[0]) + np.outer(s, block[1]))

    def rotation(self, t: float) -> np.ndarray:
        theta = self.sign * self.rate * float(t)
        mat = np.eye(self.p)
        i, j = self.axes
        ct, st = math.cos(theta), math.sin(theta)
        mat[i, i] = ct
        mat[j, j] = ct
        mat[i, j] = st
        mat[j, i] = -st
        return mat

    def orbit(self, x0: Polygon, t: float) -> Polygon:
        return Polygon(x0.vertices @ self.rotation(t))


def _rotator(n: int, k: int, m: int, p: int, axes: tuple[int, int],
             sign: int, beta: float, mixing: np.ndarray) -> Rotator:
    if beta != 0.0:
        if beta < 0.0:
            raise DomainError(f"damping must be nonnegative, got {beta}")
        raise NoSuchSolutionError(
            "rigid rotators exist only without damping: any damped rotation "
            "fails the flow equation at order beta")
    if not 1 <= k <= n // 2:
        raise DomainError(
            f"rotators need an oscillatory mode, k in [1, {n // 2}], got {k}")
    if sign not in (1, -1):
        raise DomainError(f"rotation sense must be +1 or -1, got {sign}")
    i, j = axes
    if not 0 <= i < j < p:
        raise DomainError(f"rotation plane {axes} invalid for dimension {p}")
    rate = math.sqrt(-eigenvalue(n, m, k))
    return Rotator(n, m, k, p, (i, j), sign, rate, np.asarray(mixing, dtype=float))


def planar_rotator(n: int, k: int, m: int, sign: int = 1, beta: float = 0.0,
                   coefficients: tuple[complex, complex] = (1.0, 0.0)) -> Rotator:
    """Planar rotator on c1 P_k + c2 P_{n-k} with angular rate sqrt(-lambda)."""
    c1, c2 = complex(coefficients[0]), complex(coefficients[1])
    mixing = np.array([[(c1 + c2).real, (c1 + c2).imag],
                       [-(c1 - c2).imag, (c1 - c2).real]])
    return _rotator(n, k, m, 2, (0, 1), sign, beta, mixing)


def subplane_rotator(n: int, k: int, m: int, axes: tuple[int, int], p: int,
                     sign: int = 1, beta: float = 0.0,
                     mixing=None) -> Rotator:
    """Rotator in a coordinate plane of R^p (axes are 0-based)."""
    if mixing is None:
        mixing = np.eye(2)
    return _rotator(n, k, m, p, tuple(axes), sign, beta, np.asarray(mixing, dtype=float))


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Finite-difference residuals of the flow equation along an orbit."""

    probe_times: tuple[float, ...]
    residuals: np.ndarray
    step: float

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max())


def verify_self_similar(x0: Polygon, motion, beta: float | None = None,
                        probe_times: tuple[float, ...] = (0.1, 0.7, 1.3),
                        step: float = 1e-4,
                        span_tol: float = SPAN_TOLERANCE) -> ResidualReport:
    """Check that an orbit satisfies the flow equation along x0's motion.

    First rejects any x0 with coefficient mass outside the motion's mode pair
    (relative to total mass), then measures sup-norm residuals of
    X'' + beta X' - L X with fourth-order central differences.  ``beta``
    overrides the motion's damping, which lets a hypothesized orbit be
    falsified against a damped flow.
    """
    spec = decompose(x0)
    masses = (spec.blocks ** 2).sum(axis=(1, 2))
    total = float(masses.sum())
    outside = total - float(masses[motion.k])
    if total > 0.0 and outside > span_tol * total:
        raise SpanViolationError(
            f"polygon carries relative mass {outside / total:.3e} outside mode "
            f"pair {motion.k}")
    if beta is None:
        beta = motion.beta
    op = CirculantOperator(x0.n, motion.m)
    h = step
    residuals = []
    for t in probe_times:
        xs = [motion.orbit(x0, t + i * h).vertices for i in (-2, -1, 0, 1, 2)]
        acc = (-xs[4] + 16 * xs[3] - 30 * xs[2] + 16 * xs[1] - xs[0]) / (12 * h * h)
        vel = (-xs[4] + 8 * xs[3] - 8 * xs[1] + xs[0]) / (12 * h)
        resid = acc + beta * vel - op.apply(xs[2])
        residuals.append(float(np.abs(resid).max()))
    return ResidualReport(tuple(probe_times), np.array(residuals), h)


@dataclass(frozen=True, eq=False)
class TranslatorReport:
    """Nonexistence statement for translators, plus the point drift path."""

    beta: float
    displacement: np.ndarray
    statement: str

    def path(self, t):
        t = np.asarray(t, dtype=float)
        if self.beta == 0.0:
            return np.multiply.outer(t, self.displacement)
        factor = -np.expm1(-self.beta * t) / self.beta
        return np.multiply.outer(factor, self.displacement)


def translator_check(beta: float, displacement=1.0,
                     candidate: Polygon | None = None) -> TranslatorReport:
    """No nontrivial polygon translates under the flow; points drift.

    A candidate polygon, if given, is rejected unless it is a single point.
    The returned path is the drifting point's displacement: d t without
    damping, (d / beta)(1 - exp(-beta t)) with damping (bounded approach).
    """
    if beta < 0.0:
        raise DomainError(f"damping must be nonnegative, got {beta}")
    if candidate is not None and not candidate.is_point(
            tol=1e-12 * max(1.0, float(np.abs(candidate.vertices).max()))):
        raise NoSuchSolutionError(
            "no nontrivial translator exists: a translating polygon would need "
            "L X = 0 along the motion, forcing all oscillatory modes to vanish")
    d = np.atleast_1d(np.asarray(displacement, dtype=float))
    statement = ("translators are trivial: only single points translate, "
                 + ("ballistically (d t) in the undamped flow"
                    if beta == 0.0 else
                    f"approaching a bounded offset d/beta = {1.0 / beta:g} d"))
    return TranslatorReport(beta, d, statement)
