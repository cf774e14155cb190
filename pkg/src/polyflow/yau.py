"""Target-seeking polygon flows driven by coordinate differences.

The flow X'' + beta X' = L [X - Y] relaxes a polygon toward a fixed target Y:
the difference Z = X - Y obeys the homogeneous flow, so everything closed-form
carries over, and for beta > 0 the mode-0 free constant can be chosen so the
limit hits Y exactly.  For a moving target Y(t) each mode picks up a forcing
-lambda_{m,k} y_k(t); the solution is rebuilt from the homogeneous pair by
variation of parameters and evaluated with composite Simpson quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (DimensionMismatchError, DomainError, QuadratureStepError,
                     SingularBoundaryError)
from .flow import (DampingRegime, FlowSolution, angular_rate, classify,
                   rate_pair, solve_explicit, solve_two_point)
from .geometry import CodimSpectrum, Polygon, decompose, planar_spectrum
from . import io as polyio
from .spectral import (cosine_norm_sq, eigenvalue, fourier_matrix, real_basis,
                       sine_norm_sq)


@dataclass(frozen=True, eq=False)
class YauProblem:
    """A relaxation problem: initial polygon, fixed target, flow parameters.

    Vertex counts must already agree (reconcile first).  beta = 0 never
    converges - the difference oscillates forever - so it must be requested
    explicitly via ``allow_undamped``.
    """

    x0: Polygon
    target: Polygon
    m: int
    beta: float
    constants: object = None
    exact_limit: bool = True
    waypoint: tuple[Polygon, float] | None = None
    allow_undamped: bool = False

    def __post_init__(self):
        if self.x0.n != self.target.n or self.x0.p != self.target.p:
            raise DimensionMismatchError(
                f"initial ({self.x0.n}, {self.x0.p}) and target "
                f"({self.target.n}, {self.target.p}) disagree; reconcile vertex "
                "counts first")
        if self.beta < 0.0:
            raise DomainError(f"damping must be nonnegative, got {self.beta}")
        if self.beta == 0.0 and not self.allow_undamped:
            raise DomainError(
                "beta = 0 gives a non-convergent, forever-oscillating mode; "
                "pass allow_undamped=True to build it anyway")
        if self.waypoint is not None:
            poly, t1 = self.waypoint
            if t1 <= 0.0:
                raise DomainError(f"waypoint time must be positive, got {t1}")
            if poly.n != self.x0.n or poly.p != self.x0.p:
                raise DimensionMismatchError(
                    "waypoint polygon does not match the problem's shape")


@dataclass(frozen=True, eq=False)
class YauSolution:
    """Evolution toward a fixed target: difference flow plus the target."""

    difference: FlowSolution
    target: Polygon
    convergent: bool

    def frames(self, ts) -> np.ndarray:
        return self.difference.frames(ts) + self.target.vertices

    def evaluate(self, t: float) -> Polygon:
        return Polygon(self.frames(np.array([float(t)]))[0])

    def velocity(self, t):
        return self.difference.velocity(t)

    def distance_to_target(self, ts):
        """Sup-norm distance ||X(t) - Y|| for scalar or array times."""
        diff = self.difference.frames(np.atleast_1d(np.asarray(ts, dtype=float)))
        out = np.abs(diff).max(axis=(-2, -1))
        return float(out[0]) if np.isscalar(ts) or np.ndim(ts) == 0 else out

    def limit_polygon(self) -> Polygon:
        """Limit shape: the target shifted by the residual centroid offset."""
        return self.target.translated(self.difference.limit_point())


def _mode0_override(z0: Polygon, beta: float, constants):
    """Free constants with mode 0 replaced by the exact-limit choice."""
    if z0.p == 2:
        arr = (np.zeros(z0.n, dtype=complex) if constants is None
               else np.asarray(constants, dtype=complex).copy())
        arr[0] = -beta * planar_spectrum(z0)[0]
        return arr
    base = decompose(z0).blocks
    if constants is None:
        arr = np.zeros_like(base)
    elif isinstance(constants, CodimSpectrum):
        arr = constants.blocks.copy()
    else:
        arr = np.asarray(constants, dtype=float).copy()
    arr[0] = -beta * base[0]
    return arr


def solve_fixed_target(problem: YauProblem) -> YauSolution:
    """Closed-form relaxation toward the fixed target.

    With ``exact_limit`` (and beta > 0) the mode-0 free constant is set to
    beta (y_0 - alpha_0(0)) so the centroid lands exactly on the target's;
    otherwise caller constants (default zero) leave a centroid offset that
    persists per the mode-0 law.
    """
    z0 = Polygon(problem.x0.vertices - problem.target.vertices)
    if problem.exact_limit and problem.beta > 0.0:
        constants = _mode0_override(z0, problem.beta, problem.constants)
    else:
        constants = problem.constants
    zflow = solve_explicit(z0, problem.m, problem.beta, constants)
    return YauSolution(zflow, problem.target, convergent=problem.beta > 0.0)


def solve_with_waypoint(problem: YauProblem) -> YauSolution:
    """Relaxation constrained to pass through one waypoint polygon.

    The second-order flow supports exactly one waypoint beyond the initial
    state; the free constants are spent matching X(t1) mode by mode.
    """
    if problem.waypoint is None:
        raise DomainError("solve_with_waypoint needs a (polygon, time) waypoint")
    poly, t1 = problem.waypoint
    z0 = Polygon(problem.x0.vertices - problem.target.vertices)
    z1 = Polygon(poly.vertices - problem.target.vertices)
    zflow = solve_two_point(z0, z1, t1, problem.m, problem.beta)
    return YauSolution(zflow, problem.target, convergent=problem.beta > 0.0)


def solve(problem: YauProblem) -> YauSolution:
    if problem.waypoint is not None:
        return solve_with_waypoint(problem)
    return solve_fixed_target(problem)


# ---------------------------------------------------------------------------
# Moving targets


@dataclass(frozen=True, eq=False)
class GreensKernel:
    """Homogeneous pair and impulse response of one forced mode ODE.

    y'' + beta y' - lambda y = f.  ``response`` is the solution with
    K(0) = 0, K'(0) = 1; the particular integral is int_0^t K(t-x) f(x) dx.
    """

    lam: float
    beta: float
    regime: DampingRegime

    def pair(self, t):
        t = np.asarray(t, dtype=float)
        if self.regime == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(self.lam, self.beta)
            return np.exp(rm * t), np.exp(rp * t)
        if self.regime == DampingRegime.CRITICAL:
            env = np.exp(-0.5 * self.beta * t)
            return env, t * env
        gam = angular_rate(self.lam, self.beta)
        env = np.exp(-0.5 * self.beta * t)
        return env * np.cos(gam * t), env * np.sin(gam * t)

    def pair_derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.regime == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(self.lam, self.beta)
            return rm * np.exp(rm * t), rp * np.exp(rp * t)
        if self.regime == DampingRegime.CRITICAL:
            r = -0.5 * self.beta
            env = np.exp(r * t)
            return r * env, (1.0 + r * t) * env
        gam = angular_rate(self.lam, self.beta)
        env = np.exp(-0.5 * self.beta * t)
        cos, sin = np.cos(gam * t), np.sin(gam * t)
        return (env * (-0.5 * self.beta * cos - gam * sin),
                env * (-0.5 * self.beta * sin + gam * cos))

    def wronskian(self, t):
        """det of the fundamental matrix; never zero (Abel: W(0) exp(-beta t))."""
        t = np.asarray(t, dtype=float)
        if self.regime == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(self.lam, self.beta)
            return (rp - rm) * np.exp(-self.beta * t)
        if self.regime == DampingRegime.CRITICAL:
            return np.exp(-self.beta * t)
        return angular_rate(self.lam, self.beta) * np.exp(-self.beta * t)

    def response(self, s):
        s = np.asarray(s, dtype=float)
        if self.regime == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(self.lam, self.beta)
            return (np.exp(rp * s) - np.exp(rm * s)) / (rp - rm)
        if self.regime == DampingRegime.CRITICAL:
            return s * np.exp(-0.5 * self.beta * s)
        gam = angular_rate(self.lam, self.beta)
        return np.exp(-0.5 * self.beta * s) * np.sin(gam * s) / gam


def greens_kernel(lam: float, beta: float) -> GreensKernel:
    if lam >= 0.0:
        raise DomainError("kernels exist for oscillatory modes (lambda < 0) only")
    if beta <= 0.0:
        raise DomainError("the moving-target construction requires beta > 0")
    return GreensKernel(lam, beta, classify(lam, beta))


def simpson_rule(t: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Composite-Simpson nodes and signed weights on [0, t] with step <= h.

    The panel count is ceil(|t| / h) rounded up to even; steps coarser than
    |t|/16 are rejected as too coarse to trust.
    """
    if h <= 0.0:
        raise DomainError(f"quadrature step must be positive, got {h}")
    if t == 0.0:
        return np.zeros(1), np.zeros(1)
    if h > abs(t) / 16.0:
        raise QuadratureStepError(
            f"quadrature step {h:g} exceeds |t|/16 = {abs(t) / 16.0:g}")
    panels = int(math.ceil(abs(t) / h - 1e-9))
    panels += panels % 2
    panels = max(panels, 2)
    xs = np.linspace(0.0, t, panels + 1)
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return xs, w * (t / panels) / 3.0


class SampledTarget:
    """Moving target from equally spaced frames, linearly interpolated.

    Outside the sampled range the nearest frame is held (clamped).
    """

    def __init__(self, frames: Sequence[Polygon], dt: float):
        frames = list(frames)
        if len(frames) < 1:
            raise DomainError("a sampled target needs at least one frame")
        if dt <= 0.0:
            raise DomainError(f"frame spacing must be positive, got {dt}")
        first = frames[0]
        for f in frames[1:]:
            if f.n != first.n or f.p != first.p:
                raise DimensionMismatchError("all target frames must share one shape")
        self._frames = np.stack([f.vertices for f in frames])
        self.dt = float(dt)
        self.n = first.n
        self.p = first.p

    @classmethod
    def from_file(cls, path) -> "SampledTarget":
        frames, dt = polyio.read_frames(path)
        return cls(frames, dt)

    @property
    def duration(self) -> float:
        return (self._frames.shape[0] - 1) * self.dt

    def vertex_values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        last = self._frames.shape[0] - 1
        pos = np.clip(ts / self.dt, 0.0, float(last))
        i0 = np.minimum(pos.astype(int), max(last - 1, 0))
        frac = (pos - i0)[..., None, None]
        if last == 0:
            return np.broadcast_to(self._frames[0], ts.shape + self._frames[0].shape).copy()
        return (1.0 - frac) * self._frames[i0] + frac * self._frames[i0 + 1]

    def polygon_at(self, t: float) -> Polygon:
        return Polygon(self.vertex_values(np.array([float(t)]))[0])


class FunctionTarget:
    """Moving target given as an arbitrary t -> Polygon function."""

    def __init__(self, fn: Callable[[float], Polygon], n: int, p: int):
        self.fn = fn
        self.n = n
        self.p = p

    def vertex_values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        flat = [self.fn(float(t)).vertices for t in ts.ravel()]
        return np.stack(flat).reshape(ts.shape + (self.n, self.p))

    def polygon_at(self, t: float) -> Polygon:
        return self.fn(float(t))


class DriftTarget:
    """Target drifting from a toward b as a + (1 - exp(-rate t))(b - a)."""

    def __init__(self, a: Polygon, b: Polygon, rate: float = 1.0):
        if a.n != b.n or a.p != b.p:
            raise DimensionMismatchError("drift endpoints must share one shape")
        if rate <= 0.0:
            raise DomainError(f"drift rate must be positive, got {rate}")
        self.a = a
        self.b = b
        self.rate = float(rate)
        self.n = a.n
        self.p = a.p

    def vertex_values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        mix = -np.expm1(-self.rate * ts)[..., None, None]
        return self.a.vertices + mix * (self.b.vertices - self.a.vertices)

    def polygon_at(self, t: float) -> Polygon:
        return Polygon(self.vertex_values(np.array([float(t)]))[0])


def _target_mode_series(target, ts: np.ndarray, planar: bool):
    """Target mode coefficients at each node time.

    Planar: (T, n) complex.  Codim: (T, K, 2, p) real blocks.
    """
    vv = target.vertex_values(ts)
    if planar:
        z = vv[..., 0] + 1j * vv[..., 1]
        return z @ fourier_matrix(target.n).conj() / target.n
    n = target.n
    out = np.zeros(ts.shape + (n // 2 + 1, 2, target.p))
    for k in range(n // 2 + 1):
        c, s = real_basis(n, k)
        out[..., k, 0, :] = np.tensordot(vv, c, axes=([-2], [0])) / cosine_norm_sq(n, k)
        s_norm = sine_norm_sq(n, k)
        if s_norm > 0.0:
            out[..., k, 1, :] = np.tensordot(vv, s, axes=([-2], [0])) / s_norm
    return out


@dataclass(frozen=True, eq=False)
class MovingTargetSolution:
    """Per-mode homogeneous constants plus quadrature-evaluated forcing response."""

    n: int
    p: int
    m: int
    beta: float
    h: float
    target: object
    kernels: tuple
    lams: tuple
    constants: tuple
    kind: str

    def _particular(self, t: float, node_coeffs=None):
        """Forcing integrals -lam_k int_0^t K_k(t-x) y_k(x) dx for all k >= 1."""
        xs, w = simpson_rule(t, self.h)
        if t == 0.0:
            return None, xs
        if node_coeffs is None:
            node_coeffs = _target_mode_series(self.target, xs, self.kind == "planar")
        out = {}
        for k, kernel in enumerate(self.kernels):
            if kernel is None:
                continue
            weights = w * kernel.response(t - xs)
            out[k] = -self.lams[k] * np.tensordot(weights, node_coeffs[:, k], axes=1)
        return out, xs

    def coefficients_at(self, t: float):
        parts, _ = self._particular(t)
        count = len(self.kernels)
        if self.kind == "planar":
            coeff = np.zeros(count, dtype=complex)
        else:
            coeff = np.zeros((count, 2, self.p))
        c0, d0 = self.constants[0]
        coeff[0] = c0 * math.exp(-self.beta * t) + d0
        for k in range(1, count):
            y1, y2 = self.kernels[k].pair(t)
            c1, c2 = self.constants[k]
            val = c1 * float(y1) + c2 * float(y2)
            if parts is not None:
                val = val + parts[k]
            coeff[k] = val
        return coeff

    def evaluate(self, t: float) -> Polygon:
        coeff = self.coefficients_at(float(t))
        if self.kind == "planar":
            return Polygon.from_complex(fourier_matrix(self.n) @ coeff)
        out = np.zeros((self.n, self.p))
        for k in range(coeff.shape[0]):
            c, s = real_basis(self.n, k)
            out += np.outer(c, coeff[k, 0]) + np.outer(s, coeff[k, 1])
        return Polygon(out)

    def frames(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return np.stack([self.evaluate(t).vertices for t in ts])

    def distance_to_target(self, t: float) -> float:
        """Sup-norm distance to the instantaneous target position."""
        gap = self.evaluate(t).vertices - self.target.polygon_at(t).vertices
        return float(np.abs(gap).max())


def solve_moving_target(x0: Polygon, target, m: int, beta: float,
                        h: float = 1e-3, v0=None,
                        waypoint: tuple[Polygon, float] | None = None) -> MovingTargetSolution:
    """Track a moving target by variation of parameters, mode by mode.

    Mode 0 keeps the homogeneous law c exp(-beta t) + d (its eigenvalue kills
    the forcing), so the solution does not follow the target's translation.
    The free constants come from an initial velocity (default zero) or a
    single waypoint; ``h`` bounds the Simpson step of every forcing integral.
    """
    if beta <= 0.0:
        raise DomainError("the moving-target construction requires beta > 0")
    if v0 is not None and waypoint is not None:
        raise DomainError("choose one closure: initial velocity or waypoint")
    if target.n != x0.n or target.p != x0.p:
        raise DimensionMismatchError(
            f"target shape ({target.n}, {target.p}) does not match ({x0.n}, {x0.p})")

    planar = x0.p == 2
    kind = "planar" if planar else "codim"
    if planar:
        inits = list(planar_spectrum(x0))
        count = x0.n
    else:
        inits = list(decompose(x0).blocks)
        count = x0.n // 2 + 1

    lams = tuple(eigenvalue(x0.n, m, k) for k in range(count))
    kernels = tuple(None if k == 0 else greens_kernel(lams[k], beta)
                    for k in range(count))

    if v0 is not None:
        varr = v0.vertices if hasattr(v0, "vertices") else np.asarray(v0, dtype=float)
    else:
        varr = np.zeros((x0.n, x0.p))
    if planar:
        vels = list(planar_spectrum(Polygon(varr)) if varr.any()
                    else np.zeros(count, dtype=complex))
    else:
        vels = list(decompose(Polygon(varr)).blocks if varr.any()
                    else np.zeros((count, 2, x0.p)))

    solution = MovingTargetSolution(x0.n, x0.p, m, beta, float(h), target,
                                    kernels, lams, (), kind)

    constants: list[tuple] = []
    if waypoint is None:
        a0 = np.asarray(inits[0])
        w0 = np.asarray(vels[0])
        c0 = -w0 / beta
        constants.append((c0, a0 - c0))
        for k in range(1, count):
            kern = kernels[k]
            y10, y20 = (float(v) for v in kern.pair(0.0))
            dy10, dy20 = (float(v) for v in kern.pair_derivative(0.0))
            det = y10 * dy20 - y20 * dy10
            ak = np.asarray(inits[k])
            vk = np.asarray(vels[k])
            constants.append(((dy20 * ak - y20 * vk) / det,
                              (-dy10 * ak + y10 * vk) / det))
    else:
        poly1, t1 = waypoint
        if t1 <= 0.0:
            raise DomainError(f"waypoint time must be positive, got {t1}")
        if poly1.n != x0.n or poly1.p != x0.p:
            raise DimensionMismatchError("waypoint polygon does not match the problem")
        targets1 = (list(planar_spectrum(poly1)) if planar
                    else list(decompose(poly1).blocks))
        parts, _ = solution._particular(float(t1))
        a0 = np.asarray(inits[0])
        b0 = np.asarray(targets1[0])
        decay = math.exp(-beta * t1)
        c0 = (a0 - b0) / (1.0 - decay)
        constants.append((c0, a0 - c0))
        for k in range(1, count):
            kern = kernels[k]
            y10, y20 = (float(v) for v in kern.pair(0.0))
            y11, y21 = (float(v) for v in kern.pair(t1))
            det = y10 * y21 - y20 * y11
            if abs(det) < 1e-12:
                raise SingularBoundaryError(k)
            ak = np.asarray(inits[k])
            bk = np.asarray(targets1[k]) - (parts[k] if parts is not None else 0.0)
            constants.append(((y21 * ak - y20 * bk) / det,
                              (-y11 * ak + y10 * bk) / det))

    return MovingTargetSolution(x0.n, x0.p, m, beta, float(h), target,
                                kernels, lams, tuple(constants), kind)
