"""Closed-form mode solutions of the damped second-difference polygon flow.

Each Fourier mode of X'' + beta X' = L X (L the signed m-fold cyclic second
difference) evolves independently:

    alpha_k'' + beta alpha_k' = lambda_{m,k} alpha_k.

Every mode solution is written as A(t) c_init + B(t) c_free with scalar
weight functions per damping regime, normalized so A(0) = 1 and B(0) = 0.
The free constant is closed three ways: explicit values, an initial
velocity, or a second polygon at a later time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (AllModesZeroError, DimensionMismatchError, DomainError,
                     SingularBoundaryError, TimeRangeError)
from .geometry import CodimSpectrum, Polygon, decompose, planar_spectrum
from .spectral import eigenvalue, fourier_matrix, real_basis

CRITICAL_WINDOW = 1e-9
OVERFLOW_EXPONENT = 700.0
DOMINANCE_THRESHOLD = 1e-12


class DampingRegime(Enum):
    ZERO_MODE_UNDAMPED = "zero-mode-undamped"
    ZERO_MODE = "zero-mode"
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"
    UNDERDAMPED = "underdamped"


def classify(lam: float, beta: float, window: float = CRITICAL_WINDOW) -> DampingRegime:
    """Damping regime of one mode.

    The critical case is detected with a relative window on
    |lambda + beta^2/4| so that beta = 2 sqrt(|lambda|) computed in floating
    point lands on the critical branch instead of a hair to either side.
    """
    if lam > 0.0:
        raise DomainError(f"mode eigenvalues are nonpositive, got {lam}")
    if beta < 0.0:
        raise DomainError(f"damping must be nonnegative, got {beta}")
    if lam == 0.0:
        return DampingRegime.ZERO_MODE_UNDAMPED if beta == 0.0 else DampingRegime.ZERO_MODE
    if beta == 0.0:
        return DampingRegime.UNDERDAMPED
    quarter = (beta / 2.0) ** 2
    if abs(lam + quarter) <= window * max(abs(lam), quarter):
        return DampingRegime.CRITICAL
    return DampingRegime.OVERDAMPED if quarter > -lam else DampingRegime.UNDERDAMPED


def rate_pair(lam: float, beta: float) -> tuple[float, float]:
    """Real characteristic rates r+ >= r- of an overdamped (or zero) mode."""
    disc = (beta / 2.0) ** 2 + lam
    if disc < 0.0:
        raise DomainError("rate pair is real only when beta^2/4 + lambda >= 0")
    root = math.sqrt(disc)
    return -beta / 2.0 + root, -beta / 2.0 - root


def angular_rate(lam: float, beta: float) -> float:
    """Oscillation rate gamma = sqrt(-lambda - beta^2/4) of an underdamped mode."""
    disc = -lam - (beta / 2.0) ** 2
    if disc <= 0.0:
        raise DomainError("angular rate needs beta^2/4 + lambda < 0")
    return math.sqrt(disc)


def slow_decay_rate(lam: float, beta: float) -> float:
    """Real part of the slowest characteristic rate of a k >= 1 mode."""
    disc = (beta / 2.0) ** 2 + lam
    if disc > 0.0:
        return -beta / 2.0 + math.sqrt(disc)
    return -beta / 2.0


@dataclass(frozen=True, eq=False)
class ModeSolution:
    """One mode's closed-form evolution A(t) c_init + B(t) c_free."""

    lam: float
    beta: float
    regime: DampingRegime
    c_init: np.ndarray
    c_free: np.ndarray

    def weights(self, t) -> tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=float)
        reg, beta, lam = self.regime, self.beta, self.lam
        if reg == DampingRegime.ZERO_MODE_UNDAMPED:
            return np.ones_like(t), t
        if reg == DampingRegime.ZERO_MODE:
            return np.ones_like(t), -np.expm1(-beta * t) / beta
        if reg == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(lam, beta)
            a = np.exp(rp * t)
            return a, np.exp(rm * t) - a
        if reg == DampingRegime.CRITICAL:
            env = np.exp(-0.5 * beta * t)
            return env, t * env
        gam = angular_rate(lam, beta)
        env = np.exp(-0.5 * beta * t)
        return env * np.cos(gam * t), env * np.sin(gam * t)

    def weight_derivatives(self, t) -> tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=float)
        reg, beta, lam = self.regime, self.beta, self.lam
        if reg == DampingRegime.ZERO_MODE_UNDAMPED:
            return np.zeros_like(t), np.ones_like(t)
        if reg == DampingRegime.ZERO_MODE:
            return np.zeros_like(t), np.exp(-beta * t)
        if reg == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(lam, beta)
            da = rp * np.exp(rp * t)
            return da, rm * np.exp(rm * t) - da
        if reg == DampingRegime.CRITICAL:
            env = np.exp(-0.5 * beta * t)
            return -0.5 * beta * env, (1.0 - 0.5 * beta * t) * env
        gam = angular_rate(lam, beta)
        env = np.exp(-0.5 * beta * t)
        cos, sin = np.cos(gam * t), np.sin(gam * t)
        return (env * (-0.5 * beta * cos - gam * sin),
                env * (-0.5 * beta * sin + gam * cos))

    def initial_weight_rates(self) -> tuple[float, float]:
        """(A'(0), B'(0)); B'(0) is never zero, so velocities close the mode."""
        reg, beta, lam = self.regime, self.beta, self.lam
        if reg in (DampingRegime.ZERO_MODE_UNDAMPED, DampingRegime.ZERO_MODE):
            return 0.0, 1.0
        if reg == DampingRegime.OVERDAMPED:
            rp, rm = rate_pair(lam, beta)
            return rp, rm - rp
        if reg == DampingRegime.CRITICAL:
            return -0.5 * beta, 1.0
        return -0.5 * beta, angular_rate(lam, beta)

    def value(self, t) -> np.ndarray:
        a, b = self.weights(t)
        return np.multiply.outer(a, self.c_init) + np.multiply.outer(b, self.c_free)

    def derivative(self, t) -> np.ndarray:
        da, db = self.weight_derivatives(t)
        return np.multiply.outer(da, self.c_init) + np.multiply.outer(db, self.c_free)

    def growth_rate(self) -> float:
        """Largest |Re r| over the mode's characteristic rates (backward guard)."""
        reg, beta, lam = self.regime, self.beta, self.lam
        if reg == DampingRegime.ZERO_MODE_UNDAMPED:
            return 0.0
        if reg == DampingRegime.ZERO_MODE:
            return self.beta
        if reg == DampingRegime.OVERDAMPED:
            return abs(rate_pair(lam, beta)[1])
        return 0.5 * beta


def mode_solution(lam: float, beta: float, c_init, c_free) -> ModeSolution:
    """Build one mode solution; payloads may be complex scalars or 2 x p blocks."""
    regime = classify(lam, beta)
    return ModeSolution(lam, beta, regime,
                        np.asarray(c_init), np.asarray(c_free))


def mode_evaluate(mode: ModeSolution, t) -> np.ndarray:
    return mode.value(t)


class _FlowSolutionBase:
    """Shared evaluation plumbing; concrete classes fix the representation."""

    def _check_range(self, ts: np.ndarray) -> None:
        tmin = float(ts.min()) if ts.size else 0.0
        if tmin >= 0.0 or self.beta == 0.0:
            return
        worst = max(mode.growth_rate() for mode in self.modes)
        if worst * abs(tmin) > OVERFLOW_EXPONENT:
            raise TimeRangeError(
                f"evaluation at t={tmin:g} grows like exp({worst:g} |t|) and would overflow")

    def evaluate(self, t: float) -> Polygon:
        frames = self.frames(np.array([float(t)]))
        return Polygon(frames[0])

    def sample(self, ts) -> "np.ndarray":
        return self.frames(np.asarray(ts, dtype=float))


@dataclass(frozen=True, eq=False)
class PlanarFlowSolution(_FlowSolutionBase):
    """Flow of a planar polygon, one complex mode per index k = 0 .. n-1."""

    m: int
    beta: float
    modes: tuple[ModeSolution, ...]

    @property
    def n(self) -> int:
        return len(self.modes)

    @property
    def p(self) -> int:
        return 2

    def initial_spectrum(self) -> np.ndarray:
        return np.array([mode.c_init for mode in self.modes])

    def free_spectrum(self) -> np.ndarray:
        return np.array([mode.c_free for mode in self.modes])

    def coefficients(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        self._check_range(ts)
        return np.stack([mode.value(ts) for mode in self.modes], axis=-1)

    def frames(self, ts) -> np.ndarray:
        z = self.coefficients(ts) @ fourier_matrix(self.n)
        return np.stack([z.real, z.imag], axis=-1)

    def velocity(self, t) -> np.ndarray:
        ts = np.asarray(t, dtype=float)
        self._check_range(np.atleast_1d(ts))
        coeffs = np.stack([mode.derivative(ts) for mode in self.modes], axis=-1)
        z = coeffs @ fourier_matrix(self.n)
        return np.stack([z.real, z.imag], axis=-1)

    def limit_point(self) -> np.ndarray:
        if self.beta <= 0.0:
            raise DomainError("the centroid has a finite limit only for beta > 0")
        z = self.modes[0].c_init + self.modes[0].c_free / self.beta
        return np.array([z.real, z.imag])


@dataclass(frozen=True, eq=False)
class CodimFlowSolution(_FlowSolutionBase):
    """Flow in R^p, one 2 x p block mode per index k = 0 .. n//2."""

    n: int
    p: int
    m: int
    beta: float
    modes: tuple[ModeSolution, ...]

    def initial_blocks(self) -> np.ndarray:
        return np.stack([mode.c_init for mode in self.modes])

    def free_blocks(self) -> np.ndarray:
        return np.stack([mode.c_free for mode in self.modes])

    def _assemble(self, values) -> np.ndarray:
        lead = values[0].shape[:-2]
        out = np.zeros(lead + (self.n, self.p))
        for k, val in enumerate(values):
            c, s = real_basis(self.n, k)
            out += (c[:, None] * val[..., None, 0, :]
                    + s[:, None] * val[..., None, 1, :])
        return out

    def frames(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        self._check_range(ts)
        return self._assemble([mode.value(ts) for mode in self.modes])

    def velocity(self, t) -> np.ndarray:
        ts = np.asarray(t, dtype=float)
        self._check_range(np.atleast_1d(ts))
        return self._assemble([mode.derivative(ts) for mode in self.modes])

    def limit_point(self) -> np.ndarray:
        if self.beta <= 0.0:
            raise DomainError("the centroid has a finite limit only for beta > 0")
        block = self.modes[0].c_init + self.modes[0].c_free / self.beta
        return np.array(block[0])


FlowSolution = PlanarFlowSolution | CodimFlowSolution


def _as_vertex_array(x0: Polygon, v0) -> np.ndarray:
    if v0 is None:
        return np.zeros((x0.n, x0.p))
    arr = v0.vertices if hasattr(v0, "vertices") else np.asarray(v0, dtype=float)
    if arr.shape != (x0.n, x0.p):
        raise DimensionMismatchError(
            f"velocity shape {arr.shape} does not match polygon ({x0.n}, {x0.p})")
    return arr


def _mode_data(x0: Polygon):
    """Per-mode initial payloads and eigenvalues in the natural representation."""
    if x0.p == 2:
        coeffs = planar_spectrum(x0)
        lams = [eigenvalue(x0.n, 1, k) for k in range(x0.n)]
        return "planar", list(coeffs), lams
    spec = decompose(x0)
    lams = [eigenvalue(x0.n, 1, k) for k in range(spec.mode_count)]
    return "codim", list(spec.blocks), lams


def _payload_spectrum(x0: Polygon, arr) -> list:
    if x0.p == 2:
        return list(planar_spectrum(Polygon(arr)))
    return list(decompose(Polygon(arr)).blocks)


def _build(x0: Polygon, m: int, beta: float, free_payloads) -> FlowSolution:
    kind, inits, _ = _mode_data(x0)
    modes = tuple(
        mode_solution(eigenvalue(x0.n, m, k), beta, inits[k], free_payloads[k])
        for k in range(len(inits)))
    if kind == "planar":
        return PlanarFlowSolution(m, beta, modes)
    return CodimFlowSolution(x0.n, x0.p, m, beta, modes)


def solve_explicit(x0: Polygon, m: int, beta: float, constants=None) -> FlowSolution:
    """Flow with free constants given outright (all zero when omitted).

    For planar polygons ``constants`` is a complex vector of length n; for
    p >= 3 it is a (n//2 + 1, 2, p) block array or a ``CodimSpectrum``.
    """
    kind, inits, _ = _mode_data(x0)
    count = len(inits)
    if constants is None:
        free = [np.zeros_like(np.asarray(c)) for c in inits]
    elif isinstance(constants, CodimSpectrum):
        free = list(constants.blocks)
    else:
        arr = np.asarray(constants)
        if kind == "planar":
            if arr.shape != (count,):
                raise DimensionMismatchError(
                    f"expected {count} complex constants, got shape {arr.shape}")
            free = list(arr.astype(complex))
        else:
            if arr.shape != (count, 2, x0.p):
                raise DimensionMismatchError(
                    f"expected constants of shape ({count}, 2, {x0.p}), got {arr.shape}")
            free = list(arr.astype(float))
    return _build(x0, m, beta, free)


def solve_ivp(x0: Polygon, v0, m: int, beta: float) -> FlowSolution:
    """Flow from an initial polygon and initial vertex velocity (None = rest)."""
    varr = _as_vertex_array(x0, v0)
    kind, inits, _ = _mode_data(x0)
    vels = _payload_spectrum(x0, varr)
    free = []
    for k, (c, v) in enumerate(zip(inits, vels)):
        probe = mode_solution(eigenvalue(x0.n, m, k), beta, c, np.zeros_like(np.asarray(c)))
        da0, db0 = probe.initial_weight_rates()
        free.append((np.asarray(v) - da0 * np.asarray(c)) / db0)
    return _build(x0, m, beta, free)


def solve_two_point(x0: Polygon, x1: Polygon, t1: float, m: int, beta: float,
                    weight_tol: float = 1e-12) -> FlowSolution:
    """Flow through X(0) = x0 and X(t1) = x1.

    A mode whose free weight B(t1) falls below ``weight_tol`` is determined
    only if the boundary data already agree there; otherwise the mode is
    genuinely unreachable and a SingularBoundaryError names it.
    """
    if t1 <= 0.0:
        raise DomainError(f"the second time must be positive, got {t1}")
    if x1.n != x0.n or x1.p != x0.p:
        raise DimensionMismatchError(
            f"boundary polygons differ in shape: ({x0.n}, {x0.p}) vs ({x1.n}, {x1.p})")
    kind, inits, _ = _mode_data(x0)
    targets = _payload_spectrum(x0, x1.vertices)
    free = []
    for k, (c, y) in enumerate(zip(inits, targets)):
        c = np.asarray(c)
        y = np.asarray(y)
        probe = mode_solution(eigenvalue(x0.n, m, k), beta, c, np.zeros_like(c))
        a1, b1 = probe.weights(t1)
        resid = y - a1 * c
        if abs(float(b1)) < weight_tol:
            scale = max(1.0, float(np.abs(c).max()), float(np.abs(y).max()))
            if float(np.abs(resid).max()) <= 1e-9 * scale:
                free.append(np.zeros_like(c))
            else:
                raise SingularBoundaryError(k)
        else:
            free.append(resid / b1)
    return _build(x0, m, beta, free)


def _pair_masses(source) -> tuple[np.ndarray, int]:
    """Coefficient mass per conjugate pair k = 1 .. n//2, plus n."""
    if isinstance(source, PlanarFlowSolution):
        coeffs = source.initial_spectrum()
        n = source.n
        masses = np.zeros(n // 2 + 1)
        for k in range(1, n // 2 + 1):
            masses[k] = abs(coeffs[k]) ** 2
            if n - k != k:
                masses[k] += abs(coeffs[n - k]) ** 2
        return masses[1:], n
    if isinstance(source, CodimFlowSolution):
        blocks = source.initial_blocks()
        n = source.n
        return np.array([(blocks[k] ** 2).sum() for k in range(1, n // 2 + 1)]), n
    if isinstance(source, CodimSpectrum):
        n = source.n
        return np.array([(source.blocks[k] ** 2).sum()
                         for k in range(1, n // 2 + 1)]), n
    if isinstance(source, Polygon):
        if source.p == 2:
            coeffs = planar_spectrum(source)
            n = source.n
            masses = np.zeros(n // 2 + 1)
            for k in range(1, n // 2 + 1):
                masses[k] = abs(coeffs[k]) ** 2
                if n - k != k:
                    masses[k] += abs(coeffs[n - k]) ** 2
            return masses[1:], n
        return _pair_masses(decompose(source))
    coeffs = np.asarray(source)
    if coeffs.ndim != 1:
        raise DomainError("cannot read mode masses from this object")
    n = coeffs.shape[0]
    masses = np.zeros(n // 2 + 1)
    for k in range(1, n // 2 + 1):
        masses[k] = abs(coeffs[k]) ** 2
        if n - k != k:
            masses[k] += abs(coeffs[n - k]) ** 2
    return masses[1:], n


def dominant_mode(source, threshold: float = DOMINANCE_THRESHOLD) -> int:
    """Smallest k in [1, n//2] whose pair mass exceeds threshold * total.

    Raises AllModesZeroError when every oscillatory mode vanishes.
    """
    masses, _ = _pair_masses(source)
    total = float(masses.sum())
    if total == 0.0:
        raise AllModesZeroError("all oscillatory mode coefficients are zero")
    for k, mass in enumerate(masses, start=1):
        if mass > threshold * total:
            return k
    raise AllModesZeroError("no mode exceeds the dominance threshold")


class LimitKind(Enum):
    AFFINE_OF_REGULAR_POLYGON = "affine-of-regular-polygon"
    PERSISTENT_OSCILLATION = "persistent-oscillation"
    LIMIT_POINT = "limit-point"


@dataclass(frozen=True, eq=False)
class LimitReport:
    """Outcome of rescaling the flow around its dominant mode."""

    kind: LimitKind
    mode: int
    beta: float
    scaling: str
    block: object
    limit_polygon: Polygon | None
    probe_time: float
    probe_residual: float
    note: str = ""


def _scaled_weights(regime: DampingRegime, lam: float, beta: float,
                    shift: float, ts: np.ndarray):
    """Mode weights multiplied by exp(-shift t), combined at exponent level."""
    if regime == DampingRegime.OVERDAMPED:
        rp, rm = rate_pair(lam, beta)
        a = np.exp((rp - shift) * ts)
        return a, np.exp((rm - shift) * ts) - a
    if regime == DampingRegime.CRITICAL:
        env = np.exp((-0.5 * beta - shift) * ts)
        return env, ts * env
    if regime == DampingRegime.UNDERDAMPED:
        gam = angular_rate(lam, beta)
        env = np.exp((-0.5 * beta - shift) * ts)
        return env * np.cos(gam * ts), env * np.sin(gam * ts)
    raise DomainError("zero modes never enter the rescaled picture")


def _scaled_mode_values(sol: FlowSolution, d: int, ts: np.ndarray,
                        threshold: float) -> tuple[dict, DampingRegime]:
    """Payloads of g(t) alpha_k(t) for every significant k >= 1 mode index.

    Modes below the dominance threshold are dropped: they may sit above the
    dominant decay rate and would otherwise overflow under the rescaling.
    """
    masses, n = _pair_masses(sol)
    total = float(masses.sum())
    planar = isinstance(sol, PlanarFlowSolution)
    kept: list[int] = []
    for k, mass in enumerate(masses, start=1):
        if total > 0.0 and mass > threshold * total:
            kept.append(k)
            if planar and n - k != k:
                kept.append(n - k)
    lam_d = sol.modes[d].lam
    regime_d = classify(lam_d, sol.beta)
    if regime_d == DampingRegime.OVERDAMPED:
        shift = rate_pair(lam_d, sol.beta)[0]
    else:
        shift = -0.5 * sol.beta
    if regime_d == DampingRegime.CRITICAL and np.any(ts <= 0.0):
        raise DomainError("the critical rescaling divides by t and needs t > 0")
    values = {}
    for idx in kept:
        mode = sol.modes[idx]
        a, b = _scaled_weights(mode.regime, mode.lam, sol.beta, shift, ts)
        val = (np.multiply.outer(a, mode.c_init)
               + np.multiply.outer(b, mode.c_free))
        if regime_d == DampingRegime.CRITICAL:
            val = val / ts.reshape(ts.shape + (1,) * (val.ndim - ts.ndim))
        values[idx] = val
    # translating by the limit point leaves mode 0 a decaying remainder
    # -(c_free / beta) e^{-beta t}, which the rescaling also magnifies
    zero = sol.modes[0]
    c_free0 = np.asarray(zero.c_free)
    if zero.regime == DampingRegime.ZERO_MODE and np.abs(c_free0).max() > 0.0:
        w0 = np.exp((-sol.beta - shift) * ts)
        val = np.multiply.outer(w0, -c_free0 / sol.beta)
        if regime_d == DampingRegime.CRITICAL:
            val = val / ts.reshape(ts.shape + (1,) * (val.ndim - ts.ndim))
        values[0] = val
    return values, regime_d


def _assemble_from_values(sol: FlowSolution, values: dict, ts: np.ndarray) -> np.ndarray:
    if isinstance(sol, PlanarFlowSolution):
        coeffs = np.zeros(ts.shape + (sol.n,), dtype=complex)
        for idx, val in values.items():
            coeffs[..., idx] = val
        z = coeffs @ fourier_matrix(sol.n)
        return np.stack([z.real, z.imag], axis=-1)
    out = np.zeros(ts.shape + (sol.n, sol.p))
    for idx, val in values.items():
        c, s = real_basis(sol.n, idx)
        out += (c[:, None] * val[..., None, 0, :]
                + s[:, None] * val[..., None, 1, :])
    return out


def rescaled_polygon(sol: FlowSolution, t: float,
                     threshold: float = DOMINANCE_THRESHOLD) -> Polygon:
    """The solution translated by its limit point, then rescaled by 1/g(t)."""
    if sol.beta <= 0.0:
        raise DomainError("rescaled limits are defined for beta > 0")
    d = dominant_mode(sol, threshold)
    ts = np.array([float(t)])
    values, _ = _scaled_mode_values(sol, d, ts, threshold)
    return Polygon(_assemble_from_values(sol, values, ts)[0])


def _limit_block_and_polygon(sol: FlowSolution, d: int, regime_d: DampingRegime):
    planar = isinstance(sol, PlanarFlowSolution)
    if regime_d == DampingRegime.OVERDAMPED:
        def pick(mode):
            return mode.c_init - mode.c_free
    else:
        def pick(mode):
            return mode.c_free
    if planar:
        n = sol.n
        lead = complex(pick(sol.modes[d]))
        trail = complex(pick(sol.modes[n - d])) if n - d != d else 0.0j
        block = (lead, trail)
        coeffs = np.zeros(n, dtype=complex)
        coeffs[d] = lead
        if n - d != d:
            coeffs[n - d] = trail
        size = abs(lead) + abs(trail)
        z = fourier_matrix(n) @ coeffs
        return block, Polygon.from_complex(z), size
    block = np.array(pick(sol.modes[d]))
    c, s = real_basis(sol.n, d)
    poly = Polygon(np.outer(c, block[0]) + np.outer(s, block[1]))
    return block, poly, float(np.abs(block).max())


def rescaled_limit(sol: FlowSolution,
                   threshold: float = DOMINANCE_THRESHOLD) -> LimitReport:
    """Classify the large-time shape of the flow under mode-d rescaling.

    Overdamped dominant mode: the rescaled, mode-0-translated polygon tends
    to a fixed combination of the dominant basis pair (an affine image of the
    regular polygon).  Critical: same after an extra 1/t; a vanishing limit
    block is reported as a bare limit point.  Underdamped: no limit exists,
    the rescaled polygon keeps oscillating.
    """
    if sol.beta <= 0.0:
        raise DomainError("rescaled limits are defined for beta > 0")
    d = dominant_mode(sol, threshold)
    masses, _ = _pair_masses(sol)
    total = float(masses.sum())
    lam_d = sol.modes[d].lam
    regime_d = classify(lam_d, sol.beta)

    rates = {k: slow_decay_rate(sol.modes[k].lam, sol.beta)
             for k, mass in enumerate(masses, start=1)
             if mass > threshold * total}
    others = [rates[k] for k in rates if k != d]
    if not others:
        probe_time = 10.0
    else:
        gap = rates[d] - max(others)
        probe_time = 200.0 if gap <= 1e-12 else float(np.clip(20.0 / gap, 10.0, 200.0))

    ts = np.array([probe_time])
    values, _ = _scaled_mode_values(sol, d, ts, threshold)
    residual_values = {idx: val for idx, val in values.items()
                       if idx != d and idx != sol.n - d}
    residual = float(np.abs(_assemble_from_values(sol, residual_values, ts)).max()) \
        if residual_values else 0.0

    if regime_d == DampingRegime.UNDERDAMPED:
        return LimitReport(LimitKind.PERSISTENT_OSCILLATION, d, sol.beta,
                           "exp(beta t / 2)", None, None, probe_time, residual,
                           note="the rescaled dominant pair rotates forever; no limit shape")

    block, poly, size = _limit_block_and_polygon(sol, d, regime_d)
    init_scale = max(1.0, max(float(np.abs(np.asarray(mode.c_init)).max())
                              for mode in sol.modes))
    scaling = ("exp(-r_plus t)" if regime_d == DampingRegime.OVERDAMPED
               else "exp(beta t / 2) / t")
    if size < 1e-13 * init_scale:
        return LimitReport(LimitKind.LIMIT_POINT, d, sol.beta, scaling, block, None,
                           probe_time, residual,
                           note="the dominant limit block vanishes; the rescaled "
                                "solution collapses to a point")
    return LimitReport(LimitKind.AFFINE_OF_REGULAR_POLYGON, d, sol.beta, scaling,
                       block, poly, probe_time, residual)
