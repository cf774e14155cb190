"""Fixed-step reference integrator, independent of the closed-form engine.

The flow is reduced to first order in (X, V) and stepped with classical RK4.
The operator is applied purely by cyclic stencil sweeps (never through mode
space), so this path shares nothing with the spectral solution beyond the
polygon container.  Leading batch dimensions are allowed on the state, and
``beta`` may be an array broadcast over them, which lets one integration
sweep several damping values at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, DomainError, NonFiniteStateError
from .geometry import Polygon, Trajectory


def _second_difference(x: np.ndarray) -> np.ndarray:
    return np.roll(x, -1, axis=-2) + np.roll(x, 1, axis=-2) - 2.0 * x


@dataclass(frozen=True, eq=False)
class ForcedSystem:
    """X'' + beta X' = (-1)^{m+1} D^m X + F(t), D the cyclic second difference.

    ``forcing`` maps a time array (T,) to values broadcastable to
    (T, ..., n, p); None means the homogeneous flow.
    """

    n: int
    p: int
    m: int
    beta: float | np.ndarray = 0.0
    forcing: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"vertex count must be >= 3, got {self.n}")
        if self.m < 1:
            raise DomainError(f"operator order must be >= 1, got {self.m}")

    def operator(self, x: np.ndarray) -> np.ndarray:
        out = x
        for _ in range(self.m):
            out = _second_difference(out)
        return out if self.m % 2 == 1 else -out

    def acceleration(self, x: np.ndarray, v: np.ndarray, f) -> np.ndarray:
        acc = self.operator(x) - np.multiply(self.beta, v)
        if f is not None:
            acc = acc + f
        return acc


def _as_state(system: ForcedSystem, value, name: str) -> np.ndarray:
    arr = value.vertices if hasattr(value, "vertices") else np.asarray(value, dtype=float)
    if arr.ndim < 2 or arr.shape[-2] != system.n or arr.shape[-1] != system.p:
        raise DimensionMismatchError(
            f"{name} must have trailing shape ({system.n}, {system.p}), got {arr.shape}")
    return arr.astype(float, copy=True)


def integrate(system: ForcedSystem, x0, v0, t_end: float, dt: float,
              record_every: int = 1) -> Trajectory:
    """March (X, V) from t = 0 to t_end with classical RK4 steps.

    The step count is round(|t_end| / dt) and the actual step is t_end/steps,
    so the endpoint is hit exactly; a negative t_end integrates backward.
    Frames (and velocities) are recorded every ``record_every`` steps plus
    always at the endpoint.  A non-finite recorded state aborts with the
    blow-up time.
    """
    if dt <= 0.0:
        raise DomainError(f"step size must be positive, got {dt}")
    if record_every < 1:
        raise DomainError(f"record_every must be >= 1, got {record_every}")
    x = _as_state(system, x0, "x0")
    v = _as_state(system, v0, "v0") if v0 is not None else np.zeros_like(x)
    if v.shape != x.shape:
        raise DimensionMismatchError(
            f"v0 shape {v.shape} does not match x0 shape {x.shape}")

    if t_end == 0.0:
        return Trajectory(np.zeros(1), x[None].copy(), v[None].copy())
    steps = max(1, round(abs(t_end) / dt))
    h = t_end / steps

    f_grid = None
    if system.forcing is not None:
        ts_half = np.linspace(0.0, t_end, 2 * steps + 1)
        f_grid = np.asarray(system.forcing(ts_half), dtype=float)
        if f_grid.shape[0] != 2 * steps + 1:
            raise DimensionMismatchError(
                "forcing must return one value per half-step time")

    times, frames, vels = [0.0], [x.copy()], [v.copy()]

    def record(step_index: int) -> None:
        t = step_index * h
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise NonFiniteStateError(t)
        times.append(t)
        frames.append(x.copy())
        vels.append(v.copy())

    for i in range(steps):
        f0 = f_grid[2 * i] if f_grid is not None else None
        fh = f_grid[2 * i + 1] if f_grid is not None else None
        f1 = f_grid[2 * i + 2] if f_grid is not None else None

        k1x = v
        k1v = system.acceleration(x, v, f0)
        k2x = v + 0.5 * h * k1v
        k2v = system.acceleration(x + 0.5 * h * k1x, k2x, fh)
        k3x = v + 0.5 * h * k2v
        k3v = system.acceleration(x + 0.5 * h * k2x, k3x, fh)
        k4x = v + h * k3v
        k4v = system.acceleration(x + h * k3x, k4x, f1)

        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if (i + 1) % record_every == 0 or i + 1 == steps:
            record(i + 1)

    return Trajectory(np.array(times), np.stack(frames), np.stack(vels))


def final_state(trajectory: Trajectory) -> tuple[Polygon, np.ndarray]:
    """Last frame as a polygon plus its velocity (plain-state runs only)."""
    frame = trajectory.frames[-1]
    if frame.ndim != 2:
        raise DomainError("final_state applies to unbatched trajectories")
    return Polygon(frame), trajectory.velocities[-1]
