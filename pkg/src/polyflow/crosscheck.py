"""Sweeps certifying every closed-form path against the RK4 oracle.

Each sweep returns a list of CaseResult records; the `verify` CLI subcommand
and the acceptance tests both run these.  Random data is generated from
explicit integer seed tuples so runs are reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flow import solve_ivp
from .geometry import Polygon
from .oracle import ForcedSystem, integrate
from .spectral import CirculantOperator, eigenvalue
from .yau import DriftTarget, YauProblem, solve_fixed_target, solve_moving_target

BASE_DT = 1e-4
BASE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CaseResult:
    label: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error < self.tolerance


def scaled_tolerance(dt: float, base: float = BASE_TOLERANCE) -> float:
    """RK4 is 4th order, so the pass threshold scales with (dt / base_dt)^4."""
    return max(base * (dt / BASE_DT) ** 4, 1e-10)


def random_polygon(rng: np.random.Generator, n: int, p: int = 2,
                   scale: float = 1.0) -> Polygon:
    return Polygon(scale * rng.standard_normal((n, p)))


def critical_beta(n: int, m: int) -> float:
    """Damping at which the slowest nonzero mode sits exactly on critical."""
    return 2.0 * math.sqrt(-eigenvalue(n, m, 1))


def _record_stride(t_end: float, dt: float, frames: int) -> int:
    steps = max(1, int(round(abs(t_end) / dt)))
    return max(1, steps // frames)


def flow_sweep(dt: float = BASE_DT, t_end: float = 3.0,
               ns=(5, 6, 8), ms=(1, 2, 3), seeds=(0, 1, 2),
               tolerance: float | None = None) -> list[CaseResult]:
    """Closed-form free flow vs RK4 over betas {0, 1, 4, critical}.

    One batched integration per (n, m) covers all betas and seeds at once;
    the comparison is the sup norm over roughly 30 recorded times in
    [0, t_end].
    """
    tol = scaled_tolerance(dt) if tolerance is None else tolerance
    results = []
    for n in ns:
        for m in ms:
            betas = [0.0, 1.0, 4.0, critical_beta(n, m)]
            x0 = np.empty((len(betas), len(seeds), n, 2))
            v0 = np.empty_like(x0)
            for si, seed in enumerate(seeds):
                rng = np.random.default_rng([seed, n, m])
                x0[:, si] = rng.standard_normal((n, 2))
                v0[:, si] = rng.standard_normal((n, 2))
            barr = np.asarray(betas).reshape(-1, 1, 1, 1)
            system = ForcedSystem(n, 2, m, beta=barr)
            traj = integrate(system, x0, v0, t_end, dt,
                             record_every=_record_stride(t_end, dt, 30))
            for bi, beta in enumerate(betas):
                for si, seed in enumerate(seeds):
                    sol = solve_ivp(Polygon(x0[bi, si]), Polygon(v0[bi, si]), m, beta)
                    exact = sol.frames(traj.times)
                    err = float(np.abs(exact - traj.frames[:, bi, si]).max())
                    results.append(CaseResult(
                        f"flow n={n} m={m} beta={beta:g} seed={seed}", err, tol))
    return results


def yau_fixed_sweep(dt: float = BASE_DT, t_end: float = 3.0,
                    ns=(4, 5, 6), ms=(1, 2), betas=(1.0, 4.0), seed: int = 0,
                    tolerance: float | None = None) -> list[CaseResult]:
    """Fixed-target relaxation vs RK4 on the forced system."""
    tol = scaled_tolerance(dt) if tolerance is None else tolerance
    results = []
    for n in ns:
        for m in ms:
            rng = np.random.default_rng([seed, n, m, 1])
            x0 = random_polygon(rng, n)
            target = random_polygon(rng, n)
            op = CirculantOperator(n, m)
            drive = -op.apply(target.vertices)

            solutions = [solve_fixed_target(YauProblem(x0, target, m, beta))
                         for beta in betas]
            x_batch = np.broadcast_to(x0.vertices, (len(betas), n, 2)).copy()
            v_batch = np.stack([sol.velocity(0.0) for sol in solutions])
            barr = np.asarray(betas).reshape(-1, 1, 1)
            system = ForcedSystem(
                n, 2, m, beta=barr,
                forcing=lambda ts: np.broadcast_to(drive, ts.shape + drive.shape))
            traj = integrate(system, x_batch, v_batch, t_end, dt,
                             record_every=_record_stride(t_end, dt, 30))
            for bi, beta in enumerate(betas):
                exact = solutions[bi].frames(traj.times)
                err = float(np.abs(exact - traj.frames[:, bi]).max())
                results.append(CaseResult(
                    f"yau-fixed n={n} m={m} beta={beta:g}", err, tol))
    return results


def yau_moving_sweep(dt: float = BASE_DT, t_end: float = 3.0,
                     ns=(4, 5, 6), ms=(1, 2), betas=(1.0, 4.0), seed: int = 0,
                     h: float = 1e-3,
                     tolerance: float | None = None) -> list[CaseResult]:
    """Green's-function moving-target tracking vs RK4 on the forced system.

    The target drifts between two random polygons; the closed form is
    evaluated only at the recorded oracle times since each evaluation costs
    one Simpson pass.
    """
    tol = scaled_tolerance(dt) if tolerance is None else tolerance
    results = []
    for n in ns:
        for m in ms:
            rng = np.random.default_rng([seed, n, m, 2])
            x0 = random_polygon(rng, n)
            target = DriftTarget(random_polygon(rng, n), random_polygon(rng, n))
            op = CirculantOperator(n, m)

            def forcing(ts, op=op, target=target):
                return -op.apply(target.vertex_values(ts), axis=-2)

            x_batch = np.broadcast_to(x0.vertices, (len(betas), n, 2)).copy()
            v_batch = np.zeros_like(x_batch)
            barr = np.asarray(betas).reshape(-1, 1, 1)
            system = ForcedSystem(n, 2, m, beta=barr, forcing=forcing)
            traj = integrate(system, x_batch, v_batch, t_end, dt,
                             record_every=_record_stride(t_end, dt, 20))
            for bi, beta in enumerate(betas):
                sol = solve_moving_target(x0, target, m, beta, h=h)
                err = 0.0
                for ti, t in enumerate(traj.times):
                    gap = sol.evaluate(float(t)).vertices - traj.frames[ti, bi]
                    err = max(err, float(np.abs(gap).max()))
                results.append(CaseResult(
                    f"yau-moving n={n} m={m} beta={beta:g}", err, tol))
    return results


def run_all(dt: float = BASE_DT, seed: int = 0, scope: str = "all",
            tolerance: float | None = None) -> list[CaseResult]:
    results = []
    if scope in ("flow", "all"):
        results += flow_sweep(dt=dt, seeds=(seed, seed + 1, seed + 2),
                              tolerance=tolerance)
    if scope in ("yau", "all"):
        results += yau_fixed_sweep(dt=dt, seed=seed, tolerance=tolerance)
        results += yau_moving_sweep(dt=dt, seed=seed, tolerance=tolerance)
    return results
