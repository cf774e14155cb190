"""Command-line front end.

Subcommands: eigen (spectrum tables), evolve (free flow), yau (target-seeking
flow), selfsim (self-similar constructions), verify (oracle sweeps), render
(CSV trajectory to SVG).  Exit codes: 0 success, 1 domain or data errors,
2 argument errors, 3 requests for solutions that provably do not exist.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io as polyio
from .crosscheck import run_all, scaled_tolerance
from .errors import DomainError, NoSuchSolutionError, PolyflowError
from .flow import (DampingRegime, angular_rate, classify, dominant_mode,
                   rate_pair, rescaled_limit, rescaled_polygon, solve_explicit,
                   solve_ivp, solve_two_point)
from .geometry import Polygon, Trajectory, decompose, planar_spectrum, \
    reconcile_vertex_counts
from .render import render_svg
from .selfsimilar import (planar_rotator, scaling_profile, subplane_rotator,
                          translator_check, verify_self_similar)
from .spectral import basis_polygon, eigenvalues
from .yau import SampledTarget, YauProblem, solve, solve_moving_target


def _parse_project(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"projection must be two comma-separated axes, got {text!r}")
    try:
        i, j = (int(part) for part in parts)
    except ValueError:
        raise DomainError(f"projection axes must be integers, got {text!r}") from None
    if i < 1 or j < 1 or i == j:
        raise DomainError(f"projection axes must be distinct and 1-based, got {text!r}")
    return i - 1, j - 1


def _sample_times(t_end: float, samples: int, extra: float | None = None) -> np.ndarray:
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")
    ts = np.linspace(0.0, t_end, samples)
    if extra is not None:
        ts = np.unique(np.concatenate([ts, [float(extra)]]))
    return ts


def _single_waypoint(parser: argparse.ArgumentParser, args):
    """One --at/--through pair at most; the flow has one free closure."""
    ats = args.at or []
    throughs = args.through or []
    if len(ats) > 1 or len(throughs) > 1:
        parser.error("a second-order flow supports exactly one waypoint "
                     "beyond the initial polygon")
    if len(ats) != len(throughs):
        parser.error("--at and --through must be given together")
    if not ats:
        return None
    return float(ats[0]), throughs[0]


def _write_svg(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _fmt_root(value) -> str:
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}i"
    return f"{value:.12g}"


def cmd_eigen(args) -> int:
    lams = eigenvalues(args.n, args.m)
    if args.beta is None:
        print("k lambda")
        for k, lam in enumerate(lams):
            print(f"{k} {lam:.12g}")
        return 0
    beta = args.beta
    print("k lambda regime r_plus r_minus")
    for k, lam in enumerate(lams):
        regime = classify(lam, beta)
        if regime == DampingRegime.UNDERDAMPED:
            gam = angular_rate(lam, beta)
            roots = (complex(-0.5 * beta, gam), complex(-0.5 * beta, -gam))
        elif regime == DampingRegime.ZERO_MODE_UNDAMPED:
            roots = (0.0, 0.0)
        elif regime == DampingRegime.ZERO_MODE:
            roots = (0.0, -beta)
        elif regime == DampingRegime.CRITICAL:
            roots = (-0.5 * beta, -0.5 * beta)
        else:
            roots = rate_pair(lam, beta)
        print(f"{k} {lam:.12g} {regime.value} "
              f"{_fmt_root(roots[0])} {_fmt_root(roots[1])}")
    return 0


def cmd_evolve(args, parser) -> int:
    x0 = polyio.read_polygon(args.input)
    waypoint = _single_waypoint(parser, args)
    if args.closure == "two-point":
        if waypoint is None:
            parser.error("two-point closure needs --at TIME and --through FILE")
        t1, through = waypoint
        x1 = polyio.read_polygon(through)
        sol = solve_two_point(x0, x1, t1, args.m, args.beta)
    elif args.closure == "explicit":
        if waypoint is not None:
            parser.error("waypoints belong to the two-point closure")
        constants = None
        if args.constants:
            cpoly = polyio.read_polygon(args.constants)
            if cpoly.n != x0.n or cpoly.p != x0.p:
                raise DomainError("constants polygon must match the input's shape")
            constants = (planar_spectrum(cpoly) if x0.p == 2 else decompose(cpoly))
        sol = solve_explicit(x0, args.m, args.beta, constants)
    else:
        if waypoint is not None:
            parser.error("waypoints belong to the two-point closure")
        sol = solve_ivp(x0, None, args.m, args.beta)

    ts = _sample_times(args.t_end, args.samples,
                       extra=waypoint[0] if waypoint else None)
    if args.rescale:
        report = rescaled_limit(sol)
        if "/ t" in report.scaling:
            ts = ts[ts > 0.0]
        frames = np.stack([rescaled_polygon(sol, float(t)).vertices for t in ts])
        print(f"rescaled limit: kind={report.kind.value} mode={report.mode} "
              f"scaling={report.scaling}")
        if report.block is not None:
            print(f"limit block: {report.block}")
        print(f"probe time {report.probe_time:.6g}: residual outside dominant "
              f"pair {report.probe_residual:.6g}")
        if report.note:
            print(f"note: {report.note}")
    else:
        frames = sol.frames(ts)
    traj = Trajectory(ts, frames)

    if args.csv:
        polyio.write_trajectory(args.csv, traj)
        print(f"wrote {args.csv}")
    if args.svg:
        wp_index = None
        if waypoint is not None:
            wp_index = int(np.argmin(np.abs(ts - waypoint[0])))
        _write_svg(args.svg, render_svg(traj, _parse_project(args.project),
                                        waypoint_index=wp_index))
        print(f"wrote {args.svg}")

    final = Polygon(frames[-1])
    print(f"evolve: n={x0.n} p={x0.p} m={args.m} beta={args.beta:g} "
          f"closure={args.closure} t_end={args.t_end:g}")
    print(f"final diameter: {final.diameter():.6g}")
    if args.beta > 0 and not args.rescale:
        point = sol.limit_point()
        print("limit point: " + " ".join(f"{c:.12g}" for c in np.atleast_1d(point)))
    return 0


def cmd_yau(args, parser) -> int:
    x0 = polyio.read_polygon(args.source)
    waypoint = _single_waypoint(parser, args)
    wp = None
    if waypoint is not None:
        wp = (polyio.read_polygon(waypoint[1]), waypoint[0])

    if args.moving:
        target = SampledTarget.from_file(args.target)
        sol = solve_moving_target(x0, target, args.m, args.beta,
                                  h=args.quad_step, waypoint=wp)
        ts = _sample_times(args.t_end, args.samples,
                           extra=waypoint[0] if waypoint else None)
        frames = sol.frames(ts)
        dists = np.array([sol.distance_to_target(float(t)) for t in ts])
        target_poly = target.polygon_at(float(ts[-1]))
    else:
        y = polyio.read_polygon(args.target)
        if x0.n != y.n:
            x0, y = reconcile_vertex_counts(x0, y, strategy=args.reconcile)
            if wp is not None and wp[0].n != x0.n:
                raise DomainError("waypoint polygon must match the reconciled count")
        problem = YauProblem(x0, y, args.m, args.beta,
                             exact_limit=not args.no_exact_limit,
                             waypoint=wp, allow_undamped=args.allow_undamped)
        sol = solve(problem)
        ts = _sample_times(args.t_end, args.samples,
                           extra=waypoint[0] if waypoint else None)
        frames = sol.frames(ts)
        dists = sol.distance_to_target(ts)
        target_poly = y
    traj = Trajectory(ts, frames)

    if args.csv:
        polyio.write_trajectory(args.csv, traj)
        print(f"wrote {args.csv}")
    if args.distances:
        polyio.write_distances(args.distances, ts, dists)
        print(f"wrote {args.distances}")
    if args.svg:
        wp_index = None
        if waypoint is not None:
            wp_index = int(np.argmin(np.abs(ts - waypoint[0])))
        _write_svg(args.svg, render_svg(traj, _parse_project(args.project),
                                        waypoint_index=wp_index,
                                        target=target_poly))
        print(f"wrote {args.svg}")

    print(f"yau: n={x0.n} p={x0.p} m={args.m} beta={args.beta:g} "
          f"{'moving' if args.moving else 'fixed'} target t_end={args.t_end:g}")
    print(f"final distance to target: {float(dists[-1]):.6g}")
    return 0


def _selfsim_outputs(args, motion, x0, report) -> None:
    ts = _sample_times(args.t_end, args.samples)
    if args.csv or args.svg:
        frames = np.stack([motion.orbit(x0, float(t)).vertices for t in ts])
        traj = Trajectory(ts, frames)
        if args.csv:
            polyio.write_trajectory(args.csv, traj)
            print(f"wrote {args.csv}")
        if args.svg:
            _write_svg(args.svg, render_svg(traj, _parse_project(args.project)))
            print(f"wrote {args.svg}")
    print(f"residual: {report.max_residual:.6g}")


def cmd_selfsim(args, parser) -> int:
    if args.kind == "scale":
        profile = scaling_profile(args.n, args.k, args.m, args.beta, args.constant)
        x0 = (polyio.read_polygon(args.input) if args.input
              else Polygon.from_complex(basis_polygon(args.n, args.k)))
        report = verify_self_similar(x0, profile)
        print(f"scaling solution: n={args.n} k={args.k} m={args.m} "
              f"beta={args.beta:g} branch={profile.branch.value}")
        _selfsim_outputs(args, profile, x0, report)
        return 0
    if args.kind == "rotate":
        if args.axes is None:
            motion = planar_rotator(args.n, args.k, args.m, sign=args.sign,
                                    beta=args.beta,
                                    coefficients=tuple(args.coefficients))
        else:
            motion = subplane_rotator(args.n, args.k, args.m,
                                      axes=_parse_project(args.axes),
                                      p=args.p, sign=args.sign, beta=args.beta)
        x0 = polyio.read_polygon(args.input) if args.input else motion.initial_polygon
        report = verify_self_similar(x0, motion)
        print(f"rotator: n={args.n} k={args.k} m={args.m} "
              f"rate={motion.rate:.12g}")
        _selfsim_outputs(args, motion, x0, report)
        return 0
    report = translator_check(args.beta, args.displacement)
    print(report.statement)
    if args.beta > 0:
        print("point path: x(t) = x0 + (d / beta) (1 - exp(-beta t))")
    else:
        print("point path: x(t) = x0 + d t")
    return 0


def cmd_verify(args) -> int:
    seed = args.seed
    env_seed = os.environ.get("POLYFLOW_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    tol = scaled_tolerance(args.dt)
    results = run_all(dt=args.dt, seed=seed, scope=args.scope)
    worst = 0.0
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.label}: discrepancy {res.error:.3e} "
              f"(tolerance {res.tolerance:.3e})")
        worst = max(worst, res.error)
        failed += 0 if res.passed else 1
    print(f"verify: {len(results) - failed}/{len(results)} cases within "
          f"tolerance {tol:.3e}; max discrepancy {worst:.3e} "
          f"(dt={args.dt:g}, seed={seed})")
    return 0 if failed == 0 else 1


def cmd_render(args) -> int:
    traj = polyio.read_trajectory(args.input)
    target = polyio.read_polygon(args.target) if args.target else None
    wp_index = None
    if args.waypoint_time is not None:
        gaps = np.abs(traj.times - args.waypoint_time)
        wp_index = int(np.argmin(gaps))
        if gaps[wp_index] > 1e-9:
            raise DomainError(
                f"no sample at waypoint time {args.waypoint_time:g}; "
                "closest is {:.6g}".format(traj.times[wp_index]))
    out = args.output or os.path.splitext(args.input)[0] + ".svg"
    _write_svg(out, render_svg(traj, _parse_project(args.project),
                               waypoint_index=wp_index, target=target))
    print(f"wrote {out}")
    return 0


def _add_output_flags(sub, with_distances=False):
    sub.add_argument("--csv", help="write the trajectory table here")
    sub.add_argument("--svg", help="render superimposed frames here")
    if with_distances:
        sub.add_argument("--distances", help="write t,distance series here")
    sub.add_argument("--project", default="1,2",
                     help="1-based coordinate pair for SVG projection")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyflow",
        description="closed-form evolution, target-seeking flows, and "
                    "self-similar solutions for closed polygons")
    subs = parser.add_subparsers(dest="command", required=True)

    eigen = subs.add_parser("eigen", help="print the operator spectrum")
    eigen.add_argument("-n", type=int, required=True, help="vertex count")
    eigen.add_argument("-m", type=int, default=1, help="operator order")
    eigen.add_argument("-b", "--beta", type=float, default=None,
                       help="damping; adds regime and root columns")

    evolve = subs.add_parser("evolve", help="run the free flow from a .poly file")
    evolve.add_argument("input", help=".poly file with the initial polygon")
    evolve.add_argument("-m", type=int, default=1)
    evolve.add_argument("-b", "--beta", type=float, default=0.0)
    evolve.add_argument("--t-end", type=float, default=10.0)
    evolve.add_argument("--samples", type=int, default=60)
    evolve.add_argument("--closure", default="zero-velocity",
                        choices=["zero-velocity", "two-point", "explicit"])
    evolve.add_argument("--at", type=float, action="append",
                        help="waypoint time (two-point closure)")
    evolve.add_argument("--through", action="append",
                        help=".poly file the flow must pass through")
    evolve.add_argument("--constants",
                        help=".poly file whose spectrum supplies free constants")
    evolve.add_argument("--rescale", action="store_true",
                        help="emit limit-rescaled frames and the limit report")
    _add_output_flags(evolve)

    yau = subs.add_parser("yau", help="flow a polygon toward a target")
    yau.add_argument("source", help=".poly file with the initial polygon")
    yau.add_argument("target", help=".poly target (or frames file with --moving)")
    yau.add_argument("-m", type=int, default=1)
    yau.add_argument("-b", "--beta", type=float, default=4.0)
    yau.add_argument("--t-end", type=float, default=25.0)
    yau.add_argument("--samples", type=int, default=60)
    yau.add_argument("--reconcile", default="duplicate",
                     choices=["duplicate", "subdivide"],
                     help="vertex-count reconciliation strategy")
    yau.add_argument("--at", type=float, action="append")
    yau.add_argument("--through", action="append")
    yau.add_argument("--no-exact-limit", action="store_true",
                     help="keep caller constants instead of the exact-limit "
                          "mode-0 choice")
    yau.add_argument("--allow-undamped", action="store_true",
                     help="permit beta = 0 (oscillates forever)")
    yau.add_argument("--moving", action="store_true",
                     help="treat the target file as sampled frames")
    yau.add_argument("--quad-step", type=float, default=1e-3,
                     help="Simpson step bound for moving-target integrals")
    _add_output_flags(yau, with_distances=True)

    selfsim = subs.add_parser("selfsim", help="construct self-similar solutions")
    kinds = selfsim.add_subparsers(dest="kind", required=True)
    scale = kinds.add_parser("scale", help="pure scaling orbit")
    scale.add_argument("-n", type=int, required=True)
    scale.add_argument("-k", type=int, required=True)
    scale.add_argument("-m", type=int, default=1)
    scale.add_argument("-b", "--beta", type=float, default=0.0)
    scale.add_argument("-c", "--constant", type=float, default=0.0,
                       help="free constant in the scaling factor")
    scale.add_argument("--input", help="custom .poly data inside the mode span")
    rotate = kinds.add_parser("rotate", help="pure rotation orbit")
    rotate.add_argument("-n", type=int, required=True)
    rotate.add_argument("-k", type=int, required=True)
    rotate.add_argument("-m", type=int, default=1)
    rotate.add_argument("-b", "--beta", type=float, default=0.0)
    rotate.add_argument("--sign", type=int, default=1, choices=[1, -1])
    rotate.add_argument("--axes", help="1-based rotation plane, e.g. 1,3")
    rotate.add_argument("-p", type=int, default=3,
                        help="ambient dimension when --axes is given")
    rotate.add_argument("--coefficients", type=float, nargs=2,
                        default=[1.0, 0.0],
                        help="real mixing weights of the planar mode pair")
    rotate.add_argument("--input", help="custom .poly data inside the mode span")
    translate = kinds.add_parser("translate",
                                 help="report on translating solutions")
    translate.add_argument("-b", "--beta", type=float, default=0.0)
    translate.add_argument("--displacement", type=float, default=1.0)
    for sub in (scale, rotate):
        sub.add_argument("--t-end", type=float, default=2.0)
        sub.add_argument("--samples", type=int, default=60)
        _add_output_flags(sub)

    verify = subs.add_parser("verify", help="closed forms vs the RK4 oracle")
    verify.add_argument("--dt", type=float, default=1e-4)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--scope", default="all", choices=["flow", "yau", "all"])

    render = subs.add_parser("render", help="trajectory CSV to SVG")
    render.add_argument("input", help="trajectory CSV file")
    render.add_argument("-o", "--output", help="output SVG path")
    render.add_argument("--project", default="1,2")
    render.add_argument("--waypoint-time", type=float, default=None)
    render.add_argument("--target", help=".poly frame to draw dashed")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eigen":
            return cmd_eigen(args)
        if args.command == "evolve":
            return cmd_evolve(args, parser)
        if args.command == "yau":
            return cmd_yau(args, parser)
        if args.command == "selfsim":
            return cmd_selfsim(args, parser)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_render(args)
    except NoSuchSolutionError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except PolyflowError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
