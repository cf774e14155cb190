"""End-to-end CLI runs through polyflow.cli.main."""

import math

import numpy as np
import pytest

from conftest import spectrum_polygon
from polyflow.cli import main
from polyflow.geometry import Polygon
from polyflow.io import read_trajectory, write_frames, write_polygon
from polyflow.spectral import eigenvalue


@pytest.fixture
def pent_file(tmp_path, pentagon):
    path = tmp_path / "pent.poly"
    write_polygon(path, pentagon)
    return str(path)


@pytest.fixture
def yau_files(tmp_path, yau_source, yau_target):
    src = tmp_path / "src.poly"
    tgt = tmp_path / "tgt.poly"
    write_polygon(src, yau_source)
    write_polygon(tgt, yau_target)
    return str(src), str(tgt)


def read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def final_printed(out, key):
    for line in out.splitlines():
        if line.startswith(key):
            return float(line.split(":")[1].split()[0])
    raise AssertionError(f"no line starting with {key!r} in output")


def csv_row_at(path, t):
    traj = read_trajectory(path)
    idx = int(np.argmin(np.abs(traj.times - t)))
    assert abs(traj.times[idx] - t) < 1e-12
    return traj.frames[idx]


def test_eigen_plain_table(capsys):
    assert main(["eigen", "-n", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "k lambda"
    assert out[3] == "2 -4"
    assert len(out) == 5


def test_eigen_with_damping(capsys):
    assert main(["eigen", "-n", "4", "-b", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "k lambda regime r_plus r_minus"
    assert out[1] == "0 0 zero-mode 0 -4"
    assert out[3] == "2 -4 critical -2 -2"
    assert "overdamped" in out[2]


def test_eigen_underdamped_roots_are_complex(capsys):
    assert main(["eigen", "-n", "4", "-b", "1"]) == 0
    out = capsys.readouterr().out
    row = [line for line in out.splitlines() if line.startswith("1 ")][0]
    assert "underdamped" in row
    assert "i" in row.split()[3]


def test_eigen_domain_error(capsys):
    assert main(["eigen", "-n", "2"]) == 1
    assert "error[Domain]" in capsys.readouterr().err


def test_evolve_damped_collapse(tmp_path, capsys, pent_file):
    csv = str(tmp_path / "run.csv")
    rc = main([
        "evolve", pent_file, "-m", "1", "-b", "4",
        "--t-end", "30", "--samples", "40", "--csv", csv,
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert final_printed(out, "final diameter") < 1e-6
    assert "limit point:" in out
    assert "closure=zero-velocity" in out
    assert len(read_trajectory(csv)) == 40


def test_evolve_two_point_waypoint_row(tmp_path, capsys, pent_file, pentagon):
    alpha0 = complex(np.mean(pentagon.as_complex()))
    through = spectrum_polygon([alpha0, 3.0, 0.0, 0.0, 0.0])
    through_file = tmp_path / "through.poly"
    write_polygon(through_file, through)
    csv = str(tmp_path / "wp.csv")
    rc = main([
        "evolve", pent_file, "-m", "1", "-b", "4", "--t-end", "30",
        "--closure", "two-point", "--at", "1.2", "--through", str(through_file),
        "--csv", csv,
    ])
    assert rc == 0
    frame = csv_row_at(csv, 1.2)
    assert np.abs(frame - through.vertices).max() < 1e-9


def test_evolve_rescale_report(capsys, pent_file):
    rc = main(["evolve", pent_file, "-m", "1", "-b", "4", "--rescale",
               "--t-end", "20", "--samples", "10"])
    assert rc == 0
    out = capsys.readouterr().out
    assert ("rescaled limit: kind=affine-of-regular-polygon mode=1 "
            "scaling=exp(-r_plus t)") in out
    assert "limit block:" in out
    assert "residual outside dominant pair" in out


def test_evolve_undamped_mode_period(tmp_path, capsys):
    x0 = spectrum_polygon([0.0, 1.0, 0.0, 0.0, 0.0])
    poly = tmp_path / "mode1.poly"
    write_polygon(poly, x0)
    period = 2.0 * math.pi / math.sqrt(-eigenvalue(5, 1, 1))
    csv = str(tmp_path / "osc.csv")
    rc = main(["evolve", str(poly), "-b", "0", "--t-end", f"{period:.17g}",
               "--samples", "5", "--csv", csv])
    assert rc == 0
    traj = read_trajectory(csv)
    assert np.abs(traj.frames[-1] - traj.frames[0]).max() < 1e-9


def test_evolve_explicit_constants(tmp_path, capsys, pent_file):
    cpoly = tmp_path / "constants.poly"
    write_polygon(cpoly, spectrum_polygon([0.0, 0.1, 0.0, 0.0, 0.0]))
    rc = main(["evolve", pent_file, "-b", "2", "--closure", "explicit",
               "--constants", str(cpoly), "--t-end", "4"])
    assert rc == 0
    assert "closure=explicit" in capsys.readouterr().out


@pytest.mark.parametrize(
    "extra",
    [
        ["--at", "1.0", "--through", "x.poly", "--at", "2.0", "--through", "y.poly"],
        ["--closure", "two-point"],
        ["--at", "1.0"],
    ],
)
def test_evolve_waypoint_misuse_is_an_argument_error(pent_file, extra, capsys):
    with pytest.raises(SystemExit) as err:
        main(["evolve", pent_file] + extra)
    assert err.value.code == 2
    capsys.readouterr()


def test_yau_fixed_target_run(tmp_path, capsys, yau_files):
    src, tgt = yau_files
    dist_csv = str(tmp_path / "dist.csv")
    rc = main(["yau", src, tgt, "-m", "1", "-b", "4", "--t-end", "25",
               "--distances", dist_csv])
    assert rc == 0
    out = capsys.readouterr().out
    assert final_printed(out, "final distance to target") < 1e-6
    rows = [line.split(",") for line in read_lines(dist_csv)[1:]]
    ts = np.array([float(r[0]) for r in rows])
    ds = np.array([float(r[1]) for r in rows])
    tail = ds[ts >= 2.0]
    assert np.all(np.diff(tail) <= 1e-15)


def test_yau_reconcile_duplicate(tmp_path, capsys, yau_files, triangle):
    src, _ = yau_files
    tri = tmp_path / "tri.poly"
    write_polygon(tri, triangle)
    csv = str(tmp_path / "rec.csv")
    rc = main(["yau", src, str(tri), "-b", "4", "--t-end", "25", "--csv", csv])
    assert rc == 0
    final = read_trajectory(csv).frames[-1]
    v = triangle.vertices
    grown = np.array([v[0], v[0], v[1], v[1], v[2]])
    assert np.abs(final - grown).max() < 1e-3


def test_yau_reconcile_subdivide(tmp_path, capsys, yau_files, triangle):
    src, _ = yau_files
    tri = tmp_path / "tri.poly"
    write_polygon(tri, triangle)
    csv = str(tmp_path / "rec.csv")
    rc = main(["yau", src, str(tri), "-b", "4", "--t-end", "25",
               "--reconcile", "subdivide", "--csv", csv])
    assert rc == 0
    final = read_trajectory(csv).frames[-1]
    grown = np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 0.0], [2.0, 1.5], [0.0, 3.0]])
    assert np.abs(final - grown).max() < 1e-3


def test_yau_moving_target(tmp_path, capsys, yau_files, yau_source, yau_target):
    src, _ = yau_files
    frames_path = tmp_path / "moving.frames"
    mixes = np.linspace(0.0, 1.0, 41)
    frames = [
        Polygon((1 - mix) * yau_source.vertices + mix * yau_target.vertices)
        for mix in mixes
    ]
    write_frames(frames_path, frames, dt=0.1)
    dist_csv = str(tmp_path / "mdist.csv")
    rc = main(["yau", src, str(frames_path), "--moving", "-b", "4",
               "--t-end", "3", "--samples", "16", "--distances", dist_csv])
    assert rc == 0
    out = capsys.readouterr().out
    assert "moving target" in out
    ds = np.array([float(line.split(",")[1]) for line in read_lines(dist_csv)[1:]])
    assert np.all(np.isfinite(ds))


def test_yau_moving_waypoint(tmp_path, capsys, yau_files, yau_source, yau_target):
    src, _ = yau_files
    frames_path = tmp_path / "moving.frames"
    mixes = np.linspace(0.0, 1.0, 41)
    frames = [
        Polygon((1 - mix) * yau_source.vertices + mix * yau_target.vertices)
        for mix in mixes
    ]
    write_frames(frames_path, frames, dt=0.1)
    through = yau_target.translated([0.2, 0.1])
    through_file = tmp_path / "through.poly"
    write_polygon(through_file, through)
    csv = str(tmp_path / "mwp.csv")
    rc = main(["yau", src, str(frames_path), "--moving", "-b", "4",
               "--t-end", "3", "--samples", "16",
               "--at", "1.2", "--through", str(through_file), "--csv", csv])
    assert rc == 0
    frame = csv_row_at(csv, 1.2)
    assert np.abs(frame - through.vertices).max() < 1e-6


def test_yau_undamped_needs_flag(capsys, yau_files):
    src, tgt = yau_files
    assert main(["yau", src, tgt, "-b", "0"]) == 1
    assert "error[Domain]" in capsys.readouterr().err
    assert main(["yau", src, tgt, "-b", "0", "--allow-undamped",
                 "--t-end", "5"]) == 0
    capsys.readouterr()


def test_selfsim_scale(capsys):
    rc = main(["selfsim", "scale", "-n", "5", "-k", "1", "-b", "4"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "branch=overdamped-exponential" in out
    assert final_printed(out, "residual") < 1e-6


def test_selfsim_rotate(capsys):
    rc = main(["selfsim", "rotate", "-n", "5", "-k", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "rate=1.17557050458" in out
    assert final_printed(out, "residual") < 1e-6


def test_selfsim_rotate_subplane(capsys):
    rc = main(["selfsim", "rotate", "-n", "5", "-k", "1", "--axes", "1,3", "-p", "3"])
    assert rc == 0
    assert final_printed(capsys.readouterr().out, "residual") < 1e-6


def test_selfsim_damped_rotator_exits_three(capsys):
    rc = main(["selfsim", "rotate", "-n", "5", "-k", "1", "-b", "1"])
    assert rc == 3
    assert "error[NoSuchSolution]" in capsys.readouterr().err


def test_selfsim_translate(capsys):
    assert main(["selfsim", "translate"]) == 0
    out = capsys.readouterr().out
    assert "only single points translate" in out
    assert "x(t) = x0 + d t" in out
    assert main(["selfsim", "translate", "-b", "2"]) == 0
    out = capsys.readouterr().out
    assert "x(t) = x0 + (d / beta) (1 - exp(-beta t))" in out


def test_verify_smoke_and_seed_env(capsys, monkeypatch):
    argv = ["verify", "--dt", "0.05", "--scope", "flow"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert "verify: 108/108 cases within tolerance" in first
    assert "(dt=0.05, seed=0)" in first
    assert first.count("PASS flow") == 108

    assert main(argv) == 0
    assert capsys.readouterr().out == first

    monkeypatch.setenv("POLYFLOW_SEED", "7")
    assert main(argv) == 0
    assert "seed=7" in capsys.readouterr().out


def test_render_from_csv(tmp_path, capsys, pent_file, pentagon):
    csv = str(tmp_path / "run.csv")
    assert main(["evolve", pent_file, "-b", "4", "--t-end", "2",
                 "--samples", "9", "--csv", csv]) == 0
    tgt = tmp_path / "tgt.poly"
    write_polygon(tgt, pentagon)
    out_svg = str(tmp_path / "run.svg")
    rc = main(["render", csv, "-o", out_svg, "--target", str(tgt),
               "--waypoint-time", "1.0"])
    assert rc == 0
    capsys.readouterr()
    svg = open(out_svg, encoding="utf-8").read()
    assert svg.count('class="frame"') == 7
    assert 'class="initial"' in svg
    assert 'class="waypoint"' in svg
    assert 'class="target"' in svg
    assert "viewBox=" in svg


def test_render_default_output_and_bad_waypoint(tmp_path, capsys, pent_file):
    csv = str(tmp_path / "plain.csv")
    assert main(["evolve", pent_file, "--t-end", "1", "--samples", "4",
                 "--csv", csv]) == 0
    assert main(["render", csv]) == 0
    assert (tmp_path / "plain.svg").exists()
    assert main(["render", csv, "--waypoint-time", "0.123"]) == 1
    err = capsys.readouterr().err
    assert "error[Domain]" in err


def test_bad_projection_and_missing_file(tmp_path, capsys, pent_file):
    csv = str(tmp_path / "p.csv")
    assert main(["evolve", pent_file, "--t-end", "1", "--samples", "4",
                 "--csv", csv]) == 0
    assert main(["render", csv, "--project", "1,1"]) == 1
    assert main(["evolve", str(tmp_path / "nope.poly")]) == 1
    err = capsys.readouterr().err
    assert "error[Parse]" in err


def test_unknown_subcommand_is_argument_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["transmogrify"])
    assert err.value.code == 2
    capsys.readouterr()


def test_byte_deterministic_outputs(tmp_path, pent_file, capsys):
    outs = []
    for tag in ("a", "b"):
        csv = str(tmp_path / f"{tag}.csv")
        svg = str(tmp_path / f"{tag}.svg")
        assert main(["evolve", pent_file, "-b", "4", "--t-end", "3",
                     "--samples", "12", "--csv", csv, "--svg", svg]) == 0
        outs.append((open(csv, "rb").read(), open(svg, "rb").read()))
    capsys.readouterr()
    assert outs[0] == outs[1]
