"""Plain-text file formats: .poly polygons, frame sequences, trajectory CSV.

All writers emit 17 significant digits so values round-trip bit-exactly.
Lines starting with ``#`` and blank lines are ignored on input.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError
from .geometry import Polygon, Trajectory

_AXES = ("x", "y", "z", "w")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def axis_label(i: int) -> str:
    return _AXES[i] if i < len(_AXES) else f"c{i}"


def _content_lines(path) -> list[tuple[int, list[str]]]:
    out = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                stripped = raw.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                out.append((lineno, stripped.split()))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    if not out:
        raise ParseError(f"{path}: file holds no data")
    return out


def _parse_floats(path, lineno: int, parts: list[str], count: int) -> np.ndarray:
    if len(parts) != count:
        raise ParseError(f"{path}:{lineno}: expected {count} numbers, got {len(parts)}")
    try:
        return np.array([float(tok) for tok in parts])
    except ValueError as exc:
        raise ParseError(f"{path}:{lineno}: {exc}") from None


def _parse_header(path, lineno: int, parts: list[str]) -> tuple[int, int]:
    if len(parts) != 3 or parts[0] != "poly":
        raise ParseError(f"{path}:{lineno}: expected header 'poly <n> <p>'")
    try:
        n, p = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"{path}:{lineno}: vertex count and dimension must be integers") from None
    if n < 3 or p < 2:
        raise ParseError(f"{path}:{lineno}: need n >= 3 and p >= 2, got n={n} p={p}")
    return n, p


def _read_vertex_block(path, lines, start: int, n: int, p: int) -> np.ndarray:
    if start + n > len(lines):
        raise ParseError(f"{path}: expected {n} vertex lines, file ends early")
    rows = [_parse_floats(path, lines[start + j][0], lines[start + j][1], p)
            for j in range(n)]
    return np.array(rows)


def write_polygon(path, polygon: Polygon, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"poly {polygon.n} {polygon.p}\n")
        for row in polygon.vertices:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def read_polygon(path) -> Polygon:
    lines = _content_lines(path)
    n, p = _parse_header(path, *lines[0])
    if len(lines) > 1 and lines[1][1][0] == "frames":
        raise ParseError(f"{path}: frame sequence given where a single polygon was expected")
    vertices = _read_vertex_block(path, lines, 1, n, p)
    if len(lines) != 1 + n:
        extra = lines[1 + n][0]
        raise ParseError(f"{path}:{extra}: trailing data after {n} vertices")
    return Polygon(vertices)


def write_frames(path, polygons: Sequence[Polygon], dt: float) -> None:
    """Write equally spaced polygon frames: poly header, frames header, blocks."""
    polygons = list(polygons)
    first = polygons[0]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"poly {first.n} {first.p}\n")
        fh.write(f"frames {len(polygons)} {_fmt(dt)}\n")
        for poly in polygons:
            for row in poly.vertices:
                fh.write(" ".join(_fmt(v) for v in row) + "\n")


def read_frames(path) -> tuple[list[Polygon], float]:
    lines = _content_lines(path)
    n, p = _parse_header(path, *lines[0])
    if len(lines) < 2 or lines[1][1][0] != "frames":
        raise ParseError(f"{path}: expected 'frames <count> <dt>' after the poly header")
    lineno, parts = lines[1]
    if len(parts) != 3:
        raise ParseError(f"{path}:{lineno}: expected 'frames <count> <dt>'")
    try:
        count = int(parts[1])
        dt = float(parts[2])
    except ValueError:
        raise ParseError(f"{path}:{lineno}: malformed frame count or spacing") from None
    if count < 1 or dt <= 0:
        raise ParseError(f"{path}:{lineno}: need count >= 1 and dt > 0")
    frames = []
    cursor = 2
    for _ in range(count):
        frames.append(Polygon(_read_vertex_block(path, lines, cursor, n, p)))
        cursor += n
    if len(lines) != cursor:
        raise ParseError(f"{path}:{lines[cursor][0]}: trailing data after {count} frames")
    return frames, dt


def trajectory_header(n: int, p: int) -> str:
    cols = ["t"]
    for j in range(n):
        for i in range(p):
            cols.append(f"v{j}_{axis_label(i)}")
    return ",".join(cols)


def write_trajectory(path, trajectory: Trajectory) -> None:
    t, frames = trajectory.times, trajectory.frames
    n, p = frames.shape[1], frames.shape[2]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trajectory_header(n, p) + "\n")
        for row in range(t.shape[0]):
            cells = [_fmt(t[row])]
            cells.extend(_fmt(v) for v in frames[row].ravel())
            fh.write(",".join(cells) + "\n")


def read_trajectory(path) -> Trajectory:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = [line.rstrip("\n") for line in fh if line.strip()]
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    if not raw:
        raise ParseError(f"{path}: empty trajectory file")
    header = raw[0].split(",")
    if header[0] != "t" or len(header) < 1 + 3 * 2:
        raise ParseError(f"{path}:1: malformed trajectory header")
    p = sum(1 for name in header[1:] if name.startswith("v0_"))
    if p < 2 or (len(header) - 1) % p != 0:
        raise ParseError(f"{path}:1: vertex columns do not form (n, p) blocks")
    n = (len(header) - 1) // p
    times, frames = [], []
    for lineno, line in enumerate(raw[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ParseError(f"{path}:{lineno}: expected {len(header)} cells, got {len(cells)}")
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
        times.append(values[0])
        frames.append(np.array(values[1:]).reshape(n, p))
    return Trajectory(np.array(times), np.array(frames))


def write_distances(path, times: Iterable[float], distances: Iterable[float]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,distance\n")
        for t, d in zip(times, distances):
            fh.write(f"{_fmt(t)},{_fmt(d)}\n")
