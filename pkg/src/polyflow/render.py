"""Deterministic SVG rendering of polygon trajectories.

All frames are drawn superimposed as closed paths, the initial frame styled
distinctly, with optional waypoint and target frames in their own stroke
classes.  The view box is fitted to frame 0 with a 5% margin per axis and the
y axis is flipped so the picture sits in the usual mathematical orientation.
Output is a plain string assembled with fixed formatting, so identical input
yields identical bytes.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .geometry import Polygon, Trajectory


def _fmt(v: float) -> str:
    out = format(float(v), ".8g")
    return "0" if out == "-0" else out


def _path(vertices: np.ndarray, css_class: str) -> str:
    coords = " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in vertices)
    return f'  <path class="{css_class}" d="M {coords} Z"/>'


def render_svg(trajectory: Trajectory, project: tuple[int, int] = (0, 1),
               waypoint_index: int | None = None,
               target: Polygon | None = None) -> str:
    frames = np.asarray(trajectory.frames, dtype=float)
    if frames.ndim != 3 or frames.shape[0] == 0:
        raise DomainError("rendering needs a non-empty unbatched trajectory")
    p = frames.shape[2]
    i, j = project
    if not (0 <= i < p and 0 <= j < p and i != j):
        raise DomainError(f"projection axes {project} invalid for p = {p}")
    flat = frames[:, :, (i, j)]

    first = flat[0]
    lo = first.min(axis=0)
    hi = first.max(axis=0)
    span = hi - lo
    span = np.where(span <= 0.0, 1.0, span)
    margin = 0.05 * span
    x0, y0 = lo - margin
    w, h = span + 2.0 * margin
    stroke = 0.006 * float(span.max())

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(x0)} {_fmt(-(y0 + h))} {_fmt(w)} {_fmt(h)}" '
        f'width="640" height="{_fmt(640.0 * h / w)}">',
        "<style>",
        f"path {{ fill: none; stroke-width: {_fmt(stroke)}; "
        "stroke-linejoin: round; }",
        ".frame { stroke: #5580b0; opacity: 0.6; }",
        ".initial { stroke: #101010; }",
        ".waypoint { stroke: #c03030; }",
        ".target { stroke: #2a8a50; stroke-dasharray: "
        f"{_fmt(3.0 * stroke)} {_fmt(2.0 * stroke)}; }}",
        "</style>",
        '<g transform="scale(1 -1)">',
    ]
    for idx in range(flat.shape[0]):
        if idx == 0:
            css = "initial"
        elif waypoint_index is not None and idx == waypoint_index:
            css = "waypoint"
        else:
            css = "frame"
        lines.append(_path(flat[idx], css))
    if target is not None:
        lines.append(_path(target.vertices[:, (i, j)], "target"))
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
