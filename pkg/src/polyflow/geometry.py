"""Polygon data model in R^p, real mode blocks, affine maps, reconciliation.

A polygon is an ordered cyclic tuple of n >= 3 vertices; closure is implicit
(no repeated endpoint).  Planar polygons round-trip through C^n, and general
ones decompose into per-mode 2 x p real blocks against the sampled
cosine/sine basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .spectral import cosine_norm_sq, dft, real_basis, sine_norm_sq


@dataclass(frozen=True, eq=False)
class Polygon:
    """Closed polygon: immutable (n, p) float array of vertex rows."""

    vertices: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vertices, dtype=float)
        if arr.ndim != 2:
            raise DomainError(f"vertices must be an (n, p) array, got shape {arr.shape}")
        n, p = arr.shape
        if n < 3:
            raise DomainError(f"a polygon needs at least 3 vertices, got {n}")
        if p < 2:
            raise DomainError(f"ambient dimension must be >= 2, got {p}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("vertices must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    @classmethod
    def from_complex(cls, z: np.ndarray) -> "Polygon":
        z = np.asarray(z, dtype=complex)
        return cls(np.column_stack([z.real, z.imag]))

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def p(self) -> int:
        return self.vertices.shape[1]

    def as_complex(self) -> np.ndarray:
        if self.p != 2:
            raise DimensionMismatchError(
                f"complex view needs a planar polygon, this one lives in R^{self.p}")
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d * d).sum(axis=-1)).max())

    def is_point(self, tol: float = 1e-12) -> bool:
        return self.diameter() <= tol

    def translated(self, offset: np.ndarray) -> "Polygon":
        return Polygon(self.vertices + np.asarray(offset, dtype=float))

    def __repr__(self) -> str:
        return f"Polygon(n={self.n}, p={self.p})"


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Affine map X |-> X E + a acting on vertex rows."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float)
        tr = np.array(self.translation, dtype=float)
        if lin.ndim != 2 or lin.shape[0] != lin.shape[1]:
            raise DomainError("linear part must be a square matrix")
        if tr.shape != (lin.shape[0],):
            raise DimensionMismatchError("translation length must match the matrix size")
        lin.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    @classmethod
    def identity(cls, p: int) -> "AffineMap":
        return cls(np.eye(p), np.zeros(p))

    @classmethod
    def rotation(cls, theta: float, p: int = 2, axes: tuple[int, int] = (0, 1)) -> "AffineMap":
        i, j = axes
        if not 0 <= i < j < p:
            raise DomainError(f"rotation plane {axes} invalid for dimension {p}")
        mat = np.eye(p)
        c, s = np.cos(theta), np.sin(theta)
        mat[i, i] = c
        mat[j, j] = c
        mat[i, j] = s
        mat[j, i] = -s
        return cls(mat, np.zeros(p))

    @classmethod
    def translation_only(cls, offset) -> "AffineMap":
        offset = np.asarray(offset, dtype=float)
        return cls(np.eye(offset.shape[0]), offset)

    def __call__(self, polygon: Polygon) -> Polygon:
        if polygon.p != self.linear.shape[0]:
            raise DimensionMismatchError(
                f"map acts on R^{self.linear.shape[0]}, polygon lives in R^{polygon.p}")
        return Polygon(polygon.vertices @ self.linear + self.translation)


def apply_affine(mapping: AffineMap, polygon: Polygon) -> Polygon:
    return mapping(polygon)


@dataclass(frozen=True, eq=False)
class CodimSpectrum:
    """Real mode blocks of a polygon: blocks[k] is the 2 x p coefficient of (c_k, s_k).

    k runs over 0 .. n//2.  The sine row is structurally zero at k = 0 and,
    for even n, at k = n/2.
    """

    n: int
    blocks: np.ndarray

    def __post_init__(self):
        blocks = np.array(self.blocks, dtype=float)
        expected = self.n // 2 + 1
        if blocks.ndim != 3 or blocks.shape[0] != expected or blocks.shape[1] != 2:
            raise DomainError(
                f"blocks must have shape ({expected}, 2, p), got {blocks.shape}")
        if np.any(blocks[0, 1] != 0.0):
            raise DomainError("the sine row of mode 0 must be exactly zero")
        if self.n % 2 == 0 and np.any(blocks[-1, 1] != 0.0):
            raise DomainError(f"the sine row of mode {self.n // 2} must be exactly zero")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def p(self) -> int:
        return self.blocks.shape[2]

    @property
    def mode_count(self) -> int:
        return self.blocks.shape[0]


def decompose(polygon: Polygon) -> CodimSpectrum:
    """Project a polygon onto the sampled cosine/sine basis, mode by mode.

    Uses the exact basis norms (n for c_0 and c_{n/2}, n/2 otherwise); the
    projections are direct inner products.
    """
    n, p = polygon.n, polygon.p
    blocks = np.zeros((n // 2 + 1, 2, p))
    v = polygon.vertices
    for k in range(n // 2 + 1):
        c, s = real_basis(n, k)
        blocks[k, 0] = (c @ v) / cosine_norm_sq(n, k)
        s_norm = sine_norm_sq(n, k)
        if s_norm > 0.0:
            blocks[k, 1] = (s @ v) / s_norm
    return CodimSpectrum(n, blocks)


def reconstruct(spectrum: CodimSpectrum) -> Polygon:
    """Assemble the polygon sum_k (c_k, s_k) . blocks[k]."""
    n = spectrum.n
    out = np.zeros((n, spectrum.p))
    for k in range(spectrum.mode_count):
        c, s = real_basis(n, k)
        out += np.outer(c, spectrum.blocks[k, 0]) + np.outer(s, spectrum.blocks[k, 1])
    return Polygon(out)


def complex_spectrum(spectrum: CodimSpectrum) -> np.ndarray:
    """Planar block coefficients rewritten as the n complex mode coefficients.

    With a = alpha-row, b = beta-row read as complex numbers, modes pair as
    alpha_k = (a - i b)/2 and alpha_{n-k} = (a + i b)/2 for 0 < k < n/2, while
    k = 0 and k = n/2 carry a directly.  Matches ``spectral.dft`` exactly.
    """
    if spectrum.p != 2:
        raise DimensionMismatchError("complex spectrum is defined for planar polygons only")
    n = spectrum.n
    out = np.zeros(n, dtype=complex)
    for k in range(spectrum.mode_count):
        a = spectrum.blocks[k, 0, 0] + 1j * spectrum.blocks[k, 0, 1]
        b = spectrum.blocks[k, 1, 0] + 1j * spectrum.blocks[k, 1, 1]
        if k == 0 or 2 * k == n:
            out[k] = a
        else:
            out[k] = (a - 1j * b) / 2.0
            out[n - k] = (a + 1j * b) / 2.0
    return out


def planar_spectrum(polygon: Polygon) -> np.ndarray:
    """Complex mode coefficients of a planar polygon."""
    return dft(polygon.as_complex())


def sup_distance(x: Polygon, y: Polygon) -> float:
    """Entrywise sup-norm distance between two polygons' vertex arrays."""
    if x.n != y.n or x.p != y.p:
        raise DimensionMismatchError(
            f"polygons differ in shape: ({x.n}, {x.p}) vs ({y.n}, {y.p})")
    return float(np.abs(x.vertices - y.vertices).max())


def _grow_by_duplication(polygon: Polygon, target: int) -> Polygon:
    deficit = target - polygon.n
    base, rem = divmod(deficit, polygon.n)
    rows = []
    for j in range(polygon.n):
        copies = 1 + base + (1 if j < rem else 0)
        rows.extend([polygon.vertices[j]] * copies)
    return Polygon(np.array(rows))


def _grow_by_subdivision(polygon: Polygon, target: int) -> Polygon:
    deficit = target - polygon.n
    n = polygon.n
    v = polygon.vertices
    lengths = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
    order = sorted(range(n), key=lambda e: (-lengths[e], e))
    counts = [0] * n
    for i in range(deficit):
        counts[order[i % n]] += 1
    rows = []
    for j in range(n):
        rows.append(v[j])
        nxt = v[(j + 1) % n]
        for l in range(1, counts[j] + 1):
            frac = l / (counts[j] + 1)
            rows.append(v[j] + frac * (nxt - v[j]))
    return Polygon(np.array(rows))


def reconcile_vertex_counts(x: Polygon, y: Polygon,
                            strategy: str = "duplicate") -> tuple[Polygon, Polygon]:
    """Bring two polygons to a common vertex count without moving their traces.

    ``duplicate`` repeats vertices of the smaller polygon in place (extra
    copies spread evenly, earliest indices first); ``subdivide`` inserts
    points along its edges, longest edges first (ties to the lower index),
    equally spaced within each edge.  The larger polygon is returned
    unchanged; equal counts are a no-op.
    """
    if strategy not in ("duplicate", "subdivide"):
        raise DomainError(f"unknown reconciliation strategy {strategy!r}")
    if x.p != y.p:
        raise DimensionMismatchError(
            f"polygons live in different dimensions: {x.p} vs {y.p}")
    if x.n == y.n:
        return x, y
    grow = _grow_by_duplication if strategy == "duplicate" else _grow_by_subdivision
    if x.n < y.n:
        return grow(x, y.n), y
    return x, grow(y, x.n)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-sampled polygon motion: times (T,), frames (T, n, p)."""

    times: np.ndarray
    frames: np.ndarray
    velocities: np.ndarray | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        frames = np.asarray(self.frames, dtype=float)
        if times.ndim != 1 or frames.shape[0] != times.shape[0]:
            raise DomainError("times and frames must agree in length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return self.times.shape[0]

    def polygon(self, index: int) -> Polygon:
        return Polygon(self.frames[index])
