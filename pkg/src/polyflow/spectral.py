"""Cyclic second-difference operator and its discrete Fourier diagonalization.

Planar polygons are complex vectors in C^n; higher-codimension polygons are
real (n, p) arrays.  The operator acts on the cyclic vertex index.  All
transforms are direct O(n^2) summations: vertex counts are tiny and the exact
conjugate-symmetry structure matters more than asymptotic speed, so no
fast-transform library is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError


def _validate_n(n: int) -> None:
    if int(n) != n or n < 3:
        raise DomainError(f"vertex count must be an integer >= 3, got {n!r}")


def _validate_order(m: int) -> None:
    if int(m) != m or m < 1:
        raise DomainError(f"operator order must be an integer >= 1, got {m!r}")


def _validate_mode(n: int, k: int) -> None:
    if int(k) != k or not 0 <= k < n:
        raise DomainError(f"mode index must lie in [0, {n - 1}], got {k!r}")


def eigenvalue(n: int, m: int, k: int) -> float:
    """Eigenvalue of the signed m-fold second-difference operator at mode k.

    Equals -(4 sin^2(pi k / n))^m; modes k and n-k share a value.  The sine is
    taken at the canonical index min(k, n-k) so the pairing holds bit-for-bit.
    """
    _validate_n(n)
    _validate_order(m)
    _validate_mode(n, k)
    kc = min(k, n - k)
    if kc == 0:
        return 0.0
    s = math.sin(math.pi * kc / n)
    return -((4.0 * s * s) ** m)


def eigenvalues(n: int, m: int) -> np.ndarray:
    """All n eigenvalues, indexed by mode."""
    return np.array([eigenvalue(n, m, k) for k in range(n)])


def basis_polygon(n: int, k: int) -> np.ndarray:
    """Complex n-gon (1, w^k, ..., w^{(n-1)k}) with w = exp(2 pi i / n)."""
    _validate_n(n)
    _validate_mode(n, k)
    j = np.arange(n)
    return np.exp(2j * np.pi * k * j / n)


def real_basis(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Sampled cosine/sine pair (c_k, s_k) with c_k[j] = cos(2 pi j k / n).

    Valid for 0 <= k <= n//2.  The sine vector is identically zero for k = 0
    and, when n is even, for k = n/2; those zeros are exact.
    """
    _validate_n(n)
    if int(k) != k or not 0 <= k <= n // 2:
        raise DomainError(f"real mode index must lie in [0, {n // 2}], got {k!r}")
    ang = 2.0 * np.pi * k * np.arange(n) / n
    c = np.cos(ang)
    if k == 0 or 2 * k == n:
        s = np.zeros(n)
    else:
        s = np.sin(ang)
    return c, s


def cosine_norm_sq(n: int, k: int) -> float:
    """Exact squared norm of c_k: n at k = 0 and k = n/2, else n/2."""
    if k == 0 or 2 * k == n:
        return float(n)
    return n / 2.0


def sine_norm_sq(n: int, k: int) -> float:
    """Exact squared norm of s_k: zero where s_k vanishes, else n/2."""
    if k == 0 or 2 * k == n:
        return 0.0
    return n / 2.0


def second_difference(x: np.ndarray, axis: int = 0) -> np.ndarray:
    """Cyclic second difference x_{j-1} - 2 x_j + x_{j+1} along an axis."""
    return np.roll(x, -1, axis=axis) + np.roll(x, 1, axis=axis) - 2.0 * x


@dataclass(frozen=True)
class CirculantOperator:
    """Signed m-th power of the cyclic second-difference matrix.

    Application is m stencil sweeps followed by the sign (-1)^{m+1}; the dense
    matrix is never formed.
    """

    n: int
    m: int

    def __post_init__(self):
        _validate_n(self.n)
        _validate_order(self.m)

    @property
    def sign(self) -> float:
        return 1.0 if self.m % 2 == 1 else -1.0

    def eigenvalues(self) -> np.ndarray:
        return eigenvalues(self.n, self.m)

    def apply(self, x, axis: int = 0):
        """Apply to a polygon or an ndarray of vertex values.

        Accepts anything with an (n, p) ``vertices`` attribute (returned as the
        same type), a complex n-vector, or an ndarray whose ``axis`` indexes
        vertices.
        """
        if hasattr(x, "vertices"):
            return x.__class__(self._apply_array(x.vertices, 0))
        return self._apply_array(np.asarray(x), axis)

    def _apply_array(self, arr: np.ndarray, axis: int) -> np.ndarray:
        if arr.shape[axis] != self.n:
            raise DimensionMismatchError(
                f"operator built for n={self.n}, polygon has {arr.shape[axis]} vertices")
        out = arr
        for _ in range(self.m):
            out = second_difference(out, axis=axis)
        return self.sign * out

    def apply_via_modes(self, x, axis: int = 0):
        """Diagonal application through the mode basis (cross-check path)."""
        if hasattr(x, "vertices"):
            return x.__class__(self.apply_via_modes(x.vertices, axis=0))
        arr = np.asarray(x)
        if arr.shape[axis] != self.n:
            raise DimensionMismatchError(
                f"operator built for n={self.n}, polygon has {arr.shape[axis]} vertices")
        lam = self.eigenvalues()
        moved = np.moveaxis(arr, axis, 0)
        flat = moved.reshape(self.n, -1)
        out = np.empty_like(flat, dtype=complex)
        for col in range(flat.shape[1]):
            out[:, col] = idft(lam * dft(flat[:, col]))
        out = out.reshape(moved.shape)
        if not np.iscomplexobj(arr):
            out = out.real
        return np.moveaxis(out, 0, axis).astype(arr.dtype, copy=False)


def fourier_matrix(n: int) -> np.ndarray:
    """Symmetric matrix F[j, k] = w^{jk}; the inverse transform is F @ alpha."""
    _validate_n(n)
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n)


def dft(z: np.ndarray) -> np.ndarray:
    """Mode coefficients alpha_k = (1/n) sum_j z_j w^{-jk} of a complex polygon."""
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1:
        raise DimensionMismatchError("dft expects a one-dimensional complex vector")
    n = z.shape[0]
    return fourier_matrix(n).conj() @ z / n


def idft(alpha: np.ndarray) -> np.ndarray:
    """Vertex values sum_k alpha_k w^{jk} from mode coefficients."""
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.ndim != 1:
        raise DimensionMismatchError("idft expects a one-dimensional coefficient vector")
    return fourier_matrix(alpha.shape[0]) @ alpha
