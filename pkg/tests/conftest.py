"""Shared fixtures for the polyflow test suite."""

import numpy as np
import pytest

from polyflow.geometry import Polygon
from polyflow.spectral import fourier_matrix

# Irregular pentagon whose shape lives in modes 2 and 3.  The dominant pair
# (modes 1 and 4) carries only a small coefficient, so damped flows started
# here shrink well below 1e-6 by t = 30 even at the slowest rate.
PENTAGON_SPECTRUM = np.array(
    [0.1 + 0.0j, 0.004 - 0.003j, 0.55 + 0.25j, -0.35 + 0.45j, 0.008 + 0.005j]
)

# Source/target pair for curvature-difference runs: the difference spectrum
# is real and positive in every mode and small on the dominant pair, which
# makes the sup distance a sum of positive decaying exponentials (monotone)
# and pushes it below 1e-6 by t = 25.
YAU_DIFFERENCE = np.array([1.5, 0.003, 0.7, 0.7, 0.003])


def spectrum_polygon(alpha):
    """Planar polygon with the given complex mode coefficients."""
    alpha = np.asarray(alpha, dtype=complex)
    return Polygon.from_complex(fourier_matrix(len(alpha)) @ alpha)


def dense_operator(n, m):
    """(-1)^(m+1) M^m as an explicit dense matrix, built independently."""
    band = -2.0 * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)
    band[0, n - 1] += 1.0
    band[n - 1, 0] += 1.0
    power = np.linalg.matrix_power(band, m)
    return -power if m % 2 == 0 else power


@pytest.fixture
def pentagon():
    return spectrum_polygon(PENTAGON_SPECTRUM)


@pytest.fixture
def yau_target():
    base = np.zeros(5, dtype=complex)
    base[1] = 5.0
    return spectrum_polygon(base)


@pytest.fixture
def yau_source():
    base = np.zeros(5, dtype=complex)
    base[1] = 5.0
    return spectrum_polygon(base + YAU_DIFFERENCE)


@pytest.fixture
def triangle():
    return Polygon(np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]))
