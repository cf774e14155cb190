"""Eigenvalue formulas, the circulant operator, and discrete Fourier tools."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_operator
from polyflow.errors import DimensionMismatchError, DomainError
from polyflow.spectral import (
    CirculantOperator,
    basis_polygon,
    cosine_norm_sq,
    dft,
    eigenvalue,
    eigenvalues,
    fourier_matrix,
    idft,
    real_basis,
    second_difference,
    sine_norm_sq,
)


@pytest.mark.parametrize("n", [3, 5, 8, 12])
@pytest.mark.parametrize("m", [1, 2, 4])
def test_eigenvalues_match_dense_operator(n, m):
    dense = dense_operator(n, m)
    got = np.sort(eigenvalues(n, m))
    want = np.sort(np.linalg.eigvalsh(dense))
    np.testing.assert_allclose(got, want, atol=1e-9)


@pytest.mark.parametrize("n", [4, 7, 11])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_basis_polygons_are_eigenvectors(n, m):
    op = CirculantOperator(n, m)
    for k in range(n):
        pk = basis_polygon(n, k)
        residual = np.abs(op.apply(pk) - eigenvalue(n, m, k) * pk).max()
        assert residual < 1e-10


@pytest.mark.parametrize(
    "n, m, k, expected",
    [
        (4, 1, 1, -2.0),
        (4, 1, 2, -4.0),
        (5, 1, 1, -1.3819660112501051),
        (5, 1, 2, -3.618033988749895),
        (6, 1, 1, -0.9999999999999998),
        (5, 2, 1, -1.9098300562505255),
        (8, 3, 4, -64.0),
    ],
)
def test_frozen_eigenvalues(n, m, k, expected):
    assert eigenvalue(n, m, k) == pytest.approx(expected, abs=1e-13)


def test_exact_special_values():
    # k = n/2 gives sin = 1 exactly, so powers of -4 come out exact
    assert eigenvalue(4, 2, 2) == -16.0
    assert eigenvalue(6, 1, 3) == -4.0
    for n in (3, 5, 9):
        assert eigenvalue(n, 2, 0) == 0.0


@pytest.mark.parametrize("n", [5, 6, 9, 12])
@pytest.mark.parametrize("m", [1, 3])
def test_conjugate_modes_pair_bitwise(n, m):
    # k and n-k must agree exactly, not just to rounding
    for k in range(1, n):
        assert eigenvalue(n, m, k) == eigenvalue(n, m, n - k)


@pytest.mark.parametrize("n", [3, 4, 7, 10, 16])
def test_trace_identity(n):
    assert abs(eigenvalues(n, 1).sum() + 2.0 * n) < 1e-9
    assert abs(np.trace(dense_operator(n, 1)) + 2.0 * n) < 1e-12


@pytest.mark.parametrize("n, m", [(5, 1), (8, 3), (13, 2)])
def test_mode_one_decays_slowest(n, m):
    lams = eigenvalues(n, m)
    assert lams[1] < 0.0
    for k in range(2, n // 2 + 1):
        assert lams[k] < lams[1]


def test_second_difference_is_mode_multiplication():
    n = 7
    for k in range(n):
        pk = basis_polygon(n, k)
        lam = eigenvalue(n, 1, k)
        np.testing.assert_allclose(second_difference(pk), lam * pk, atol=1e-12)


def test_second_difference_axis():
    rng = np.random.default_rng(11)
    x = rng.standard_normal((3, 6, 2))
    rolled = second_difference(x, axis=1)
    for i in range(3):
        np.testing.assert_array_equal(rolled[i], second_difference(x[i]))


@given(
    n=st.integers(min_value=3, max_value=12),
    m=st.integers(min_value=1, max_value=4),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(deadline=None, max_examples=30)
def test_stencil_and_mode_paths_agree(n, m, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 3))
    op = CirculantOperator(n, m)
    np.testing.assert_allclose(op.apply(x), op.apply_via_modes(x), atol=1e-10)


def test_operator_matches_dense_matrix():
    n, m = 6, 3
    rng = np.random.default_rng(3)
    x = rng.standard_normal((n, 2))
    np.testing.assert_allclose(
        CirculantOperator(n, m).apply(x), dense_operator(n, m) @ x, atol=1e-10
    )


def test_operator_sign_alternates():
    assert CirculantOperator(4, 1).sign == 1
    assert CirculantOperator(4, 2).sign == -1
    assert CirculantOperator(4, 3).sign == 1


def test_fourier_matrix_symmetric_and_scaled_unitary():
    n = 8
    F = fourier_matrix(n)
    np.testing.assert_array_equal(F, F.T)
    np.testing.assert_allclose(F.conj().T @ F, n * np.eye(n), atol=1e-12)


@given(
    n=st.integers(min_value=3, max_value=16),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(deadline=None, max_examples=30)
def test_dft_roundtrip(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    np.testing.assert_allclose(idft(dft(z)), z, atol=1e-12)
    np.testing.assert_allclose(dft(idft(z)), z, atol=1e-12)


def test_dft_of_basis_polygon_is_unit_spike():
    n = 9
    for k in (0, 2, 7):
        alpha = dft(basis_polygon(n, k))
        spike = np.zeros(n, dtype=complex)
        spike[k] = 1.0
        np.testing.assert_allclose(alpha, spike, atol=1e-12)


def test_real_basis_zero_rows_are_exact():
    n = 6
    _, s0 = real_basis(n, 0)
    _, s3 = real_basis(n, 3)
    assert not s0.any()
    assert not s3.any()
    c0, _ = real_basis(n, 0)
    np.testing.assert_array_equal(c0, np.ones(n))


def test_real_basis_norms():
    n = 6
    assert cosine_norm_sq(n, 0) == pytest.approx(n)
    assert cosine_norm_sq(n, 3) == pytest.approx(n)
    assert sine_norm_sq(n, 3) == pytest.approx(0.0)
    for k in (1, 2):
        c, s = real_basis(n, k)
        assert c @ c == pytest.approx(cosine_norm_sq(n, k))
        assert s @ s == pytest.approx(sine_norm_sq(n, k))
        assert cosine_norm_sq(n, k) == pytest.approx(n / 2)
        assert abs(c @ s) < 1e-12


@pytest.mark.parametrize(
    "call",
    [
        lambda: eigenvalue(2, 1, 0),
        lambda: eigenvalue(5, 0, 1),
        lambda: eigenvalue(5, 1, -1),
        lambda: eigenvalue(5, 1, 5),
        lambda: CirculantOperator(2, 1),
        lambda: basis_polygon(4, 9),
        lambda: real_basis(3, 4),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_apply_rejects_wrong_length():
    with pytest.raises(DimensionMismatchError):
        CirculantOperator(5, 1).apply(np.zeros((4, 2)))
