"""Polygon container, mode decomposition, affine maps, vertex reconciliation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PENTAGON_SPECTRUM, spectrum_polygon
from polyflow.errors import DimensionMismatchError, DomainError
from polyflow.geometry import (
    AffineMap,
    CodimSpectrum,
    Polygon,
    Trajectory,
    apply_affine,
    complex_spectrum,
    decompose,
    planar_spectrum,
    reconcile_vertex_counts,
    reconstruct,
    sup_distance,
)
from polyflow.spectral import basis_polygon, dft


def test_polygon_validation():
    with pytest.raises(DomainError):
        Polygon(np.zeros((2, 2)))
    with pytest.raises(DomainError):
        Polygon(np.zeros((4, 1)))
    with pytest.raises(DomainError):
        Polygon(np.array([[0.0, np.nan], [1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        Polygon(np.zeros(6))


def test_polygon_is_immutable(pentagon):
    with pytest.raises(ValueError):
        pentagon.vertices[0, 0] = 99.0


def test_complex_views(pentagon):
    z = pentagon.as_complex()
    again = Polygon.from_complex(z)
    np.testing.assert_array_equal(again.vertices, pentagon.vertices)
    solid = Polygon(np.zeros((4, 3)))
    with pytest.raises(DimensionMismatchError):
        solid.as_complex()


def test_centroid_diameter_point(triangle):
    np.testing.assert_allclose(triangle.centroid(), [4.0 / 3.0, 1.0])
    assert triangle.diameter() == pytest.approx(5.0)
    assert not triangle.is_point()
    dot = Polygon(np.ones((5, 2)) * 3.25)
    assert dot.is_point()
    assert dot.diameter() == 0.0


def test_translated(triangle):
    moved = triangle.translated([1.0, -2.0])
    np.testing.assert_array_equal(moved.vertices, triangle.vertices + [1.0, -2.0])


@given(
    n=st.integers(min_value=3, max_value=10),
    p=st.integers(min_value=2, max_value=4),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(deadline=None, max_examples=30)
def test_decompose_reconstruct_roundtrip(n, p, seed):
    rng = np.random.default_rng(seed)
    poly = Polygon(rng.standard_normal((n, p)))
    spec = decompose(poly)
    back = reconstruct(spec)
    np.testing.assert_allclose(back.vertices, poly.vertices, atol=1e-10)


def test_complex_spectrum_matches_dft(pentagon):
    spec = decompose(pentagon)
    np.testing.assert_allclose(complex_spectrum(spec), dft(pentagon.as_complex()), atol=1e-12)
    np.testing.assert_allclose(planar_spectrum(pentagon), PENTAGON_SPECTRUM, atol=1e-12)


def test_embedded_planar_polygon_has_zero_third_column(pentagon):
    lifted = Polygon(np.column_stack([pentagon.vertices, np.zeros(5)]))
    spec = decompose(lifted)
    assert np.abs(spec.blocks[:, :, 2]).max() < 1e-12
    flat = decompose(pentagon)
    np.testing.assert_allclose(spec.blocks[:, :, :2], flat.blocks, atol=1e-12)


def test_codim_spectrum_validation():
    blocks = np.zeros((3, 2, 2))
    blocks[0, 1, 0] = 1.0  # sine row of mode 0 must vanish
    with pytest.raises(DomainError):
        CodimSpectrum(4, blocks)
    with pytest.raises(DomainError):
        CodimSpectrum(4, np.zeros((2, 2, 2)))


def test_rotation_is_orthogonal_and_counterclockwise():
    rot = AffineMap.rotation(0.3)
    np.testing.assert_allclose(rot.linear @ rot.linear.T, np.eye(2), atol=1e-12)
    square = spectrum_polygon([0.0, 1.0, 0.0, 0.0])
    turned = rot(square)
    np.testing.assert_allclose(
        turned.as_complex(), np.exp(0.3j) * square.as_complex(), atol=1e-12
    )


def test_affine_map_composition(triangle):
    mapping = AffineMap(np.array([[2.0, 0.0], [0.5, 1.0]]), np.array([1.0, -1.0]))
    moved = apply_affine(mapping, triangle)
    np.testing.assert_allclose(
        moved.vertices, triangle.vertices @ mapping.linear + mapping.translation
    )
    with pytest.raises(DimensionMismatchError):
        mapping(Polygon(np.zeros((3, 3))))
    with pytest.raises(DomainError):
        AffineMap.rotation(0.1, p=3, axes=(2, 1))


def test_sup_distance(pentagon):
    assert sup_distance(pentagon, pentagon) == 0.0
    moved = pentagon.translated([0.0, 0.25])
    assert sup_distance(pentagon, moved) == pytest.approx(0.25)
    with pytest.raises(DimensionMismatchError):
        sup_distance(pentagon, Polygon(np.zeros((4, 2))))


def test_duplicate_growth_spreads_copies_evenly(triangle):
    partner5 = Polygon(np.zeros((5, 2)) + np.arange(5)[:, None])
    grown, same = reconcile_vertex_counts(triangle, partner5)
    assert same is partner5
    v = triangle.vertices
    np.testing.assert_array_equal(grown.vertices, np.array([v[0], v[0], v[1], v[1], v[2]]))

    partner7 = Polygon(np.zeros((7, 2)) + np.arange(7)[:, None])
    grown7, _ = reconcile_vertex_counts(triangle, partner7)
    np.testing.assert_array_equal(
        grown7.vertices, np.array([v[0], v[0], v[0], v[1], v[1], v[2], v[2]])
    )


def test_subdivision_splits_longest_edges_first(triangle):
    partner5 = Polygon(np.zeros((5, 2)) + np.arange(5)[:, None])
    grown, _ = reconcile_vertex_counts(triangle, partner5, strategy="subdivide")
    expected = np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 0.0], [2.0, 1.5], [0.0, 3.0]])
    np.testing.assert_allclose(grown.vertices, expected, atol=1e-12)

    partner7 = Polygon(np.zeros((7, 2)) + np.arange(7)[:, None])
    grown7, _ = reconcile_vertex_counts(triangle, partner7, strategy="subdivide")
    expected7 = np.array(
        [
            [0.0, 0.0],
            [2.0, 0.0],
            [4.0, 0.0],
            [8.0 / 3.0, 1.0],
            [4.0 / 3.0, 2.0],
            [0.0, 3.0],
            [0.0, 1.5],
        ]
    )
    np.testing.assert_allclose(grown7.vertices, expected7, atol=1e-12)


def test_subdivision_keeps_trace(triangle):
    # every inserted vertex must lie on an edge of the original polygon
    partner = Polygon(np.zeros((11, 2)) + np.arange(11)[:, None])
    grown, _ = reconcile_vertex_counts(triangle, partner, strategy="subdivide")
    v = triangle.vertices
    edges = [(v[j], v[(j + 1) % 3]) for j in range(3)]
    for row in grown.vertices:
        on_some_edge = False
        for a, b in edges:
            d = b - a
            t = float(np.dot(row - a, d) / np.dot(d, d))
            if 0.0 <= t <= 1.0 and np.linalg.norm(a + t * d - row) < 1e-10:
                on_some_edge = True
                break
        assert on_some_edge


def test_reconcile_noop_and_errors(pentagon, triangle):
    a, b = reconcile_vertex_counts(pentagon, pentagon)
    assert a is pentagon and b is pentagon
    with pytest.raises(DomainError):
        reconcile_vertex_counts(pentagon, triangle, strategy="resample")
    with pytest.raises(DimensionMismatchError):
        reconcile_vertex_counts(pentagon, Polygon(np.zeros((3, 3))))


def test_reconcile_orientation_larger_first(triangle, pentagon):
    x, y = reconcile_vertex_counts(pentagon, triangle)
    assert x is pentagon
    assert y.n == 5


def test_trajectory_container():
    frames = np.random.default_rng(0).standard_normal((3, 4, 2))
    traj = Trajectory(np.array([0.0, 0.5, 1.0]), frames)
    assert len(traj) == 3
    assert traj.polygon(1).n == 4
    with pytest.raises(DomainError):
        Trajectory(np.array([0.0, 1.0]), frames)
