import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactbundles.errors import NonConvergence, RankDeficient
from contactbundles.geomcore import (EmbeddedManifold, default_threads, ellipsoid, euclidean,
                                     pmap, point_manifold, product, sphere)


def test_sphere_retraction_radial():
    assert np.allclose(sphere(2).retract([2.0, 0, 0]), [1.0, 0, 0], atol=1e-12)


def test_point_on_manifold_is_fixed():
    S = sphere(3)
    p = S.sample(1, 0).points[0]
    assert np.array_equal(S.retract(p), p)


def test_ellipsoid_retraction_axial():
    E = ellipsoid([1.0, 2.0])
    assert np.allclose(E.retract([0, 0, 1.0, 0]), [0, 0, 1 / np.sqrt(2), 0], atol=1e-12)


def test_north_pole_frame():
    F = sphere(2).tangent_frame([0, 0, 1.0]).columns
    assert F.shape == (3, 2)
    assert np.allclose(F[2], 0, atol=1e-14)
    assert np.allclose(F.T @ F, np.eye(2), atol=1e-12)


def test_frames_annihilated_on_s3():
    S = sphere(3)
    for p in S.sample(100, 3).points:
        F = S.tangent_frame(p).columns
        _, J = S.constraint_jacobian(p)
        assert np.max(np.abs(J @ F)) <= 1e-8
        assert np.allclose(F.T @ F, np.eye(3), atol=1e-10)


@pytest.mark.parametrize("a", [[1.0], [1.0, 2.0], [1.0, 2.0, 3.0]])
def test_ellipsoid_frame_dimension(a):
    E = ellipsoid(a)
    p = E.sample(1, 0).points[0]
    assert E.tangent_frame(p).dim == 2 * len(a) - 1


def test_sampling_contracts():
    S = sphere(3)
    A = S.sample(10, 42)
    assert A.count == 10
    assert np.all(np.abs(np.linalg.norm(A.points, axis=1) - 1) <= 1e-10)
    B = S.sample(10, 42)
    assert A.points.tobytes() == B.points.tobytes()
    E = ellipsoid([1.0, 2.0, 3.0])
    P = E.sample(1000, 7).points
    w = np.repeat([1.0, 2.0, 3.0], 2)
    assert np.all(np.abs((P * P) @ w - 1) <= 1e-10)


def test_sample_count_must_be_positive():
    with pytest.raises(ValueError):
        sphere(2).sample(0, 1)


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=4, max_size=4).filter(
    lambda v: np.linalg.norm(v) > 0.1))
def test_retract_idempotent(q):
    S = sphere(3)
    p = S.retract(q)
    assert np.allclose(S.retract(p), p, atol=1e-10)
    assert S.contains(p)


def test_rank_deficiency_detected():
    S = sphere(2)
    with pytest.raises(RankDeficient):
        S.retract([0.0, 0.0, 0.0])


def test_nonconvergence_reported():
    M = EmbeddedManifold(1, lambda x: x[0] * x[0] + 1.0, 1, name="empty", max_iter=5)
    with pytest.raises(NonConvergence):
        M.retract([0.3])


def test_product_and_point():
    P = product(sphere(1), euclidean(2))
    assert P.dim == 3 and P.ambient_dim == 4
    p = P.sample(1, 0).points[0]
    a, b = P.blocks.split(p)
    assert np.isclose(a @ a, 1.0)
    pt = point_manifold()
    assert pt.dim == 0 and np.allclose(pt.retract([0.4]), [0.0])


def test_project_smooth_and_tight():
    S = sphere(3)
    q = np.array([1.0, 0.5, -0.2, 0.1])
    p = S.project(q)
    assert abs(p @ p - 1.0) <= 1e-15


def test_pmap_ordered_and_thread_independent(monkeypatch):
    items = list(range(50))
    assert pmap(lambda i: i * i, items, 1) == pmap(lambda i: i * i, items, 8)
    monkeypatch.setenv("CONTACTBUNDLES_THREADS", "4")
    assert default_threads() == 4
    monkeypatch.setenv("CONTACTBUNDLES_THREADS", "junk")
    assert default_threads() == 1
