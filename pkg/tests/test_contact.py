import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactbundles import jets
from contactbundles.contact import (CoorientedAnnihilatorPoint, contact_sweep, moment_alpha,
                                    moment_equivariance_residual, moment_universal,
                                    orbit_two_form_identity, verify_contact, verify_invariance)
from contactbundles.errors import NotContact, NotInvariant
from contactbundles.forms import bordered_matrix
from contactbundles.geomcore import ellipsoid, euclidean, sphere
from contactbundles.liealg import (coordinate_torus_action, diagonal_circle_action, su2_action)
from contactbundles.models import darboux_form, standard_form, twisted_form, vertical_form


@pytest.fixture(scope="module")
def s3():
    S = sphere(3)
    return verify_contact(S, standard_form(2), S.sample(50, 0))


def test_darboux_and_vertical():
    R3 = euclidean(3)
    pts = np.random.default_rng(0).normal(size=(20, 3))
    C = verify_contact(R3, darboux_form(1), pts)
    assert np.isclose(C.min_abs_pfaffian, 1.0)
    with pytest.raises(NotContact) as info:
        verify_contact(R3, vertical_form(1), pts)
    assert info.value.witness is not None
    assert not contact_sweep(R3, vertical_form(1), pts).passed


def test_s5_floor():
    S = sphere(5)
    C = verify_contact(S, standard_form(3), S.sample(500, 1))
    # frozen: alpha(iz) = 2 and d alpha = 4 on each unit complex line of xi, so |Pf| = 2 * 4^2
    assert np.isclose(C.min_abs_pfaffian, 32.0, rtol=1e-9)
    p = S.sample(1, 1).points[0]
    B = bordered_matrix(C.alpha, p, S.tangent_frame(p).columns)
    assert np.isclose(np.sqrt(np.linalg.det(B)), 32.0, rtol=1e-9)


def test_invariance_examples():
    S3, S5 = sphere(3), sphere(5)
    C5 = verify_contact(S5, standard_form(3), S5.sample(20, 0))
    assert verify_invariance(C5, coordinate_torus_action(S5, 3)).max_residual <= 1e-8
    C3 = verify_contact(S3, standard_form(2), S3.sample(20, 0))
    assert verify_invariance(C3, su2_action(S3, 2)).max_residual <= 1e-8
    Ct = verify_contact(S3, twisted_form(2), S3.sample(20, 0))
    with pytest.raises(NotInvariant) as info:
        verify_invariance(Ct, coordinate_torus_action(S3, 2))
    assert info.value.value > 1e-3
    assert info.value.witness is not None and info.value.element is not None


def test_circle_moment_constant(s3):
    act = diagonal_circle_action(s3.manifold, 2)
    x0 = s3.verified_samples.points[0]
    ref = s3.alpha(x0, act.induced([1.0], x0))
    assert np.isclose(ref, 2.0)
    for x in s3.verified_samples.points:
        assert np.allclose(moment_alpha(s3, act, x), [ref], atol=1e-12)


def test_ellipsoid_moment_simplex():
    a = np.array([1.0, 2.0, 3.0])
    E = ellipsoid(a)
    C = verify_contact(E, standard_form(3), E.sample(100, 4))
    act = coordinate_torus_action(E, 3)
    T = np.array([moment_alpha(C, act, x) for x in C.verified_samples.points])
    assert np.all(T >= -1e-12)
    assert np.allclose(T @ a, 2.0, atol=1e-10)


def test_moment_vanishes_on_isotropy():
    S5 = sphere(5)
    C = verify_contact(S5, standard_form(3), S5.sample(5, 0))
    x = np.array([0, 0, 0, 0, 0.6, 0.8])
    for xi in np.eye(3):
        assert abs(moment_alpha(C, su2_action(S5, 3), x) @ xi) <= 1e-14


@given(st.floats(1e-3, 1e3))
def test_universal_moment_homogeneous(s):
    S = sphere(3)
    C = verify_contact(S, standard_form(2), S.sample(3, 0))
    act = su2_action(S, 2)
    x = C.verified_samples.points[1]
    base = moment_universal(C, act, CoorientedAnnihilatorPoint(x, 1.0))
    assert np.array_equal(base, moment_alpha(C, act, x))
    scaled = moment_universal(C, act, CoorientedAnnihilatorPoint(x, s))
    assert np.allclose(scaled, s * base, rtol=1e-14, atol=0)


def test_universal_image_is_open_ray(s3):
    act = diagonal_circle_action(s3.manifold, 2)
    vals = [moment_universal(s3, act, CoorientedAnnihilatorPoint(x, s))[0]
            for x in s3.verified_samples.points[:5] for s in np.geomspace(1e-3, 1e3, 25)]
    assert min(vals) > 0
    assert np.allclose(moment_universal(s3, act, CoorientedAnnihilatorPoint(
        s3.verified_samples.points[0], 2.0)), [4.0])
    with pytest.raises(ValueError):
        CoorientedAnnihilatorPoint(s3.verified_samples.points[0], 0.0)


def test_orbit_two_form_identity(rng):
    S = sphere(3)
    C = verify_contact(S, standard_form(2), S.sample(100, 2))
    act = su2_action(S, 2)
    for x in C.verified_samples.points:
        i, j = rng.choice(3, 2, replace=False)
        lhs, rhs = orbit_two_form_identity(C, act, x, np.eye(3)[i], np.eye(3)[j])
        assert abs(lhs - rhs) <= 1e-7
        lhs, rhs = orbit_two_form_identity(C, act, x, np.eye(3)[i], np.eye(3)[i])
        assert abs(lhs) <= 1e-12 and abs(rhs) <= 1e-12
    T = coordinate_torus_action(S, 2)
    lhs, rhs = orbit_two_form_identity(C, T, C.verified_samples.points[0], [1, 0], [0, 1])
    assert abs(lhs) <= 1e-12 and rhs == 0.0


def test_equivariance():
    S = sphere(5)
    C = verify_contact(S, standard_form(3), S.sample(10, 3))
    assert moment_equivariance_residual(C, su2_action(S, 3), C.verified_samples.points) <= 1e-8


def test_conformal_covariance():
    S = sphere(3)
    f = lambda x: 0.3 * x[0] - 0.2 * x[1] * x[2]  # noqa: E731
    alpha = standard_form(2)
    C = verify_contact(S, alpha, S.sample(20, 6))
    Cf = verify_contact(S, alpha.scaled(f), C.verified_samples)
    act = su2_action(S, 2)
    for x in C.verified_samples.points:
        lhs = moment_alpha(Cf, act, x)
        assert np.allclose(lhs, np.exp(f(x)) * moment_alpha(C, act, x), atol=1e-8)
    assert jets.value_of(f(np.zeros(4))) == 0.0
