import numpy as np
import pytest

from contactbundles import kcontact as kc
from contactbundles.contact import ContactStructure, verify_contact
from contactbundles.errors import PolarBreakdown
from contactbundles.geomcore import ellipsoid, euclidean, sphere
from contactbundles.liealg import coordinate_torus_action
from contactbundles.models import (darboux_form, fiber_product_bundle, half_flat_torus_bundle,
                                   hopf_bundle, standard_form)


def identities(r):
    return max(r["reeb_unit"], r["reeb_normal"], r["alpha_dual"], r["compat"], r["J_squared"],
               r["J_isometry"])


@pytest.fixture(scope="module")
def s3():
    S = sphere(3)
    return verify_contact(S, standard_form(2), S.sample(500, 0))


@pytest.fixture(scope="module")
def yamazaki_n1():
    return kc.build_yamazaki_scenario(hopf_bundle(), [1.0, 1.0], samples=10, seed=3)


@pytest.fixture(scope="module")
def yamazaki_n2():
    return kc.build_yamazaki_scenario(fiber_product_bundle(), [1.0, 2.0], samples=10, seed=3)


def test_darboux_metric():
    R3 = euclidean(3)
    C = verify_contact(R3, darboux_form(1), np.random.default_rng(0).normal(size=(10, 3)))
    g = kc.build_compatible_metric(C)
    for x in C.verified_samples.points:
        assert np.isclose(np.eye(3)[2] @ g.at(x) @ np.eye(3)[2], 1.0, atol=1e-12)
        r = g.invariant_residuals(x)
        assert r["compat"] <= 1e-10
        assert identities(r) <= 1e-9 and r["min_eig"] > 0


def test_round_sphere_metric(s3):
    g = kc.build_compatible_metric(s3)
    for x in s3.verified_samples.points:
        r = g.invariant_residuals(x)
        assert identities(r) <= 1e-8
        assert r["min_eig"] > 0


def test_two_backgrounds_both_compatible(s3):
    g1 = kc.build_compatible_metric(s3)
    g2 = kc.build_compatible_metric(s3, background=lambda x: np.diag([3.0, 1.0, 2.0, 1.0]))
    for x in s3.verified_samples.points[:50]:
        assert identities(g1.invariant_residuals(x)) <= 1e-8
        assert identities(g2.invariant_residuals(x)) <= 1e-8


def test_degenerate_background(s3):
    g = kc.build_compatible_metric(s3, background=lambda x: np.zeros((4, 4)))
    with pytest.raises(PolarBreakdown):
        g.at(s3.verified_samples.points[0])


def test_killing_examples(s3):
    g = kc.build_compatible_metric(s3)
    r, _ = kc.killing_residual(g, s3.verified_samples.points[:3], h=1e-3)
    assert r <= 1e-5
    R3 = euclidean(3)
    C = verify_contact(R3, darboux_form(1), np.array([[0.3, -0.5, 1.0]]))
    r, _ = kc.killing_residual(kc.build_compatible_metric(C), C.verified_samples.points)
    assert r <= 1e-8
    bad = kc.build_compatible_metric(s3, background=lambda x: np.diag([3.0, 1.0, 1.0, 1.0]))
    r, w = kc.killing_residual(bad, s3.verified_samples.points[:3])
    assert r > 0.1 and w is not None


def test_positivity():
    a = np.array([1.0, 2.0, 3.0])
    E = ellipsoid(a)
    C = verify_contact(E, standard_form(3), E.sample(200, 1))
    act = coordinate_torus_action(E, 3)
    pos = kc.positivity_check(C, act, a / 2)
    # frozen: <Psi, a/2> = sum a_j |z_j|^2 = 1 on E_a
    assert pos.passed and np.isclose(pos.minimum, 1.0)
    neg = kc.positivity_check(C, act, -a / 2)
    assert not neg.passed and neg.witness is not None
    assert not kc.positivity_check(C, act, np.zeros(3)).passed
    f = lambda y: 0.3 * (y[0] * y[0] + y[1] * y[1]) - 0.2 * (y[4] * y[4] + y[5] * y[5])  # noqa
    Cf = ContactStructure(E, C.alpha.scaled(f), C.verified_samples, 0.0, 0.0)
    for X in (a / 2, -a / 2, np.array([1.0, -1.0, 0.0])):
        assert kc.positivity_check(C, act, X).passed == kc.positivity_check(Cf, act, X).passed


def test_yamazaki_n1(yamazaki_n1):
    Y = yamazaki_n1
    assert Y.fatness.passed and Y.contact.passed
    X = kc.total_samples(Y.assoc, 10, 5, kc.fiber_samples(Y.fiber.manifold, 10, 6))
    assert kc.reeb_verticality(Y.assoc, X) <= 1e-7
    r, _ = kc.killing_residual(Y.metric, X[:2], h=1e-3)
    assert r <= 1e-4
    for x in X:
        assert identities(Y.metric.invariant_residuals(x)) <= 1e-8


def test_yamazaki_n2(yamazaki_n2):
    Y = yamazaki_n2
    assert Y.fatness.passed and Y.contact.passed
    # the moment image is the segment {t >= 0, t_1 + 2 t_2 = 2}
    assert np.all(Y.moment_samples >= -1e-12)
    assert np.allclose(Y.moment_samples @ [1.0, 2.0], 2.0, atol=1e-10)
    X = kc.total_samples(Y.assoc, 6, 5, kc.fiber_samples(Y.fiber.manifold, 6, 6))
    assert kc.reeb_verticality(Y.assoc, X) <= 1e-7
    r, _ = kc.killing_residual(Y.metric, X[:2], h=1e-3)
    assert r <= 1e-4
    p = Y.assoc.split(X[0])[0]
    d, i, j = kc.fiber_dependence(Y.assoc, Y.metric, p, kc.fiber_samples(Y.fiber.manifold, 6, 7))
    assert d > 1e-3 and i != j


def test_half_flat_control_fails_at_matching_witnesses():
    Y = kc.build_yamazaki_scenario(half_flat_torus_bundle(), [1.0, 2.0], samples=10, seed=3,
                                   raise_on_fail=False)
    assert not Y.fatness.passed and not Y.contact.passed
    f = Y.assoc.split(Y.contact.witness)[1]
    from contactbundles.contact import moment_alpha
    psi = moment_alpha(Y.fiber, Y.fiber_action, f)
    mu = Y.fatness.witness_mu
    assert abs(mu @ psi) >= (1 - 1e-9) * np.linalg.norm(mu) * np.linalg.norm(psi)


def test_ellipsoid_vertices_on_simplex_corners():
    E = ellipsoid([1.0, 2.0])
    F = kc.fiber_samples(E, 3, 0)
    assert F.shape == (5, 4)
    assert np.allclose(F[0], [1, 0, 0, 0]) and np.allclose(F[1], [0, 0, 1 / np.sqrt(2), 0])
