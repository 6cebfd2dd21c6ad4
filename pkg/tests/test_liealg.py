import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactbundles.forms import lie_bracket
from contactbundles.geomcore import ellipsoid, sphere
from contactbundles.liealg import (complex_to_real, coadjoint_orbit_map, coordinate_torus_action,
                                   diagonal_circle_action, exp, induced_vector_field,
                                   isotropy_algebra, product_group, real_rep, real_to_complex,
                                   su2, su2_action, torus)
from contactbundles.models import _rot

GROUPS = [torus(1), torus(3), su2(), product_group(su2(), torus(1))]


def test_exp_examples():
    T = torus(1)
    assert np.allclose(exp(T, [1.0], 2 * np.pi), np.eye(1), atol=1e-12)
    G = su2()
    # X_3 = -i sigma_3 / 2; the sign of the generator does not matter at t = 2 pi
    assert np.allclose(exp(G, [0, 0, 1.0], 2 * np.pi), -np.eye(2), atol=1e-12)


@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 10 ** 6))
def test_one_parameter_subgroup(s, t, seed):
    G = su2()
    xi = np.random.default_rng(seed).normal(size=3)
    assert np.allclose(G.exp(xi, s) @ G.exp(xi, t), G.exp(xi, s + t), atol=1e-10)


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_exp_lands_in_group(G, rng):
    for _ in range(10):
        g = G.random_element(rng)
        assert np.allclose(g.conj().T @ g, np.eye(G.matrix_dim), atol=1e-12)
    if G.name == "SU(2)":
        assert np.isclose(np.linalg.det(G.random_element(rng)), 1.0, atol=1e-12)


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_structure_constants(G):
    c = G.structure_constants
    d = G.dim
    for i in range(d):
        for j in range(d):
            Xi, Xj = G.basis[i], G.basis[j]
            assert np.allclose(Xi @ Xj - Xj @ Xi, G.matrix(c[:, i, j]), atol=1e-12)
    assert np.allclose(c, -np.transpose(c, (0, 2, 1)), atol=1e-14)
    E = np.eye(d)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                a, b, e = E[i], E[j], E[k]
                jac = (G.bracket(a, G.bracket(b, e)) + G.bracket(b, G.bracket(e, a))
                       + G.bracket(e, G.bracket(a, b)))
                assert np.max(np.abs(jac)) <= 1e-12
                ad_inv = G.bracket(e, a) @ G.inner @ b + a @ G.inner @ G.bracket(e, b)
                assert abs(ad_inv) <= 1e-10


def test_su2_inner_is_negative_killing():
    G = su2()
    assert np.allclose(G.inner, -G.killing_form())
    assert np.allclose(G.inner, 2 * np.eye(3))
    assert np.allclose(G.bracket([1, 0, 0], [0, 1, 0]), [0, 0, 1])


def test_action_axioms(rng):
    S5 = sphere(5)
    for act in (su2_action(S5, 3), coordinate_torus_action(S5, 3), diagonal_circle_action(S5, 3)):
        G = act.group
        x = S5.sample(1, 3).points[0]
        g, h = G.random_element(rng), G.random_element(rng)
        assert np.allclose(act.act(G.identity(), x), x)
        assert np.allclose(act.act(g @ h, x), act.act(g, act.act(h, x)), atol=1e-10)
        assert S5.contains(act.act(g, x))


def test_induced_vector_field_examples(rng):
    S3 = sphere(3)
    circ = diagonal_circle_action(S3, 2)
    T2 = coordinate_torus_action(S3, 2)
    for x in S3.sample(10, 0).points:
        assert np.allclose(induced_vector_field(circ, [1.0], x), _rot(2) @ x, atol=1e-13)
        z = real_to_complex(x)
        assert np.allclose(induced_vector_field(T2, [1.0, 0.0], x),
                           complex_to_real([1j * z[0], 0.0]), atol=1e-13)
        xi = rng.normal(size=1)
        assert np.allclose(circ.induced(xi, x), induced_vector_field(circ, xi, x), atol=1e-13)


def test_induced_field_vanishes_on_isotropy():
    S5 = sphere(5)
    act = su2_action(S5, 3)
    x = np.array([0, 0, 0, 0, 1.0, 0])
    for xi in np.eye(3):
        assert np.allclose(induced_vector_field(act, xi, x), 0.0)


def test_bracket_antihomomorphism(rng):
    E = ellipsoid([1.0, 2.0, 3.0])
    act = su2_action(E, 3)
    G = act.group
    for x in E.sample(10, 9).points:
        a, b = rng.normal(size=(2, 3))
        lhs = lie_bracket(act.field(a), act.field(b), x)
        rhs = -act.induced(G.bracket(a, b), x)
        assert np.allclose(lhs, rhs, atol=1e-7)


def test_isotropy_examples():
    T = torus(3)
    assert isotropy_algebra(T, [1.0, -2.0, 0.5]).shape == (3, 3)
    G = su2()
    K = isotropy_algebra(G, [0, 0, 1.0])
    assert K.shape == (3, 1)
    assert np.allclose(abs(K[:, 0]), [0, 0, 1.0])
    assert isotropy_algebra(G, np.zeros(3)).shape == (3, 3)


def test_coadjoint_examples(rng):
    G = su2()
    mu = rng.normal(size=3)
    assert np.allclose(coadjoint_orbit_map(G, G.identity(), mu), mu)
    T = torus(2)
    assert np.allclose(coadjoint_orbit_map(T, T.random_element(rng), [1.0, 2.0]), [1.0, 2.0])
    for _ in range(10):
        g = G.random_element(rng)
        nu = coadjoint_orbit_map(G, g, mu)
        assert np.isclose(G.dual_norm(nu), G.dual_norm(mu), rtol=1e-12)
        X = rng.normal(size=3)
        assert np.isclose(nu @ X, mu @ (G.Ad(G.inverse(g)) @ X), atol=1e-10)


def test_real_rep_is_homomorphism(rng):
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    B = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert np.allclose(real_rep(A @ B), real_rep(A) @ real_rep(B))
    assert np.allclose(real_rep(A) @ complex_to_real(z), complex_to_real(A @ z))
