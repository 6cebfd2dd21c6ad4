import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactbundles import jets
from contactbundles.errors import DegenerateContact, EvenDimension
from contactbundles.forms import (OneFormField, TwoFormValue, VectorFieldEntity, cartan_rhs,
                                  contact_pfaffian, eval_d, exact_form, flow,
                                  lie_bracket, lie_derivative_tensor, pfaffian, reeb,
                                  reeb_field, reeb_residual, relative_pfaffian, restrict_d)
from contactbundles.geomcore import ellipsoid, euclidean, sphere
from contactbundles.models import _rot, darboux_form, standard_form, vertical_form


def pf_bruteforce(A):
    """Pfaffian by expansion along the first row."""
    n = A.shape[0]
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    total = 0.0
    for j in range(1, n):
        keep = [k for k in range(n) if k not in (0, j)]
        total += (-1) ** (j + 1) * A[0, j] * pf_bruteforce(A[np.ix_(keep, keep)])
    return total


def skew(rng, n):
    X = rng.normal(size=(n, n))
    return X - X.T


x_dy = OneFormField(lambda p: jets.stack([p[0] * 0.0, p[0], p[0] * 0.0]), name="x dy")


def test_eval_d_examples(rng):
    ex, ey = np.eye(3)[0], np.eye(3)[1]
    for p in rng.normal(size=(10, 3)):
        assert np.isclose(eval_d(darboux_form(1), p, ex, ey), 1.0, atol=1e-14)
        assert np.isclose(eval_d(x_dy, p, ex, ey), 1.0, atol=1e-14)
        df = exact_form(lambda q: q[0] * q[0] + q[1])
        u, v = rng.normal(size=(2, 3))
        assert abs(eval_d(df, p, u, v)) <= 1e-12


def test_eval_d_bilinear_antisymmetric(rng):
    alpha = standard_form(2)
    for _ in range(20):
        p, u, v, w = rng.normal(size=(4, 4))
        a, b = rng.normal(size=2)
        assert np.isclose(eval_d(alpha, p, u, v), -eval_d(alpha, p, v, u), atol=1e-13)
        lhs = eval_d(alpha, p, a * u + b * w, v)
        assert np.isclose(lhs, a * eval_d(alpha, p, u, v) + b * eval_d(alpha, p, w, v),
                          atol=1e-12)


@pytest.mark.parametrize("k", range(20))
def test_d_squared_vanishes(k):
    rng = np.random.default_rng(100 + k)
    c = rng.normal(size=4)
    M = rng.normal(size=(3, 3))

    def f(x):
        return jets.sin(c[0] * x[0] + x[1]) * jets.exp(c[1] * x[2]) + c[2] * (x @ M @ x) \
            + jets.cos(c[3] * x[0] * x[1])

    df = exact_form(f)
    for _ in range(3):
        p, u, v = rng.normal(size=(3, 3))
        assert abs(eval_d(df, p, u, v)) <= 1e-9


def test_restrict_d_is_skew(rng):
    p = sphere(3).sample(1, 0).points[0]
    F = sphere(3).tangent_frame(p).columns
    W = restrict_d(standard_form(2), p, F)
    assert isinstance(W, TwoFormValue)
    assert np.array_equal(W.matrix, -W.matrix.T)


def test_lie_bracket_examples(rng):
    X = VectorFieldEntity(lambda p: jets.stack([p[0] * 0.0, p[0]]), name="x d_y")
    Y = VectorFieldEntity(lambda p: jets.stack([p[1], p[1] * 0.0]), name="y d_x")
    ex = VectorFieldEntity(lambda p: p * 0.0 + np.array([1.0, 0.0]))
    ey = VectorFieldEntity(lambda p: p * 0.0 + np.array([0.0, 1.0]))
    for p in rng.normal(size=(10, 2)):
        assert np.allclose(lie_bracket(X, Y, p), [p[0], -p[1]], atol=1e-13)
        assert np.allclose(lie_bracket(ex, ey, p), 0.0)
    R1 = np.zeros((4, 4))
    R1[:2, :2] = _rot(1)
    R2 = np.zeros((4, 4))
    R2[2:, 2:] = _rot(1)
    A = VectorFieldEntity(lambda p: R1 @ p)
    B = VectorFieldEntity(lambda p: R2 @ p)
    for p in rng.normal(size=(10, 4)):
        assert np.allclose(lie_bracket(A, B, p), 0.0, atol=1e-14)


def test_cartan_consistency(rng):
    alpha = OneFormField(lambda x: jets.stack([jets.sin(x[1]), x[0] * x[2], jets.exp(0.2 * x[0])]))
    X = VectorFieldEntity(lambda x: jets.stack([x[1] * x[2], jets.cos(x[0]), x[0] - x[1]]))
    Y = VectorFieldEntity(lambda x: jets.stack([jets.tanh(x[2]), x[0] * x[0], 1.0 + x[1] * 0.0]))
    Yfd = VectorFieldEntity(Y.fn, jet=False)
    for p in rng.normal(size=(20, 3)):
        lhs = eval_d(alpha, p, X(p), Y(p))
        assert abs(lhs - cartan_rhs(alpha, X, Y, p)) <= 1e-7
        assert abs(lhs - cartan_rhs(alpha, X, Yfd, p)) <= 1e-7


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_matches_bruteforce(n, rng):
    for _ in range(5):
        A = skew(rng, n)
        assert np.isclose(pfaffian(A), pf_bruteforce(A), rtol=1e-10, atol=1e-12)


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_pfaffian_squared_is_det(k, seed):
    A = skew(np.random.default_rng(seed), 2 * k)
    assert np.isclose(pfaffian(A) ** 2, np.linalg.det(A), rtol=1e-8, atol=1e-10)


@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_pfaffian_congruence(k, seed):
    rng = np.random.default_rng(seed)
    A = skew(rng, 2 * k)
    B = rng.normal(size=(2 * k, 2 * k))
    assert np.isclose(pfaffian(B @ A @ B.T), np.linalg.det(B) * pfaffian(A),
                      rtol=1e-8, atol=1e-9)


def test_pfaffian_edge_cases():
    assert pfaffian(np.zeros((0, 0))) == 1.0
    assert pfaffian(np.zeros((3, 3))) == 0.0
    assert pfaffian(np.zeros((4, 4))) == 0.0
    assert relative_pfaffian(np.zeros((2, 2))) == 0.0


def test_contact_pfaffian_examples():
    R3 = euclidean(3)
    p = np.array([0.3, -1.2, 2.0])
    assert np.isclose(contact_pfaffian(darboux_form(1), R3, p, np.eye(3)), 1.0, atol=1e-14)
    assert contact_pfaffian(vertical_form(1), R3, p, np.eye(3)) == 0.0
    with pytest.raises(EvenDimension):
        contact_pfaffian(darboux_form(1), R3, p, np.eye(3)[:, :2])


def test_contact_pfaffian_gauge_invariant(rng):
    S = sphere(3)
    alpha = standard_form(2)
    for p in S.sample(20, 5).points:
        F = S.tangent_frame(p).columns
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        a = abs(contact_pfaffian(alpha, S, p, F))
        b = abs(contact_pfaffian(alpha, S, p, F @ Q))
        assert abs(a - b) <= 1e-9 * a


def test_standard_sphere_pfaffian_floor():
    S = sphere(3)
    vals = [abs(contact_pfaffian(standard_form(2), S, p)) for p in S.sample(1000, 42).points]
    # frozen: on the frame (iz, v, iv), alpha(iz) = 2 and d alpha(v, iv) = 4, so |Pf| = 8
    assert min(vals) >= 8.0 - 1e-9
    assert max(vals) <= 8.0 + 1e-9


def test_reeb_examples(rng):
    R3 = euclidean(3)
    for p in rng.normal(size=(5, 3)):
        assert np.allclose(reeb(darboux_form(1), R3, p, np.eye(3)), [0, 0, 1.0], atol=1e-13)
    S = sphere(3)
    alpha = standard_form(2)
    J = _rot(2)
    for p in S.sample(20, 1).points:
        # alpha(iz) = 2 |z|^2 = 2 on the unit sphere
        assert np.isclose(alpha(p, J @ p), 2.0)
        R = reeb(alpha, S, p)
        assert np.allclose(R, J @ p / 2.0, atol=1e-12)
        assert reeb_residual(alpha, S, p, R) <= 1e-8


def test_reeb_on_ellipsoid_is_constant_combination():
    a = np.array([1.0, 2.0])
    E = ellipsoid(a)
    alpha = standard_form(2)
    gens = []
    for j in range(2):
        Rj = np.zeros((4, 4))
        Rj[2 * j:2 * j + 2, 2 * j:2 * j + 2] = _rot(1)
        gens.append(Rj)
    coefs = []
    for p in E.sample(10, 3).points:
        R = reeb(alpha, E, p)
        G = np.column_stack([g @ p for g in gens])
        c, *_ = np.linalg.lstsq(G, R, rcond=None)
        assert np.allclose(G @ c, R, atol=1e-10)
        coefs.append(c)
    coefs = np.array(coefs)
    assert np.allclose(coefs, coefs[0], atol=1e-9)
    # frozen from the linear-solve oracle: R = sum (a_j / 2) X_j
    assert np.allclose(coefs[0], a / 2, atol=1e-9)


def test_reeb_raises_when_degenerate():
    with pytest.raises(DegenerateContact):
        reeb(vertical_form(1), euclidean(3), np.zeros(3), np.eye(3))


def test_reeb_flow_stays_on_sphere():
    S = sphere(3)
    p = S.sample(1, 2).points[0]
    q = flow(reeb_field(standard_form(2), S), p, 1.0, 50, S)
    assert S.contains(q)
    # R = iz/2, so the flow is multiplication by exp(i t / 2)
    c, s = np.cos(0.5), np.sin(0.5)
    assert np.allclose(q, c * p + s * (_rot(2) @ p), atol=1e-9)


def test_lie_derivative_examples():
    S2 = sphere(2)
    rot = VectorFieldEntity(lambda x: jets.stack([-x[1], x[0], x[2] * 0.0]), manifold=S2)
    p = S2.sample(1, 0).points[0]
    L = lie_derivative_tensor(lambda q: np.eye(3), rot, p, manifold=S2)
    assert np.max(np.abs(L)) <= 1e-6
    S3 = sphere(3)
    alpha = standard_form(2)
    p = S3.sample(1, 0).points[0]
    L = lie_derivative_tensor(alpha, reeb_field(alpha, S3), p, manifold=S3)
    assert np.max(np.abs(L)) <= 1e-6
    dil = VectorFieldEntity(lambda x: jets.stack([x[0], x[1] * 0.0]))
    L = lie_derivative_tensor(lambda q: np.eye(2), dil, np.array([0.4, -0.7]))
    assert np.allclose(L, [[2.0, 0.0], [0.0, 0.0]], atol=1e-6)
