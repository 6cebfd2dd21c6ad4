"""Shipped contact forms and principal bundles.

Complex coordinates are interleaved, ``z_j = x_j + i y_j``.  The standard form
on ``C^n`` is ``i sum (z_j dzbar_j - zbar_j dz_j) = 2 sum (x_j dy_j - y_j dx_j)``;
its restriction to the sphere and to every ellipsoid ``E_a`` is contact.
"""

from __future__ import annotations

import numpy as np

from . import jets
from .bundles import PrincipalBundle
from .forms import OneFormField
from .geomcore import EmbeddedManifold, sphere
from .liealg import MatrixAction, TrivialAction, real_rep, torus, trivial_group


def _rot(n):
    """Real form of multiplication by ``i`` on ``C^n``."""
    return real_rep(1j * np.eye(n))


def darboux_form(n=1):
    """``dz - sum y_j dx_j`` on ``R^(2n+1)`` with coordinates ``(x, y, z)``."""
    def coeffs(p):
        x = p[:n] * 0.0
        return jets.concatenate([-p[n:2 * n], x, jets.stack([p[2 * n] * 0.0 + 1.0])])
    return OneFormField(coeffs, name="dz - y dx")


def vertical_form(n=1):
    """``dz`` on ``R^(2n+1)``: closed, never contact."""
    def coeffs(p):
        return jets.concatenate([p[: 2 * n] * 0.0, jets.stack([p[2 * n] * 0.0 + 1.0])])
    return OneFormField(coeffs, name="dz")


def standard_form(n):
    """``2 sum (x_j dy_j - y_j dx_j)`` on ``C^n = R^2n``."""
    J = 2.0 * _rot(n)
    return OneFormField(lambda x: J @ x, name="alpha_std")


def twisted_form(n=2):
    """``alpha_std + x_1 dx_2``: contact on ``S^3`` near the round form, not torus invariant."""
    J = 2.0 * _rot(n)
    E = np.zeros((2 * n, 2 * n))
    E[2, 0] = 1.0

    def coeffs(x):
        return J @ x + E @ x
    return OneFormField(coeffs, name="alpha_std + x1 dx2")


# principal bundles ----------------------------------------------------------------

def hopf_map(x):
    """``S^3 -> S^2``, ``(z1, z2) -> (2 z1 conj(z2), |z1|^2 - |z2|^2)``."""
    x1, y1, x2, y2 = x[0], x[1], x[2], x[3]
    return jets.stack([2 * (x1 * x2 + y1 * y2), 2 * (y1 * x2 - x1 * y2),
                       x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2])


def hopf_bundle():
    """``S^1 -> S^3 -> S^2`` with ``A = sum (x dy - y dx)``, so ``A(iz) = 1``."""
    P = sphere(3)
    G = torus(1, name="S^1")
    act = MatrixAction(G, P, lambda g: g[0, 0] * np.eye(2), lambda X: X[0, 0] * np.eye(2),
                       name="Hopf circle")
    R = _rot(2)
    A = OneFormField(lambda x: jets.stack([R @ x]), name="A_hopf")
    return PrincipalBundle(P, G, act, sphere(2), hopf_map, A, name="Hopf")


def _padded_s2_times_circle():
    """``S^2 x S^1`` inside ``C^3``: ``(a + ib, c + i0, w)`` with ``|(a,b,c)| = |w| = 1``."""
    def constraint(x):
        return jets.stack([x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0, x[3],
                           x[4] * x[4] + x[5] * x[5] - 1.0])
    return EmbeddedManifold(6, constraint, 3, name="S^2 x S^1")


def flat_circle_bundle():
    """The product ``S^2 x S^1 -> S^2`` with the flat connection ``d theta``."""
    P = _padded_s2_times_circle()
    G = torus(1, name="S^1")
    act = MatrixAction(G, P, lambda g: np.diag([1.0, 1.0, g[0, 0]]),
                       lambda X: np.diag([0.0, 0.0, X[0, 0]]), name="S^1 on the circle factor")
    R = real_rep(np.diag([0.0, 0.0, 1j]))
    A = OneFormField(lambda x: jets.stack([R @ x]), name="d theta")
    return PrincipalBundle(P, G, act, sphere(2), lambda x: x[:3], A, name="flat S^2 x S^1")


def _s3_times_circle():
    def constraint(x):
        return jets.stack([x[:4] @ x[:4] - 1.0, x[4] * x[4] + x[5] * x[5] - 1.0])
    return EmbeddedManifold(6, constraint, 2, name="S^3 x S^1")


def _cmul(w, u):
    """``w * u`` for a complex scalar ``w`` and ``u`` in ``C^2`` (real coordinates)."""
    wx, wy = w[0], w[1]
    return jets.stack([wx * u[0] - wy * u[1], wx * u[1] + wy * u[0],
                       wx * u[2] - wy * u[3], wx * u[3] + wy * u[2]])


def fiber_product_bundle():
    """``T^2 -> {(u, v) in S^3 x S^3 : hopf(u) = hopf(v)} -> S^2``.

    Modelled as ``S^3 x S^1`` through ``v = w u``; the torus acts by
    ``(u, w) -> (e^{i t1} u, e^{i (t2 - t1)} w)`` and ``A = (A_hopf(u), A_hopf(v))``,
    so both components have curvature ``pi^* omega``.
    """
    P = _s3_times_circle()
    G = torus(2)

    def rep(g):
        a, b = g[0, 0], g[1, 1]
        return np.diag([a, a, b * np.conj(a)])

    def drep(X):
        a, b = X[0, 0], X[1, 1]
        return np.diag([a, a, b - a])

    act = MatrixAction(G, P, rep, drep, name="T^2 on the fibre product")
    R = _rot(2)

    def A(x):
        u, w = x[:4], x[4:6]
        a1 = jets.concatenate([R @ u, w * 0.0])
        a2 = (R @ _cmul(w, u)) @ _dv(x)
        return jets.stack([a1, a2])

    return PrincipalBundle(P, G, act, sphere(2), lambda x: hopf_map(x[:4]), OneFormField(A, "A"),
                           name="fibre product T^2")


def _dv(x):
    """Jacobian of ``(u, w) -> w u`` (4 x 6), jet-evaluable."""
    u, w = x[:4], x[4:6]
    wx, wy = w[0], w[1]
    z = wx * 0.0
    rows = [
        [wx, -wy, z, z, u[0], -u[1]],
        [wy, wx, z, z, u[1], u[0]],
        [z, z, wx, -wy, u[2], -u[3]],
        [z, z, wy, wx, u[3], u[2]],
    ]
    return jets.stack([jets.stack(r) for r in rows])


def half_flat_torus_bundle():
    """``T^2 -> S^3 x S^1 -> S^2``: Hopf in the first factor, flat in the second."""
    P = _s3_times_circle()
    G = torus(2)
    act = MatrixAction(G, P, lambda g: np.diag([g[0, 0], g[0, 0], g[1, 1]]),
                       lambda X: np.diag([X[0, 0], X[0, 0], X[1, 1]]), name="T^2 half-flat")
    R2, R1 = _rot(2), _rot(1)

    def A(x):
        u, w = x[:4], x[4:6]
        return jets.stack([jets.concatenate([R2 @ u, w * 0.0]),
                           jets.concatenate([u * 0.0, R1 @ w])])

    return PrincipalBundle(P, G, act, sphere(2), lambda x: hopf_map(x[:4]), OneFormField(A, "A"),
                           name="half-flat T^2")


def trivial_bundle(base):
    """``B x {1} -> B`` with the trivial group."""
    A = OneFormField(lambda x: np.zeros((0, base.ambient_dim)), name="0")
    return PrincipalBundle(base, trivial_group(), TrivialAction(base), base, lambda x: x, A,
                           name=f"{base.name} x 1")
