"""Compact matrix Lie groups (tori, SU(2), products) and their linear actions.

Algebra elements and elements of g* are coefficient vectors in the chosen
basis ``X_1..X_d`` and its dual basis; group elements are complex unitary
matrices.  Unitary representations on C^n act on R^2n through the real form
with interleaved coordinates ``(x_1, y_1, x_2, y_2, ...)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from . import jets
from .forms import VectorFieldEntity

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def real_rep(U):
    """Real ``2m x 2m`` matrix of a complex ``m x m`` matrix."""
    U = np.asarray(U, dtype=complex)
    m = U.shape[0]
    R = np.empty((2 * m, 2 * m))
    R[0::2, 0::2] = U.real
    R[0::2, 1::2] = -U.imag
    R[1::2, 0::2] = U.imag
    R[1::2, 1::2] = U.real
    return R


def complex_to_real(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def real_to_complex(x):
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


def unitary_curve(Y):
    """``t -> real_rep(expm(t Y))`` for skew-Hermitian ``Y``; accepts jet ``t``.

    Uses the spectral form ``sum_k e^{i lam_k t} P_k``, exact for normal matrices.
    """
    Y = np.asarray(Y, dtype=complex)
    lam, V = np.linalg.eigh(-1j * Y)
    terms = []
    for k in range(lam.size):
        P = np.outer(V[:, k], V[:, k].conj())
        terms.append((lam[k], real_rep(P), real_rep(1j * P)))

    def curve(t):
        out = 0.0
        for lk, Rc, Rs in terms:
            out = out + jets.cos(lk * t) * Rc + jets.sin(lk * t) * Rs
        return out

    return curve


class MatrixLieGroup:
    """Compact group of unitary ``m x m`` matrices given by an algebra basis."""

    def __init__(self, basis, inner=None, name="G", abelian=None):
        self.basis = [np.asarray(X, dtype=complex) for X in basis]
        self.name = name
        self.dim = len(self.basis)
        self.matrix_dim = self.basis[0].shape[0] if self.basis else 1
        flat = np.array([np.concatenate([X.real.ravel(), X.imag.ravel()]) for X in self.basis])
        self._flat_pinv = np.linalg.pinv(flat.T) if self.dim else np.zeros((0, 0))
        self.structure_constants = self._structure_constants()
        if inner is None:
            inner = -self.killing_form()
        self.inner = np.asarray(inner, dtype=float).reshape(self.dim, self.dim)
        self.abelian = (not np.any(np.abs(self.structure_constants) > 1e-14)
                        if abelian is None else abelian)

    def __repr__(self):
        return f"MatrixLieGroup({self.name!r}, dim={self.dim})"

    # algebra ------------------------------------------------------------------
    def matrix(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros((self.matrix_dim, self.matrix_dim), dtype=complex)
        for c, X in zip(xi, self.basis):
            out = out + c * X
        return out

    def coords(self, X):
        X = np.asarray(X, dtype=complex)
        if not self.dim:
            return np.zeros(0)
        return self._flat_pinv @ np.concatenate([X.real.ravel(), X.imag.ravel()])

    def _structure_constants(self):
        d = self.dim
        c = np.zeros((d, d, d))
        for i in range(d):
            for j in range(d):
                Xi, Xj = self.basis[i], self.basis[j]
                c[:, i, j] = self.coords(Xi @ Xj - Xj @ Xi)
        return c

    def bracket(self, xi, eta):
        """Coordinates of ``[X, Y]``."""
        return np.einsum("kij,i,j->k", self.structure_constants, xi, eta)

    def ad(self, xi):
        """Matrix of ``ad_X`` on coordinates."""
        return np.einsum("kij,i->kj", self.structure_constants, np.asarray(xi, dtype=float))

    def killing_form(self):
        ads = [self.ad(e) for e in np.eye(self.dim)]
        return np.array([[np.trace(a @ b) for b in ads] for a in ads]).reshape(self.dim, self.dim)

    # group --------------------------------------------------------------------
    def identity(self):
        return np.eye(self.matrix_dim, dtype=complex)

    def exp(self, xi, t=1.0):
        """``exp(t X)``; closed spectral form for skew-Hermitian ``X``."""
        Y = t * self.matrix(xi)
        if not np.allclose(Y, -Y.conj().T, atol=1e-14):
            return scipy.linalg.expm(Y)
        lam, V = np.linalg.eigh(-1j * Y)
        return (V * np.exp(1j * lam)) @ V.conj().T

    def inverse(self, g):
        return np.asarray(g).conj().T

    def Ad(self, g):
        """Matrix of ``Ad(g)`` acting on algebra coordinates."""
        g = np.asarray(g, dtype=complex)
        gi = self.inverse(g)
        cols = [self.coords(g @ X @ gi) for X in self.basis]
        return np.array(cols).T.reshape(self.dim, self.dim)

    def coadjoint(self, g, mu):
        """``Ad^dagger(g) mu``, defined by ``<Ad^dagger(g) mu, X> = <mu, Ad(g^-1) X>``."""
        return self.Ad(self.inverse(g)).T @ np.asarray(mu, dtype=float)

    def random_element(self, rng, scale=np.pi):
        return self.exp(rng.uniform(-scale, scale, size=self.dim))

    def dual_norm(self, mu):
        mu = np.asarray(mu, dtype=float)
        return float(np.sqrt(mu @ np.linalg.solve(self.inner, mu))) if self.dim else 0.0


def torus(n, name=None):
    """``T^n`` as diagonal unitary matrices, basis ``X_j = i E_jj``, identity inner product."""
    basis = []
    for j in range(n):
        X = np.zeros((n, n), dtype=complex)
        X[j, j] = 1j
        basis.append(X)
    return MatrixLieGroup(basis, inner=np.eye(n), name=name or f"T^{n}", abelian=True)


def trivial_group():
    return MatrixLieGroup([], inner=np.zeros((0, 0)), name="1", abelian=True)


def su2():
    """SU(2) with basis ``X_k = -i sigma_k / 2`` so that ``[X_1, X_2] = X_3``.

    The inner product is the negative Killing form (``2 * identity`` here).
    """
    return MatrixLieGroup([-0.5j * s for s in PAULI], name="SU(2)")


def product_group(*groups, name=None):
    sizes = [G.matrix_dim for G in groups]
    m = sum(sizes)
    basis = []
    off = 0
    for G, s in zip(groups, sizes):
        for X in G.basis:
            B = np.zeros((m, m), dtype=complex)
            B[off:off + s, off:off + s] = X
            basis.append(B)
        off += s
    inner = scipy.linalg.block_diag(*[G.inner for G in groups]) if basis else np.zeros((0, 0))
    return MatrixLieGroup(basis, inner=inner, name=name or " x ".join(G.name for G in groups),
                          abelian=all(G.abelian for G in groups))


class MatrixAction:
    """Left action of ``group`` on ``manifold`` through a unitary representation.

    ``rep`` maps group matrices to ``n x n`` unitaries on C^n (``N = 2n``) and
    ``drep`` is its differential on algebra matrices.
    """

    def __init__(self, group, manifold, rep, drep, name="action"):
        self.group = group
        self.manifold = manifold
        self.rep = rep
        self.drep = drep
        self.name = name
        self._gen = [real_rep(drep(X)) for X in group.basis]

    def __repr__(self):
        return f"MatrixAction({self.name!r}, {self.group.name} on {self.manifold.name})"

    def matrix(self, g):
        """Real ``N x N`` matrix of ``g``."""
        return real_rep(self.rep(g))

    def act(self, g, x):
        return self.matrix(g) @ x

    def generator(self, xi):
        """Real ``N x N`` matrix ``A`` with ``X_M(x) = A x``."""
        out = np.zeros((self.manifold.ambient_dim,) * 2)
        for c, G in zip(np.asarray(xi, dtype=float), self._gen):
            out = out + c * G
        return out

    def induced(self, xi, x):
        """``X_M(x)`` from the linear generator; accepts jets in ``x``."""
        return self.generator(xi) @ x

    def field(self, xi, name=None):
        A = self.generator(xi)
        return VectorFieldEntity(lambda x: A @ x, name=name or "X_M", manifold=self.manifold)


class TrivialAction(MatrixAction):
    """The trivial group acting trivially on any manifold."""

    def __init__(self, manifold):
        self.group = trivial_group()
        self.manifold = manifold
        self.name = "trivial"
        self._gen = []

    def matrix(self, g):
        return np.eye(self.manifold.ambient_dim)

    def rep(self, g):
        return np.eye(1)

    def drep(self, X):
        return np.zeros((1, 1))


def induced_vector_field(action, xi, x):
    """``X_M(x) = d/dt|_0 exp(tX) . x`` by jet differentiation in ``t``."""
    curve = unitary_curve(action.drep(action.group.matrix(xi)))
    x = np.asarray(x, dtype=float)
    _, dx = jets.derivative(lambda t: curve(t) @ x, 0.0)
    return dx


def exp(G, xi, t=1.0):
    return G.exp(xi, t)


def isotropy_algebra(G, mu, rank_tol=1e-8):
    """Basis (columns) of ``g_mu``: the kernel of ``X -> ad*_X mu``."""
    mu = np.asarray(mu, dtype=float)
    if not G.dim:
        return np.zeros((0, 0))
    # row j, column i: <mu, [X_i, X_j]>
    M = np.einsum("kij,k->ji", G.structure_constants, mu)
    _, s, Vt = np.linalg.svd(M)
    scale = max(s[0] if s.size else 0.0, 1.0)
    rank = int(np.sum(s > rank_tol * scale))
    return Vt[rank:].T


def coadjoint_orbit_map(G, g, mu):
    return G.coadjoint(g, mu)


# shipped actions ---------------------------------------------------------------

def diagonal_circle_action(manifold, n):
    """``S^1`` acting on C^n by ``z -> e^{i theta} z``."""
    G = torus(1, name="S^1")
    return MatrixAction(G, manifold, lambda g: g[0, 0] * np.eye(n), lambda X: X[0, 0] * np.eye(n),
                        name="diagonal S^1")


def coordinate_torus_action(manifold, n):
    """``T^n`` acting on C^n coordinatewise."""
    return MatrixAction(torus(n), manifold, lambda g: g, lambda X: X, name=f"T^{n} coordinatewise")


def su2_action(manifold, n):
    """SU(2) acting on the first two coordinates of C^n."""
    def rep(g):
        out = np.eye(n, dtype=complex)
        out[:2, :2] = g
        return out

    def drep(X):
        out = np.zeros((n, n), dtype=complex)
        out[:2, :2] = X
        return out

    return MatrixAction(su2(), manifold, rep, drep, name="SU(2) on C^2")
