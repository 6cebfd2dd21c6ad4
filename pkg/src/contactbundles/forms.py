"""Pointwise exterior calculus on embedded manifolds.

Forms and vector fields live in ambient coordinates.  Restriction to a
manifold happens only when they are evaluated on tangent vectors, so nothing
here depends on the gauge of a tangent frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import DegenerateContact, EvenDimension, FlowEscape, NonConvergence, RankDeficient

PF_TOL = 1e-8
FD_STEP = 1e-5


class OneFormField:
    """Ambient one-form ``x -> coeffs(x)``.

    ``coeffs`` returns an ``(N,)`` covector, or ``(d, N)`` for a form with
    values in ``R^d`` (connection forms).  It must accept jets.
    """

    def __init__(self, coeffs, name="alpha"):
        self.coeffs = coeffs
        self.name = name

    def __repr__(self):
        return f"OneFormField({self.name!r})"

    def at(self, p):
        return np.asarray(jets.value_of(self.coeffs(np.asarray(p, dtype=float))))

    def jet(self, p):
        """Coefficients at ``p`` and their ambient derivative ``D[..., i, j] = d_j a_i``."""
        return jets.jacobian(self.coeffs, p)

    def __call__(self, p, v):
        return self.at(p) @ np.asarray(v, dtype=float)

    def scaled(self, f, name=None):
        """The conformally rescaled form ``exp(f) * self``."""
        coeffs = self.coeffs
        return OneFormField(lambda x: jets.exp(f(x)) * coeffs(x),
                            name=name or f"exp(f)*{self.name}")

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        return OneFormField(lambda x: a(x) + b(x), name=f"{self.name}+{other.name}")

    def __neg__(self):
        a = self.coeffs
        return OneFormField(lambda x: -a(x), name=f"-{self.name}")


def exact_form(f, name="df"):
    """``df`` for a jet-evaluable scalar function ``f``.

    The coefficient Jacobian is the Hessian of ``f``; it is taken by
    Richardson-extrapolated central differences of the jet gradient
    (error ~1e-12 for moderate third derivatives).
    """
    def grad(x):
        if jets.is_jet(x):
            p = x.value
            g = _fd_jacobian(lambda q: jets.jacobian(f, q)[1], p, h=1e-3, richardson=True)
            return jets.Jet1(jets.jacobian(f, p)[1], g @ x.grad)
        return jets.jacobian(f, x)[1]
    return OneFormField(grad, name=name)


def _fd_jacobian(fn, p, h=FD_STEP, richardson=False):
    p = np.asarray(p, dtype=float)

    def central(e):
        return (np.asarray(fn(p + e)) - np.asarray(fn(p - e))) / (2 * np.linalg.norm(e))

    cols = []
    for j in range(p.size):
        e = np.zeros_like(p)
        e[j] = h
        if richardson:
            cols.append((4 * central(e / 2) - central(e)) / 3)
        else:
            cols.append(central(e))
    return np.stack(cols, axis=-1)


def d_matrix(alpha, p):
    """Ambient skew matrix ``Om`` with ``d alpha_p(u, v) = u @ Om @ v``."""
    _, D = alpha.jet(p)
    return np.swapaxes(D, -1, -2) - D


def eval_d(alpha, p, u, v):
    """``d alpha_p(u, v) = <D alpha(p) u, v> - <D alpha(p) v, u>``."""
    _, D = alpha.jet(p)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (D @ u) @ v - (D @ v) @ u


@dataclass(frozen=True)
class TwoFormValue:
    base_point: np.ndarray
    frame: np.ndarray
    matrix: np.ndarray  # skew, in frame coordinates


def restrict_d(alpha, p, frame):
    F = np.asarray(frame, dtype=float)
    W = F.T @ d_matrix(alpha, p) @ F
    return TwoFormValue(np.asarray(p, dtype=float), F, 0.5 * (W - W.T))


class VectorFieldEntity:
    """Ambient vector field.

    Jet-evaluable fields get exact derivatives.  Derived fields (Reeb fields,
    horizontal lifts) set ``jet=False`` and are differentiated by central
    differences; they must be smooth on a neighbourhood of the manifold.
    """

    def __init__(self, fn, *, name="X", jet=True, manifold=None, tangency_tol=1e-8,
                 fd_step=FD_STEP):
        self.fn = fn
        self.name = name
        self.jet = jet
        self.manifold = manifold
        self.tangency_tol = tangency_tol
        self.fd_step = fd_step

    def __repr__(self):
        return f"VectorFieldEntity({self.name!r})"

    def __call__(self, p):
        return np.asarray(jets.value_of(self.fn(np.asarray(p, dtype=float))), dtype=float)

    def jacobian(self, p):
        if self.jet:
            return jets.jacobian(self.fn, p)[1]
        return _fd_jacobian(self, p, self.fd_step)

    def directional(self, p, u):
        """Derivative of the field at ``p`` along ``u``."""
        u = np.asarray(u, dtype=float)
        if self.jet:
            return self.jacobian(p) @ u
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return np.zeros_like(u)
        t = self.fd_step / nu
        p = np.asarray(p, dtype=float)
        return (self(p + t * u) - self(p - t * u)) / (2 * t)

    def tangency_defect(self, p):
        if self.manifold is None or not self.manifold.codim:
            return 0.0
        _, J = self.manifold.constraint_jacobian(p)
        return float(np.linalg.norm(J @ self(p)))


def lie_bracket(X, Y, p):
    """``[X, Y](p) = (DY) X - (DX) Y``."""
    p = np.asarray(p, dtype=float)
    return Y.directional(p, X(p)) - X.directional(p, Y(p))


def cartan_rhs(alpha, X, Y, p):
    """``X(alpha(Y)) - Y(alpha(X)) - alpha([X, Y])`` from field data only."""
    p = np.asarray(p, dtype=float)
    a, D = alpha.jet(p)
    Xp, Yp = X(p), Y(p)
    x_of_aY = (D @ Xp) @ Yp + a @ Y.directional(p, Xp)
    y_of_aX = (D @ Yp) @ Xp + a @ X.directional(p, Yp)
    return x_of_aY - y_of_aX - a @ lie_bracket(X, Y, p)


# Pfaffians ----------------------------------------------------------------------

def pfaffian(A):
    """Pfaffian of a real skew-symmetric matrix (Parlett-Reid ``L T L^T``, pivoted)."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("square matrix expected")
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0.0:
            return 0.0
        pf *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)


def bordered_matrix(alpha, p, frame):
    """``[[0, alpha(f_j)], [-alpha(f_i), d alpha(f_i, f_j)]]`` over frame columns."""
    F = np.asarray(frame, dtype=float)
    a = alpha.at(p) @ F
    W = restrict_d(alpha, p, F).matrix
    n = F.shape[1]
    B = np.zeros((n + 1, n + 1))
    B[0, 1:] = a
    B[1:, 0] = -a
    B[1:, 1:] = W
    return B


def relative_pfaffian(B, pf=None):
    """``|Pf B|`` divided by its Hadamard bound; lies in ``[0, 1]``."""
    m = B.shape[0]
    pf = pfaffian(B) if pf is None else pf
    scale = (np.linalg.norm(B) / np.sqrt(m)) ** (m / 2) if m else 1.0
    return 0.0 if scale == 0.0 else abs(pf) / scale


def contact_pfaffian(alpha, M, p, frame=None):
    """Pfaffian of the bordered matrix on a tangent frame; nonzero iff alpha is contact at p."""
    F = M.tangent_frame(p).columns if frame is None else np.asarray(frame, dtype=float)
    if F.shape[1] % 2 == 0:
        raise EvenDimension(f"contact test needs odd dimension, got {F.shape[1]}", witness=p)
    return pfaffian(bordered_matrix(alpha, p, F))


def is_degenerate(alpha, M, p, frame=None, pf_tol=PF_TOL):
    F = M.tangent_frame(p).columns if frame is None else frame
    B = bordered_matrix(alpha, p, F)
    return relative_pfaffian(B) < pf_tol


def reeb(alpha, M, p, frame=None, pf_tol=PF_TOL):
    """Solve ``alpha(R) = 1``, ``d alpha(R, f_i) = 0`` in tangent coordinates."""
    p = np.asarray(p, dtype=float)
    F = M.tangent_frame(p).columns if frame is None else np.asarray(frame, dtype=float)
    B = bordered_matrix(alpha, p, F)
    if F.shape[1] % 2 == 1 and relative_pfaffian(B) < pf_tol:
        raise DegenerateContact("alpha is not contact here; Reeb system singular", witness=p)
    K = np.vstack([B[0:1, 1:], B[1:, 1:]])
    rhs = np.zeros(K.shape[0])
    rhs[0] = 1.0
    r, *_ = np.linalg.lstsq(K, rhs, rcond=None)
    return F @ r


def reeb_residual(alpha, M, p, R, frame=None):
    F = M.tangent_frame(p).columns if frame is None else frame
    a = alpha(p, R)
    W = d_matrix(alpha, p)
    return max(abs(a - 1.0), float(np.max(np.abs(F.T @ W.T @ R))) if F.size else 0.0)


def reeb_field(alpha, M, name="R"):
    """Reeb field on a neighbourhood of ``M`` (evaluated at the projected point)."""
    return VectorFieldEntity(lambda q: reeb(alpha, M, M.project(q)), name=name, jet=False,
                             manifold=M)


# flows and Lie derivatives ------------------------------------------------------

def flow(X, p, t, steps, manifold=None):
    """RK4 flow of ``X`` for time ``t``; projects back onto ``manifold`` after each step."""
    x = np.array(p, dtype=float)
    if steps <= 0 or t == 0.0:
        return x
    h = t / steps
    for _ in range(steps):
        k1 = X(x)
        k2 = X(x + 0.5 * h * k1)
        k3 = X(x + 0.5 * h * k2)
        k4 = X(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise FlowEscape("flow produced non-finite state", witness=p)
        if manifold is not None:
            try:
                x = manifold.project(x)
            except (NonConvergence, RankDeficient) as exc:
                raise FlowEscape(f"flow left the retraction basin: {exc}", witness=x) from exc
    return x


def _tensor_at(T, q):
    if isinstance(T, OneFormField):
        return T.at(q)
    return np.asarray(T(q), dtype=float)


def lie_derivative_tensor(T, X, p, h=1e-3, manifold=None, frame=None, substeps=10,
                          eps=FD_STEP):
    """``(phi_h^* T - phi_{-h}^* T) / 2h`` at ``p`` in frame coordinates.

    ``T`` is a one-form (``OneFormField`` or callable returning ``(N,)``) or a
    bilinear form (callable returning ``(N, N)``).  The flow Jacobian is taken
    by central differences along projected curves through ``p``.
    """
    p = np.asarray(p, dtype=float)
    M = manifold
    if frame is None:
        frame = M.tangent_frame(p).columns if M is not None else np.eye(p.size)
    F = np.asarray(frame, dtype=float)
    proj = (lambda q: q) if M is None else M.project

    def pulled(s):
        base = flow(X, p, s, substeps, M)
        cols = []
        for j in range(F.shape[1]):
            up = flow(X, proj(p + eps * F[:, j]), s, substeps, M)
            dn = flow(X, proj(p - eps * F[:, j]), s, substeps, M)
            cols.append((up - dn) / (2 * eps))
        Dphi = np.stack(cols, axis=1)
        Tq = _tensor_at(T, base)
        if Tq.ndim == 1:
            return Dphi.T @ Tq
        return Dphi.T @ Tq @ Dphi

    return (pulled(h) - pulled(-h)) / (2 * h)
