"""Compatible metrics, the Killing condition for the Reeb field, torus positivity,
and K-contact structures on associated ellipsoid bundles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundles import _null_space, assemble_alpha_tot, fatness_check, verify_contact_associated
from .contact import moment_alpha, verify_contact
from .errors import PolarBreakdown
from .forms import d_matrix, lie_derivative_tensor, reeb, reeb_field
from .geomcore import SampleSet, ellipsoid, pmap
from .liealg import coordinate_torus_action, diagonal_circle_action
from .models import standard_form


def _sym_sqrt(S, inverse=False):
    w, V = np.linalg.eigh(0.5 * (S + S.T))
    w = w ** (-0.5 if inverse else 0.5)
    return (V * w) @ V.T


class CompatibleMetricField:
    """Metric with ``g(R, .) = alpha``, ``g|_xi = -d alpha(., J .)`` built pointwise.

    ``J`` is the polar part of ``B^-1 d alpha|_xi`` for the background metric
    ``B``, so that ``d alpha|_xi = g(., J .)``.  ``background`` maps an ambient
    point to a symmetric ``N x N`` matrix (default: the identity).
    """

    def __init__(self, manifold, alpha, background=None, eig_tol=1e-10):
        self.manifold = manifold
        self.alpha = alpha
        self.background = background
        self.eig_tol = eig_tol

    def __repr__(self):
        return f"CompatibleMetricField({self.alpha.name!r} on {self.manifold.name!r})"

    def _background(self, x):
        if self.background is None:
            return np.eye(x.size)
        return np.asarray(self.background(x), dtype=float)

    def pieces(self, x):
        """Reeb vector, contact-plane basis, ``g|_xi`` and ``J`` in that basis."""
        x = np.asarray(x, dtype=float)
        Q = self.manifold.tangent_frame(x).columns
        R = reeb(self.alpha, self.manifold, x, Q)
        a = self.alpha.at(x)
        Xi = Q @ _null_space((a @ Q)[None, :])
        B = Xi.T @ self._background(x) @ Xi
        W = Xi.T @ d_matrix(self.alpha, x) @ Xi
        wb = np.linalg.eigvalsh(0.5 * (B + B.T))
        if wb.size and wb[0] <= self.eig_tol * max(wb[-1], 1.0):
            raise PolarBreakdown("background metric degenerate on the contact plane", witness=x,
                                 value=float(wb[0]))
        S, Si = _sym_sqrt(B), _sym_sqrt(B, inverse=True)
        K = Si @ W @ Si
        P2 = K.T @ K
        wp = np.linalg.eigvalsh(P2)
        if wp.size and wp[0] <= self.eig_tol * max(wp[-1], 1.0):
            raise PolarBreakdown("d alpha degenerate on the contact plane", witness=x,
                                 value=float(wp[0]))
        Jt = K @ _sym_sqrt(P2, inverse=True)
        J = Si @ Jt @ S
        g_xi = -W @ J
        return R, Xi, 0.5 * (g_xi + g_xi.T), J

    def at(self, x):
        """Ambient ``N x N`` matrix of ``g``; vanishes on normals of the tangent frame."""
        R, Xi, g_xi, _ = self.pieces(x)
        E = np.column_stack([R, Xi])
        Gm = np.zeros((E.shape[1],) * 2)
        Gm[0, 0] = 1.0
        Gm[1:, 1:] = g_xi
        D = np.linalg.pinv(E)
        return D.T @ Gm @ D

    __call__ = at

    def J(self, x):
        """Ambient matrix of ``J`` on ``xi`` (zero on ``R`` and on normals)."""
        R, Xi, _, J = self.pieces(x)
        E = np.column_stack([R, Xi])
        D = np.linalg.pinv(E)
        return Xi @ J @ D[1:]

    def invariant_residuals(self, x):
        """Residuals of the compatible-metric invariants at ``x``."""
        x = np.asarray(x, dtype=float)
        R, Xi, g_xi, J = self.pieces(x)
        G = self.at(x)
        Q = self.manifold.tangent_frame(x).columns
        W = Xi.T @ d_matrix(self.alpha, x) @ Xi
        k = Xi.shape[1]
        return {
            "min_eig": float(np.linalg.eigvalsh(Q.T @ G @ Q)[0]),
            "reeb_unit": abs(float(R @ G @ R) - 1.0),
            "reeb_normal": float(np.max(np.abs(R @ G @ Xi), initial=0.0)),
            "alpha_dual": float(np.max(np.abs(Q.T @ (G @ R) - Q.T @ self.alpha.at(x)))),
            "compat": float(np.max(np.abs(W - g_xi @ J), initial=0.0)),
            "J_squared": float(np.max(np.abs(J @ J + np.eye(k)), initial=0.0)),
            "J_isometry": float(np.max(np.abs(J.T @ g_xi @ J - g_xi), initial=0.0)),
        }


def build_compatible_metric(C, background=None):
    """Compatible metric for a verified contact structure ``C``."""
    return CompatibleMetricField(C.manifold, C.alpha, background)


def killing_residual(metric, samples, h=1e-3, threads=None):
    """``max |L_R g|`` over samples, by flow finite differences of the pulled-back metric."""
    M = metric.manifold
    R = reeb_field(metric.alpha, M)
    pts = np.asarray(samples.points if isinstance(samples, SampleSet) else samples)

    def one(p):
        L = lie_derivative_tensor(metric.at, R, p, h=h, manifold=M,
                                  frame=M.tangent_frame(p).columns)
        return float(np.max(np.abs(L)))

    vals = pmap(one, pts, threads)
    return float(max(vals)), pts[int(np.argmax(vals))]


def reeb_verticality(assoc, samples):
    """``max |d pi(R)|`` for the Reeb field of ``alpha_tot``."""
    M = assoc.total
    return float(max(np.linalg.norm(assoc.dpi(x) @ reeb(assoc.alpha_tot, M, x))
                     for x in np.asarray(samples)))


@dataclass(frozen=True)
class PositivityReport:
    passed: bool
    minimum: float
    witness: np.ndarray | None


def positivity_check(C, action, xi, samples=None):
    """``min <Psi_alpha, X>`` over samples; PASS iff strictly positive."""
    pts = np.asarray(C.verified_samples.points if samples is None else
                     getattr(samples, "points", samples))
    vals = np.array([moment_alpha(C, action, x) @ np.asarray(xi, dtype=float) for x in pts])
    i = int(np.argmin(vals))
    passed = bool(vals[i] > 0)
    return PositivityReport(passed, float(vals[i]), None if passed else pts[i])


def horizontal_metric_block(assoc, metric, x, base_frame=None):
    """``g_M(u#, v#)`` on horizontal lifts of a base frame, at the point ``x`` of ``P x F``."""
    b = assoc.pi(x)
    T = assoc.bundle.base.tangent_frame(b).columns if base_frame is None else base_frame
    L = np.column_stack([assoc.horizontal_lift(x, T[:, j]) for j in range(T.shape[1])])
    return L.T @ metric.at(x) @ L


def fiber_dependence(assoc, metric, p, fiber_points):
    """Largest difference of horizontal metric blocks over points ``[p, f]`` of one fibre."""
    b = assoc.bundle.pi(p)
    T = assoc.bundle.base.tangent_frame(b).columns
    blocks = [horizontal_metric_block(assoc, metric, assoc.join(p, f), T) for f in fiber_points]
    best = (0.0, 0, 0)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            d = float(np.linalg.norm(blocks[i] - blocks[j]))
            if d > best[0]:
                best = (d, i, j)
    return best


def ellipsoid_vertices(E_dim):
    """Points of ``E_a`` with one nonzero coordinate (the simplex vertices)."""
    n = E_dim // 2
    return [np.eye(2 * n)[2 * j] for j in range(n)]


@dataclass
class YamazakiScenario:
    assoc: object
    metric: CompatibleMetricField
    fiber: object
    fiber_action: object
    moment_samples: np.ndarray
    fatness: object
    contact: object


def fiber_samples(E, count, seed, with_vertices=True):
    """The simplex vertices on ``E`` (optional, listed first) followed by random points."""
    pts = [E.project(v) for v in ellipsoid_vertices(E.ambient_dim)] if with_vertices else []
    pts += list(E.sample(count, seed).points)
    return np.array(pts)


def build_yamazaki_scenario(bundle, a, samples=20, fiber_count=50, seed=0, threads=None,
                            fiber_action=None, raise_on_fail=True):
    """``P x_T E_a`` with ``alpha_tot`` and the ambient-induced compatible metric.

    The fatness check runs on the moment images of the fibre samples, which
    include the vertices of the moment simplex.
    """
    a = np.asarray(a, dtype=float)
    E = ellipsoid(a)
    F_pts = fiber_samples(E, fiber_count, seed)
    C = verify_contact(E, standard_form(a.size), F_pts, threads=threads)
    if fiber_action is None:
        if bundle.group.dim == a.size:
            fiber_action = coordinate_torus_action(E, a.size)
        else:
            fiber_action = diagonal_circle_action(E, a.size)
    mus = np.array([moment_alpha(C, fiber_action, f) for f in F_pts])
    fat = fatness_check(bundle, mus, bundle.total.sample(samples, seed + 1), threads=threads)
    assoc = assemble_alpha_tot(bundle, C, fiber_action, seed=seed)
    X = total_samples(assoc, samples, seed + 2, F_pts)
    rep = verify_contact_associated(assoc, X, threads=threads, seed=seed,
                                    raise_on_fail=raise_on_fail)
    metric = CompatibleMetricField(assoc.total, assoc.alpha_tot)
    return YamazakiScenario(assoc, metric, C, fiber_action, mus, fat, rep)


def total_samples(assoc, count, seed, fiber_points=None):
    """Samples of ``P x F``; fibre components cycle through ``fiber_points`` when given."""
    Ps = assoc.bundle.total.sample(count, seed).points
    if fiber_points is None:
        Fs = assoc.fiber.manifold.sample(count, seed + 1).points
    else:
        Fs = np.asarray(fiber_points)[np.arange(count) % len(fiber_points)]
    return np.array([assoc.join(p, f) for p, f in zip(Ps, Fs)])
