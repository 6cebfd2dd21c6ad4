"""Contact cross-sections ``R = Psi_alpha^-1(S)`` for a slice ``S`` through ``mu``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .bundles import _null_space
from .contact import moment_alpha, moment_function
from .errors import EtaOutsideSlice, NonConvergence, NoSolutions, NotContact, SplittingFailure
from .forms import PF_TOL, bordered_matrix, eval_d, pfaffian, relative_pfaffian
from .geomcore import SampleSet, _as_vector, pmap
from .liealg import isotropy_algebra

CONE_EPS = 0.1


@dataclass(frozen=True)
class SliceData:
    """``g = g_mu + m`` with ``m`` orthogonal to ``g_mu``; ``S`` is a cone around ``R_+ mu`` in ``m°``."""

    group: object
    mu: np.ndarray
    g_mu: np.ndarray  # (d, k) columns
    m: np.ndarray  # (d, d - k) columns
    cone_eps: float = CONE_EPS

    def annihilator_residual(self, eta):
        eta = np.asarray(eta, dtype=float)
        return float(np.max(np.abs(eta @ self.m), initial=0.0))

    def cosine(self, eta):
        """Cosine between ``eta`` and ``mu`` in the dual inner product."""
        G = self.group
        eta = np.asarray(eta, dtype=float)
        ne, nm = G.dual_norm(eta), G.dual_norm(self.mu)
        if ne == 0.0 or nm == 0.0:
            return 0.0
        return float(eta @ np.linalg.solve(G.inner, self.mu)) / (ne * nm)

    def contains(self, eta, tol=1e-8):
        eta = np.asarray(eta, dtype=float)
        scale = max(float(np.linalg.norm(eta)), 1e-300)
        return (self.annihilator_residual(eta) <= tol * max(scale, 1.0)
                and self.cosine(eta) > 1.0 - self.cone_eps)


def _orthonormal_columns(B):
    if B.shape[1] == 0:
        return B
    Q, _ = np.linalg.qr(B)
    return Q


def build_slice(G, mu, cone_eps=CONE_EPS):
    """Isotropy algebra of ``mu`` and its orthogonal complement for ``G.inner``."""
    mu = np.asarray(mu, dtype=float)
    g_mu = _orthonormal_columns(isotropy_algebra(G, mu))
    if g_mu.shape[1]:
        m = _null_space((G.inner @ g_mu).T)
    else:
        m = np.eye(G.dim)
    return SliceData(G, mu, g_mu, m, cone_eps)


@dataclass(frozen=True)
class PairingReport:
    passed: bool
    min_singular_value: float
    matrix: np.ndarray


def pairing_matrix(slice_, eta):
    """``<eta, [m_i, m_j]>``."""
    G = slice_.group
    m = slice_.m
    k = m.shape[1]
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            out[i, j] = np.asarray(eta, float) @ G.bracket(m[:, i], m[:, j])
    return out


def slice_pairing_check(slice_, eta, tol=1e-8):
    """Smallest singular value of the skew form ``(X, Y) -> <eta, [X, Y]>`` on ``m``."""
    if not slice_.contains(eta):
        raise EtaOutsideSlice("eta is not in the slice", value=float(slice_.cosine(eta)))
    W = pairing_matrix(slice_, eta)
    if not W.size:
        return PairingReport(True, float("inf"), W)
    s = float(np.linalg.svd(W, compute_uv=False)[-1])
    return PairingReport(bool(s > tol * float(np.linalg.norm(eta))), s, W)


@dataclass(frozen=True)
class CrossSectionSample:
    point: np.ndarray
    membership_residual: float
    constraint_residual: float


def _section_equations(C, action, slice_):
    M = C.manifold
    psi = moment_function(C.alpha, action)
    m = slice_.m

    def eqs(x):
        parts = []
        if M.codim:
            parts.append(_as_vector(M.constraint(x)))
        if m.shape[1]:
            parts.append(psi(x) @ m)
        if not parts:
            return x[:0] * 0.0
        return jets.concatenate(parts)

    return eqs


def section_jacobian(C, action, slice_, x):
    eqs = _section_equations(C, action, slice_)
    v, J = jets.jacobian(eqs, x)
    return np.atleast_1d(v), J.reshape(-1, np.size(x))


def _newton(eqs, x0, tol=1e-13, max_iter=60, rank_tol=1e-8):
    x = np.array(x0, dtype=float)
    for _ in range(max_iter):
        v, J = jets.jacobian(eqs, x)
        v = np.atleast_1d(v)
        J = J.reshape(v.size, x.size)
        if float(np.max(np.abs(v), initial=0.0)) <= tol:
            return x
        U, s, Vt = np.linalg.svd(J, full_matrices=False)
        if not s.size or s[-1] <= rank_tol * s[0]:
            raise NonConvergence("cross-section system lost rank", witness=x)
        x = x - Vt.T @ ((U.T @ v) / s)
        if not np.all(np.isfinite(x)):
            break
    raise NonConvergence("cross-section Newton did not converge", witness=x0)


def tangent_frame_R(C, action, slice_, x):
    """Orthonormal frame of ``T_x R``: the kernel of the stacked Jacobian."""
    _, J = section_jacobian(C, action, slice_, x)
    return _null_space(J)


def find_cross_section(C, action, slice_, count, seed, budget_per_point=200, threads=None):
    """Points of ``R``: Gauss-Newton on (constraint, m-components of ``Psi_alpha``)
    from manifold samples, kept when the moment lies in the cone ``S``."""
    M = C.manifold
    eqs = _section_equations(C, action, slice_)
    psi = moment_function(C.alpha, action)
    rng_seed = int(seed)
    budget = budget_per_point * count
    starts = M.sample(budget, rng_seed).points

    def solve(x0):
        try:
            x = _newton(eqs, x0)
        except NonConvergence:
            return None
        eta = np.asarray(jets.value_of(psi(x)))
        if not slice_.contains(eta):
            return None
        return x

    found = []
    batch = max(count, 8)
    for lo in range(0, budget, batch):
        for x in pmap(solve, starts[lo:lo + batch], threads):
            if x is not None:
                found.append(x)
        if len(found) >= count:
            break
    if len(found) < count:
        raise NoSolutions(f"found {len(found)}/{count} cross-section points after "
                          f"{budget} seeds")
    out = []
    for x in found[:count]:
        eta = moment_alpha(C, action, x)
        out.append(CrossSectionSample(x, slice_.annihilator_residual(eta),
                                      float(np.max(np.abs(M.residual(x)), initial=0.0))))
    return out


@dataclass(frozen=True)
class SplittingReport:
    a: float
    b: float
    c: float
    dims: tuple


def verify_splitting(x, slice_, C, action, tol_a=1e-8, tol_b=1e-7, tol_c=1e-7, m_basis=None,
                     raise_on_fail=True):
    """``xi_x = m_M(x) + (xi_x cap T_x R)``, with ``m_M(x)`` inside ``xi_x`` and
    ``d alpha``-orthogonal to ``xi_x cap T_x R``.

    ``m_basis`` overrides the slice complement (to test wrong complements);
    ``T_x R`` always comes from the slice.
    """
    x = np.asarray(x, dtype=float)
    M = C.manifold
    m = slice_.m if m_basis is None else np.asarray(m_basis, dtype=float)
    a = C.alpha.at(x)
    T = M.tangent_frame(x).columns
    Xi = T @ _null_space((a @ T)[None, :])
    mM = np.column_stack([action.induced(m[:, i], x) for i in range(m.shape[1])]) \
        if m.shape[1] else np.zeros((x.size, 0))
    norms = np.linalg.norm(mM, axis=0) if mM.size else np.zeros(0)
    mMn = mM / np.where(norms > 0, norms, 1.0) if mM.size else mM
    res_a = float(np.max(np.abs(a @ mMn), initial=0.0))

    Rf = tangent_frame_R(C, action, slice_, x)
    XiR = Rf @ _null_space((a @ Rf)[None, :])
    joint = np.column_stack([mMn, XiR])
    dim_sum = int(np.linalg.matrix_rank(mMn, tol=1e-8)) + XiR.shape[1]
    Qj, s, _ = np.linalg.svd(joint, full_matrices=False) if joint.size else (joint, np.zeros(0), 0)
    rank = int(np.sum(s > 1e-8 * (s[0] if s.size else 1.0)))
    Qj = Qj[:, :rank]
    res_b = float(np.max(np.linalg.norm(Xi - Qj @ (Qj.T @ Xi), axis=0), initial=0.0))
    if dim_sum != Xi.shape[1] or rank != Xi.shape[1]:
        res_b = max(res_b, 1.0)
    res_c = 0.0
    for i in range(mMn.shape[1]):
        for j in range(XiR.shape[1]):
            res_c = max(res_c, abs(eval_d(C.alpha, x, mMn[:, i], XiR[:, j])))
    rep = SplittingReport(res_a, res_b, res_c, (mMn.shape[1], XiR.shape[1], Xi.shape[1]))
    if raise_on_fail:
        for name, val, tol in (("a", res_a, tol_a), ("b", res_b, tol_b), ("c", res_c, tol_c)):
            if not val <= tol:
                raise SplittingFailure(f"splitting condition ({name}) fails: {val:.3e}", name,
                                       witness=x, value=val)
    return rep


@dataclass(frozen=True)
class CrossSectionContactReport:
    passed: bool
    dim_R: int
    min_abs_pfaffian: float
    min_relative_pfaffian: float
    conformal_membership: float
    conformal_passed: bool
    witness: np.ndarray | None


def _pf_on_R(alpha, C, action, slice_, x):
    Rf = tangent_frame_R(C, action, slice_, x)
    B = bordered_matrix(alpha, x, Rf)
    pf = pfaffian(B)
    return Rf.shape[1], pf, relative_pfaffian(B, pf)


def verify_cross_section_contact(samples, slice_, C, action, conformal=None, pf_tol=PF_TOL,
                                 threads=None, raise_on_fail=True):
    """Bordered Pfaffian of ``alpha`` on ``T_x R``, and the same check and the
    membership residual for ``exp(f) alpha`` (``conformal`` is ``f``)."""
    pts = [s.point if isinstance(s, CrossSectionSample) else np.asarray(s) for s in samples]
    vals = pmap(lambda x: _pf_on_R(C.alpha, C, action, slice_, x), pts, threads)
    dims = {v[0] for v in vals}
    rel = np.array([v[2] for v in vals])
    i = int(np.argmin(rel))
    passed = bool(rel[i] >= pf_tol)
    conf_res, conf_pass = 0.0, passed
    if conformal is not None:
        alpha2 = C.alpha.scaled(conformal)
        psi2 = moment_function(alpha2, action)
        for x in pts:
            eta = np.asarray(jets.value_of(psi2(x)))
            conf_res = max(conf_res, slice_.annihilator_residual(eta))
            if not slice_.contains(eta, tol=1e-7):
                conf_pass = False
        rel2 = [v[2] for v in pmap(lambda x: _pf_on_R(alpha2, C, action, slice_, x), pts,
                                    threads)]
        conf_pass = conf_pass and (min(rel2) >= pf_tol) == passed
    rep = CrossSectionContactReport(passed, dims.pop() if len(dims) == 1 else -1,
                                    float(np.min(np.abs([v[1] for v in vals]))), float(rel[i]),
                                    conf_res, conf_pass, None if passed else pts[i])
    if raise_on_fail and not passed:
        raise NotContact(f"alpha degenerates on the cross-section (relative |Pf| = "
                         f"{rel[i]:.3e})", witness=pts[i], value=float(abs(vals[i][1])))
    return rep


def isotropy_invariance_residual(C, action, slice_, samples, n_elements=5, seed=0):
    """Membership residual of ``g . x`` for random ``g`` in ``G_mu``."""
    G = slice_.group
    rng = np.random.default_rng(seed)
    worst = 0.0
    psi = moment_function(C.alpha, action)
    for s in samples:
        x = s.point if isinstance(s, CrossSectionSample) else np.asarray(s)
        for _ in range(n_elements):
            xi = slice_.g_mu @ rng.uniform(-np.pi, np.pi, slice_.g_mu.shape[1])
            y = action.act(G.exp(xi), x)
            eta = np.asarray(jets.value_of(psi(y)))
            worst = max(worst, slice_.annihilator_residual(eta),
                        0.0 if slice_.contains(eta, 1e-7) else 1.0)
    return worst


def orbit_pairing_residual(C, action, slice_, x):
    """Entrywise ``|<Psi_alpha(x), [m_i, m_j]> + d alpha(m_i,M, m_j,M)|``."""
    x = np.asarray(x, dtype=float)
    eta = moment_alpha(C, action, x)
    W = pairing_matrix(slice_, eta)
    m = slice_.m
    k = m.shape[1]
    D = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            D[i, j] = eval_d(C.alpha, x, action.induced(m[:, i], x), action.induced(m[:, j], x))
    return float(np.max(np.abs(W + D), initial=0.0))


def section_samples_as_set(samples, seed):
    return SampleSet(seed, np.array([s.point for s in samples]))
