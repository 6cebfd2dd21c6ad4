"""Contact structures, invariance under group actions, and contact moment maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import EvenDimension, NotContact, NotInvariant
from .forms import PF_TOL, bordered_matrix, eval_d, pfaffian, relative_pfaffian
from .geomcore import SampleSet, pmap


@dataclass(frozen=True)
class ContactStructure:
    manifold: object
    alpha: object
    verified_samples: SampleSet
    min_abs_pfaffian: float
    min_relative_pfaffian: float
    pfaffian_signs: tuple = field(default=())

    @property
    def dim(self):
        return self.manifold.dim


@dataclass(frozen=True)
class CoorientedAnnihilatorPoint:
    """The covector ``scale * alpha_m`` in the positive annihilator component."""

    point: np.ndarray
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be strictly positive, got {self.scale}")


@dataclass(frozen=True)
class ContactReport:
    passed: bool
    min_abs_pfaffian: float
    min_relative_pfaffian: float
    witness: np.ndarray | None
    signs: tuple = ()


def _pf_at(alpha, M, p):
    F = M.tangent_frame(p).columns
    B = bordered_matrix(alpha, p, F)
    pf = pfaffian(B)
    return pf, relative_pfaffian(B, pf)


def contact_sweep(M, alpha, samples, pf_tol=PF_TOL, threads=None):
    if M.dim % 2 == 0:
        raise EvenDimension(f"{M.name} has even dimension {M.dim}")
    pts = np.asarray(samples.points if isinstance(samples, SampleSet) else samples)
    vals = pmap(lambda p: _pf_at(alpha, M, p), pts, threads)
    pfs = np.array([v[0] for v in vals])
    rel = np.array([v[1] for v in vals])
    i = int(np.argmin(rel))
    passed = bool(rel[i] >= pf_tol)
    signs = tuple(sorted({int(np.sign(v)) for v in pfs}))
    return ContactReport(passed, float(np.min(np.abs(pfs))), float(rel[i]),
                         None if passed else pts[i], signs)


def verify_contact(M, alpha, samples, pf_tol=PF_TOL, threads=None):
    """Check the bordered Pfaffian at every sample; raise ``NotContact`` at the worst one."""
    rep = contact_sweep(M, alpha, samples, pf_tol, threads)
    if not rep.passed:
        raise NotContact(f"{alpha.name} degenerates on {M.name} "
                         f"(relative |Pf| = {rep.min_relative_pfaffian:.3e})",
                         witness=rep.witness, value=rep.min_abs_pfaffian)
    if not isinstance(samples, SampleSet):
        samples = SampleSet(seed=-1, points=np.asarray(samples))
    return ContactStructure(M, alpha, samples, rep.min_abs_pfaffian, rep.min_relative_pfaffian,
                            rep.signs)


@dataclass(frozen=True)
class InvarianceReport:
    max_residual: float
    witness_point: np.ndarray | None
    witness_element: np.ndarray | None


def verify_invariance(C, action, samples=None, n_elements=20, seed=0, tol=1e-8, threads=None):
    """Max over samples and random ``g`` of ``|(g^* alpha - alpha)_p|`` on ``T_p M``."""
    M, alpha = C.manifold, C.alpha
    if samples is None:
        samples = C.verified_samples
    pts = np.asarray(samples.points if isinstance(samples, SampleSet) else samples)
    rng = np.random.default_rng(seed)
    elements = [action.group.random_element(rng) for _ in range(n_elements)]
    mats = [action.matrix(g) for g in elements]

    def worst(p):
        F = M.tangent_frame(p).columns
        a0 = alpha.at(p) @ F
        best = (0.0, -1)
        for k, G in enumerate(mats):
            r = float(np.max(np.abs(alpha.at(G @ p) @ G @ F - a0))) if F.size else 0.0
            if r > best[0]:
                best = (r, k)
        return best

    res = pmap(worst, pts, threads)
    i = int(np.argmax([r[0] for r in res])) if len(res) else 0
    r, k = res[i] if res else (0.0, -1)
    wit_g = elements[k] if k >= 0 else None
    if r > tol:
        raise NotInvariant(f"{alpha.name} is not invariant under {action.name}: "
                           f"residual {r:.3e}", witness=pts[i], value=r, element=wit_g)
    return InvarianceReport(r, pts[i] if len(pts) else None,
                            None if wit_g is None else np.asarray(wit_g))


def moment_function(alpha, action):
    """Jet-evaluable ``x -> Psi_alpha(x)`` in dual-basis coordinates."""
    gens = [action.generator(e) for e in np.eye(action.group.dim)]

    def psi(x):
        if not gens:
            return np.zeros(0)
        a = alpha.coeffs(x)
        return jets.stack([a @ (G @ x) for G in gens])

    return psi


def moment_alpha(C, action, x):
    """``<Psi_alpha(x), X_i> = alpha_x((X_i)_M(x))``."""
    return np.asarray(jets.value_of(moment_function(C.alpha, action)(np.asarray(x, float))))


def moment_universal(C, action, pt):
    """Moment map on the positive annihilator: homogeneous of degree one in the scale."""
    return pt.scale * moment_alpha(C, action, pt.point)


def orbit_two_form_identity(C, action, x, xi, eta):
    """``(d alpha(X_M, Y_M)(x), -<Psi_alpha(x), [X, Y]>)``."""
    x = np.asarray(x, dtype=float)
    lhs = eval_d(C.alpha, x, action.induced(xi, x), action.induced(eta, x))
    rhs = -moment_alpha(C, action, x) @ action.group.bracket(xi, eta)
    return float(lhs), float(rhs)


def moment_equivariance_residual(C, action, samples, n_elements=20, seed=0):
    """``max |Psi(g x) - Ad^dagger(g) Psi(x)|`` over samples and random ``g``."""
    G = action.group
    rng = np.random.default_rng(seed)
    worst = 0.0
    for x in np.asarray(samples):
        psi = moment_alpha(C, action, x)
        for _ in range(n_elements):
            g = G.random_element(rng)
            lhs = moment_alpha(C, action, action.act(g, x))
            worst = max(worst, float(np.max(np.abs(lhs - G.coadjoint(g, psi)), initial=0.0)))
    return worst
