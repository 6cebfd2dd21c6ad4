"""Principal bundles with connections and their associated contact bundles.

The associated bundle ``M = P x_G F`` is never built.  Every check runs on
``P x F`` against tangent frames orthogonal to the diagonal orbit
``g.(p, f) = (p.g^-1, g.f)``; the forms involved are basic, so these frames
model ``T_[p,f] M`` faithfully.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import jets
from .contact import moment_alpha, moment_function, verify_invariance
from .errors import (DegenerateFiberRestriction, FlowEscape, FrameExtensionFailure, NonConvergence,
                     NonFreePoint, NotContact, NotHorizontal, NotInvariant, NotInvariantFiberForm,
                     OddHorizontalDimension, RankDeficient)
from .forms import (PF_TOL, OneFormField, VectorFieldEntity, bordered_matrix, d_matrix, eval_d,
                    lie_bracket, pfaffian, relative_pfaffian)
from .geomcore import EmbeddedManifold, SampleSet, TangentFrame, pmap, product


def _null_space(M, rel_tol=1e-10):
    """Orthonormal kernel basis (columns) of ``M`` acting on column vectors."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    if M.shape[0] == 0 or n == 0:
        return np.eye(n)
    _, s, Vt = np.linalg.svd(M)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rel_tol * scale)) if s.size and s[0] > 0 else 0
    return Vt[rank:].T


def _base_projector(B, b):
    """Smooth ``I - J^T (J J^T)^-1 J`` from the base constraint Jacobian at ``b``."""
    _, J = B.constraint_jacobian(b)
    if not J.size:
        return np.eye(B.ambient_dim)
    return np.eye(B.ambient_dim) - J.T @ np.linalg.solve(J @ J.T, J)


class PrincipalBundle:
    """``G -> P -> B`` with a free right action and a connection one-form.

    The right action is ``p.g = action.act(g, p)``, which is a right action
    because shipped structure groups are tori.  ``connection`` is a
    ``OneFormField`` with ``(dim G, N_P)`` coefficients.
    """

    def __init__(self, total, group, action, base, projection, connection, name="P"):
        if not group.abelian:
            raise ValueError("structure groups must be abelian (tori)")
        self.total = total
        self.group = group
        self.action = action
        self.base = base
        self.projection = projection
        self.connection = connection
        self.name = name

    def __repr__(self):
        return f"PrincipalBundle({self.name!r})"

    def pi(self, p):
        return np.atleast_1d(np.asarray(jets.value_of(self.projection(np.asarray(p, float)))))

    def dpi(self, p):
        _, J = jets.jacobian(self.projection, p)
        return J.reshape(self.base.ambient_dim, self.total.ambient_dim)

    def A(self, p):
        return self.connection.at(p).reshape(self.group.dim, self.total.ambient_dim)

    def vertical_vector(self, xi, p):
        """``X_P(p)`` for the right action."""
        return self.action.induced(xi, p)

    def horizontal_frame(self, p):
        T = self.total.tangent_frame(p).columns
        H = T @ _null_space(self.A(p) @ T)
        return TangentFrame(np.asarray(p, float), H)

    def _lift_system(self, q):
        _, Jc = self.total.constraint_jacobian(q)
        return np.vstack([Jc, self.A(q), self.dpi(q)]), Jc.shape[0] + self.group.dim

    def horizontal_lift(self, p, u):
        """The vector in ``ker A_p`` tangent to ``P`` with ``d pi = u``.

        The defining linear system uses only ambient data at ``p``, so the lift
        of a smooth base field is smooth on a neighbourhood of ``P``.
        """
        K, k = self._lift_system(p)
        rhs = np.zeros(K.shape[0])
        rhs[k:] = u
        x, _, rank, _ = np.linalg.lstsq(K, rhs, rcond=None)
        if rank < self.total.ambient_dim:
            raise FrameExtensionFailure("horizontal lift system lost rank", witness=p)
        return x

    def connection_report(self, samples, seed=0, n_elements=5):
        """Residuals of ``A(X_P) = X``, ``R_g^* A = A``, ``pi(p.g) = pi(p)`` and rank of ``d pi``."""
        rng = np.random.default_rng(seed)
        G = self.group
        gen_res = inv_res = proj_res = 0.0
        min_rank = self.base.dim
        for p in samples:
            if G.dim:
                Xp = np.array([self.vertical_vector(e, p) for e in np.eye(G.dim)]).T
                gen_res = max(gen_res, float(np.max(np.abs(self.A(p) @ Xp - np.eye(G.dim)))))
            T = self.total.tangent_frame(p).columns
            for _ in range(n_elements):
                g = G.random_element(rng)
                Gm = self.action.matrix(g)
                q = Gm @ p
                pulled = self.A(q) @ Gm @ T
                inv_res = max(inv_res, float(np.max(np.abs(G.Ad(G.inverse(g)) @ self.A(p) @ T
                                                             - pulled), initial=0.0)))
                proj_res = max(proj_res, float(np.max(np.abs(self.pi(q) - self.pi(p)))))
            rank = np.linalg.matrix_rank(self.dpi(p) @ T, tol=1e-8)
            min_rank = min(min_rank, int(rank))
        return {"generator": gen_res, "equivariance": inv_res, "projection": proj_res,
                "dpi_rank": min_rank}


# curvature ----------------------------------------------------------------------

def curvature_structure_eq(bundle, p, u_h, v_h, tol=1e-8):
    """``dA(u#, v#) + [A(u#), A(v#)]`` for horizontal inputs."""
    Ap = bundle.A(p)
    au, av = Ap @ u_h, Ap @ v_h
    scale = max(1.0, float(np.linalg.norm(u_h)), float(np.linalg.norm(v_h)))
    if np.max(np.abs(au), initial=0.0) > tol * scale or np.max(np.abs(av), initial=0.0) > tol * scale:
        raise NotHorizontal("curvature expects horizontal vectors", witness=p)
    return eval_d(bundle.connection, p, u_h, v_h).reshape(-1) + bundle.group.bracket(au, av)


def curvature_matrix(bundle, p, frame=None):
    """Curvature on a horizontal frame: array ``(m, m, dim G)``."""
    H = bundle.horizontal_frame(p).columns if frame is None else frame
    Om = d_matrix(bundle.connection, p).reshape(bundle.group.dim, *(bundle.total.ambient_dim,) * 2)
    return np.einsum("ai,kab,bj->ijk", H, Om, H)


def base_field(bundle, u):
    """Extension of ``u`` to the constant-coefficient field projected onto ``TB``."""
    B = bundle.base
    u = np.asarray(u, dtype=float)
    return VectorFieldEntity(lambda b: _base_projector(B, b) @ u, name="v", jet=False, manifold=B)


def lifted_field(bundle, v):
    return VectorFieldEntity(lambda q: bundle.horizontal_lift(q, v(bundle.pi(q))), name="v#",
                             jet=False, manifold=bundle.total)


def curvature_bracket_def(bundle, b, u, v, p, vertical_tol=1e-7):
    """``[v#, w#] - [v, w]#`` at ``p`` over ``b``: a vertical vector.

    With the Cartan formula its connection value is ``-Curv_A(u#, v#)``.
    """
    p = np.asarray(p, dtype=float)
    b = np.asarray(b, dtype=float)
    V, W = base_field(bundle, u), base_field(bundle, v)
    Vh, Wh = lifted_field(bundle, V), lifted_field(bundle, W)
    try:
        out = lie_bracket(Vh, Wh, p) - bundle.horizontal_lift(p, lie_bracket(V, W, b))
    except np.linalg.LinAlgError as exc:
        raise FrameExtensionFailure(f"field extension failed: {exc}", witness=p) from exc
    defect = float(np.linalg.norm(bundle.dpi(p) @ out))
    if defect > vertical_tol:
        raise FrameExtensionFailure(f"bracket curvature not vertical ({defect:.2e})", witness=p)
    return out


# fatness --------------------------------------------------------------------------

@dataclass(frozen=True)
class FatnessReport:
    passed: bool
    min_abs_det: float
    min_relative_det: float
    witness_point: np.ndarray | None
    witness_mu: np.ndarray | None


def fatness_matrix(bundle, p, mu, frame=None):
    Om = curvature_matrix(bundle, p, frame)
    return Om @ np.asarray(mu, dtype=float), Om


def fatness_check(bundle, mu_set, samples, fat_tol=1e-6, threads=None):
    """``min |det <mu, Curv_A>|`` over horizontal frames.

    PASS iff ``|det| / (|mu| s)^m > fat_tol`` everywhere, where the scale ``s`` is
    the larger of ``|Curv_A|_F / sqrt(m)`` and the size of ``A`` on ``T_p P``.
    The second term keeps round-off curvature of a flat connection from
    normalising itself to order one.
    """
    if bundle.base.dim % 2:
        raise OddHorizontalDimension(f"horizontal dimension {bundle.base.dim} is odd")
    pts = np.asarray(samples.points if isinstance(samples, SampleSet) else samples)
    mus = np.atleast_2d(np.asarray(mu_set, dtype=float))
    m = bundle.base.dim

    def at_point(p):
        Om = curvature_matrix(bundle, p)
        T = bundle.total.tangent_frame(p).columns
        s = max(float(np.linalg.norm(Om)) / np.sqrt(max(m, 1)),
                float(np.linalg.norm(bundle.A(p) @ T)))
        out = []
        for mu in mus:
            det = float(np.linalg.det(Om @ mu)) if m else 1.0
            scale = (float(np.linalg.norm(mu)) * s) ** m
            out.append((abs(det), abs(det) / scale if scale > 0 else 0.0))
        return out

    res = pmap(at_point, pts, threads)
    dets = np.array([[r[0] for r in row] for row in res])
    rels = np.array([[r[1] for r in row] for row in res])
    i, j = np.unravel_index(int(np.argmin(rels)), rels.shape)
    passed = bool(rels[i, j] > fat_tol)
    return FatnessReport(passed, float(dets.min()), float(rels[i, j]),
                         None if passed else pts[i], None if passed else mus[j])


# associated bundles ---------------------------------------------------------------

class OrbitComplement(EmbeddedManifold):
    """``P x F`` whose tangent frames are orthogonal to the diagonal orbits."""

    def __init__(self, prod, orbit_generators, name):
        super().__init__(prod.ambient_dim, prod.constraint, prod.codim, name=name,
                         constraint_tol=prod.constraint_tol, rank_tol=prod.rank_tol)
        self.product = prod
        self.blocks = prod.blocks
        self.orbit_generators = list(orbit_generators)

    @property
    def dim(self):
        return self.ambient_dim - self.codim - len(self.orbit_generators)

    def orbit_vectors(self, x):
        x = np.asarray(x, dtype=float)
        if not self.orbit_generators:
            return np.zeros((x.size, 0))
        return np.stack([G @ x for G in self.orbit_generators], axis=1)

    def tangent_frame(self, x):
        T = self.product.tangent_frame(x).columns
        O = T.T @ self.orbit_vectors(x)
        if O.shape[1]:
            s = np.linalg.svd(O, compute_uv=False)
            if s[-1] <= 1e-8 * max(s[0], 1.0):
                raise NonFreePoint("diagonal action is not free here", witness=x)
        return TangentFrame(np.asarray(x, float), T @ _null_space(O.T))


class AssociatedContactBundle:
    def __init__(self, bundle, fiber, fiber_action, alpha_tot, total):
        self.bundle = bundle
        self.fiber = fiber  # ContactStructure on F
        self.fiber_action = fiber_action
        self.alpha_tot = alpha_tot
        self.total = total  # OrbitComplement
        self.np = bundle.total.ambient_dim
        self.psi = moment_function(fiber.alpha, fiber_action)

    def __repr__(self):
        return f"AssociatedContactBundle({self.total.name!r})"

    def split(self, x):
        x = np.asarray(x, dtype=float)
        return x[: self.np], x[self.np:]

    def join(self, p, f):
        return np.concatenate([p, f])

    def pi(self, x):
        return self.bundle.pi(self.split(x)[0])

    def dpi(self, x):
        return np.hstack([self.bundle.dpi(self.split(x)[0]),
                          np.zeros((self.bundle.base.ambient_dim, x.size - self.np))])

    def diagonal_generator(self, xi, x):
        """``X_{P x F}(p, f) = (-X_P(p), X_F(f))``."""
        p, f = self.split(x)
        return np.concatenate([-self.bundle.vertical_vector(xi, p),
                               self.fiber_action.induced(xi, f)])

    def horizontal_lift(self, x, u):
        """``(u#_p, 0)``: the A-horizontal lift in ``T(P x F)``."""
        p, f = self.split(x)
        return np.concatenate([self.bundle.horizontal_lift(p, u), np.zeros_like(f)])

    def quotient_frame(self, x):
        return self.total.tangent_frame(x).columns

    def vertical_basis(self, x, frame=None):
        """Directions of the quotient frame tangent to the fibres of ``M -> B``."""
        Q = self.quotient_frame(x) if frame is None else frame
        return Q @ _null_space(self.dpi(x) @ Q)

    def sigma(self, x, u, v, scale=1.0):
        """``sigma_H`` at ``(x, scale * alpha)``: the restriction of ``d alpha_M`` to ``H``."""
        return scale * eval_d(self.alpha_tot, x, self.horizontal_lift(x, u),
                              self.horizontal_lift(x, v))

    def sigma_via_curvature(self, x, u, v, scale=1.0):
        """``<Psi(f, scale * alpha_F), Curv_A(u#, v#)>``, computed on ``P`` and ``F`` separately."""
        p, f = self.split(x)
        uh, vh = self.bundle.horizontal_lift(p, u), self.bundle.horizontal_lift(p, v)
        psi = scale * moment_alpha(self.fiber, self.fiber_action, f)
        return float(psi @ curvature_structure_eq(self.bundle, p, uh, vh))


def assemble_alpha_tot(bundle, fiber, fiber_action, invariance_samples=None, seed=0):
    """``alpha_(p,f) = <Psi_{alpha_F}(f), A_p> + (alpha_F)_f`` on ``P x F``."""
    try:
        verify_invariance(fiber, fiber_action, invariance_samples, seed=seed)
    except NotInvariant as exc:
        err = NotInvariantFiberForm(f"fibre form not invariant: {exc}", witness=exc.witness,
                                    value=exc.value)
        raise err from exc
    NP = bundle.total.ambient_dim
    d = bundle.group.dim
    psi = moment_function(fiber.alpha, fiber_action)
    A, aF = bundle.connection.coeffs, fiber.alpha.coeffs

    def coeffs(x):
        p, f = x[:NP], x[NP:]
        head = psi(f) @ A(p) if d else np.zeros(NP)
        return jets.concatenate([head, aF(f)])

    prod = product(bundle.total, fiber.manifold, name=f"{bundle.total.name} x {fiber.manifold.name}")
    gens = []
    for e in np.eye(d):
        gens.append(scipy.linalg.block_diag(-bundle.action.generator(e),
                                            fiber_action.generator(e)))
    total = OrbitComplement(prod, gens,
                            name=f"{bundle.name} x_G {fiber.manifold.name}")
    alpha = OneFormField(coeffs, name="alpha_M")
    return AssociatedContactBundle(bundle, fiber, fiber_action, alpha, total)


def basic_residual(assoc, x):
    """``max_X |iota(X_{P x F}) alpha_tot|`` at ``x``."""
    G = assoc.bundle.group
    if not G.dim:
        return 0.0
    a = assoc.alpha_tot.at(x)
    return float(max(abs(a @ assoc.diagonal_generator(e, x)) for e in np.eye(G.dim)))


def fiber_restriction_residual(assoc, x, w):
    """``alpha_tot(0 + w) - alpha_F(w)`` for a fibre-tangent ``w``."""
    p, f = assoc.split(x)
    lhs = assoc.alpha_tot(x, np.concatenate([np.zeros_like(p), w]))
    return float(lhs - assoc.fiber.alpha(f, w))


def quotient_frame(assoc, p, f):
    return assoc.quotient_frame(assoc.join(p, f))


@dataclass(frozen=True)
class AssociatedContactReport:
    passed: bool
    min_abs_pfaffian: float
    min_relative_pfaffian: float
    sigma_identity_error: float
    witness: np.ndarray | None


def _pf_q(assoc, x):
    Q = assoc.quotient_frame(x)
    B = bordered_matrix(assoc.alpha_tot, x, Q)
    pf = pfaffian(B)
    return pf, relative_pfaffian(B, pf)


def sigma_identity_errors(assoc, samples, count=200, seed=0):
    """Max ``|sigma_H - <Psi(f, eta), Curv_A(u#, v#)>|`` over random triples."""
    pts = np.asarray(samples)
    rng = np.random.default_rng(seed)
    B = assoc.bundle.base
    worst = 0.0
    if not assoc.bundle.group.dim or B.dim == 0:
        return 0.0
    for k in range(count):
        x = pts[k % len(pts)]
        b = assoc.pi(x)
        T = B.tangent_frame(b).columns
        u, v = T @ rng.standard_normal(B.dim), T @ rng.standard_normal(B.dim)
        s = float(10.0 ** rng.uniform(-2, 2))
        worst = max(worst, abs(assoc.sigma(x, u, v, s) - assoc.sigma_via_curvature(x, u, v, s)))
    return worst


def verify_contact_associated(assoc, samples, pf_tol=PF_TOL, sigma_tol=1e-6, sigma_count=200,
                              seed=0, threads=None, raise_on_fail=True):
    """Bordered Pfaffian of ``alpha_tot`` on the quotient frame at each sample,
    plus the identity ``sigma_H = <Psi(f, eta), Curv_A(u#, v#)>``."""
    pts = np.asarray(samples.points if isinstance(samples, SampleSet) else samples)
    vals = pmap(lambda x: _pf_q(assoc, x), pts, threads)
    pfs = np.array([v[0] for v in vals])
    rel = np.array([v[1] for v in vals])
    i = int(np.argmin(rel))
    sig = sigma_identity_errors(assoc, pts, sigma_count, seed)
    passed = bool(rel[i] >= pf_tol and sig <= sigma_tol)
    rep = AssociatedContactReport(passed, float(np.min(np.abs(pfs))), float(rel[i]), sig,
                                  None if passed else pts[i])
    if raise_on_fail and not passed:
        raise NotContact(f"alpha_M degenerates (relative |Pf| = {rel[i]:.3e}, "
                         f"sigma error {sig:.2e})", witness=pts[i], value=float(abs(pfs[i])),
                         report=rep)
    return rep


# contact connection and transport ------------------------------------------------

def contact_connection(M, alpha, vertical_basis, m, frame=None, tol=1e-8):
    """The ``d alpha``-orthogonal complement of ``xi^nu = xi cap V`` inside ``xi``.

    ``vertical_basis`` spans ``ker d pi`` inside the tangent space.  Returns an
    orthonormal ambient basis (columns) of the horizontal space.
    """
    m = np.asarray(m, dtype=float)
    T = M.tangent_frame(m).columns if frame is None else np.asarray(frame, dtype=float)
    V = np.asarray(vertical_basis, dtype=float)
    a = alpha.at(m)
    Om = d_matrix(alpha, m)
    Xi = T @ _null_space((a @ T)[None, :])
    Xn = V @ _null_space((a @ V)[None, :])
    Wn = Xn.T @ Om @ Xn
    if Wn.shape[0] % 2 or (Wn.size and relative_pfaffian(Wn) < tol):
        raise DegenerateFiberRestriction("d alpha is degenerate on the fibre contact planes",
                                         witness=m)
    C = _null_space((Xi.T @ Om @ Xn).T)
    H, _ = np.linalg.qr(Xi @ C)
    return H


def horizontal_from_connection(assoc, x):
    """The A-induced horizontal space, as quotient representatives (orthonormal columns)."""
    Q = assoc.quotient_frame(x)
    p, _ = assoc.split(x)
    Hp = assoc.bundle.horizontal_frame(p).columns
    lifted = np.vstack([Hp, np.zeros((x.size - assoc.np, Hp.shape[1]))])
    H, _ = np.linalg.qr(Q @ (Q.T @ lifted))
    return H


def max_principal_angle(U, V):
    if U.shape[1] == 0 and V.shape[1] == 0:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(U, V)))


def associated_contact_connection(assoc, x, alpha=None):
    alpha = assoc.alpha_tot if alpha is None else alpha
    Q = assoc.quotient_frame(x)
    return contact_connection(assoc.total, alpha, assoc.vertical_basis(x, Q), x, frame=Q)


def great_circle(b0, b1_dir, angle=2 * np.pi):
    """Arc ``t -> cos(angle t) b0 + sin(angle t) b1`` on the unit sphere, ``t in [0, 1]``."""
    b0 = np.asarray(b0, dtype=float)
    b1 = np.asarray(b1_dir, dtype=float)
    b1 = b1 - (b1 @ b0) * b0
    b1 = b1 / np.linalg.norm(b1)

    def path(t):
        c, s = np.cos(angle * t), np.sin(angle * t)
        return c * b0 + s * b1, angle * (-s * b0 + c * b1)

    return path


def _transport_velocity(assoc, x, bdot):
    H = associated_contact_connection(assoc, x)
    coef, *_ = np.linalg.lstsq(assoc.dpi(x) @ H, bdot, rcond=None)
    return H @ coef


def parallel_transport(assoc, path, x0, steps=1000):
    """Transport ``x0`` along ``path`` (``t -> (gamma(t), gamma'(t))`` on ``[0, 1]``)
    with the contact connection of ``alpha_tot``; RK4, projected onto ``P x F``."""
    x = np.array(x0, dtype=float)
    h = 1.0 / steps
    M = assoc.total.product
    for k in range(steps):
        t = k * h
        k1 = _transport_velocity(assoc, x, path(t)[1])
        k2 = _transport_velocity(assoc, x + 0.5 * h * k1, path(t + 0.5 * h)[1])
        k3 = _transport_velocity(assoc, x + 0.5 * h * k2, path(t + 0.5 * h)[1])
        k4 = _transport_velocity(assoc, x + h * k3, path(t + h)[1])
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        try:
            x = M.project(x)
        except (NonConvergence, RankDeficient) as exc:
            raise FlowEscape(f"transport left P x F: {exc}", witness=x) from exc
    return x


@dataclass(frozen=True)
class TransportReport:
    endpoint: np.ndarray
    base_error: float
    max_hyperplane_angle: float
    coorientation_values: tuple
    coorientation_preserved: bool


def transport_report(assoc, path, x0, steps=1000, eps=1e-5):
    """Transport ``x0`` and the fibre contact plane at ``x0`` (variational equation by
    central differences of transported neighbours)."""
    x0 = np.asarray(x0, dtype=float)
    M = assoc.total.product
    x1 = parallel_transport(assoc, path, x0, steps)
    base_err = float(np.linalg.norm(assoc.pi(x1) - path(1.0)[0]))

    Q0 = assoc.quotient_frame(x0)
    V0 = assoc.vertical_basis(x0, Q0)
    a0 = assoc.alpha_tot.at(x0)
    Xn = V0 @ _null_space((a0 @ V0)[None, :])
    # a vertical vector on the positive side of the fibre contact plane
    r = V0 @ (a0 @ V0)

    def push(w):
        up = parallel_transport(assoc, path, M.project(x0 + eps * w), steps)
        dn = parallel_transport(assoc, path, M.project(x0 - eps * w), steps)
        return (up - dn) / (2 * eps)

    Q1 = assoc.quotient_frame(x1)
    a1 = assoc.alpha_tot.at(x1)
    a1n = float(np.linalg.norm(a1 @ Q1))
    angles = []
    for j in range(Xn.shape[1]):
        v = Q1 @ (Q1.T @ push(Xn[:, j]))
        angles.append(abs(a1 @ v) / (a1n * np.linalg.norm(v)))
    cov = a1 @ push(r)
    return TransportReport(x1, base_err, float(max(angles, default=0.0)), (float(a0 @ r), float(cov)),
                           bool(cov > 0))
