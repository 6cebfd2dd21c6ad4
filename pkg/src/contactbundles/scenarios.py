"""Scenario registry: each scenario builds its geometry and returns check records.

A check record is a dict ``{name, status, value, threshold, comparison, witness}``.
``status`` is ``"PASS"`` or ``"FAIL"`` and is derivable from the other fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bundles as bd
from . import contact as ct
from . import crosssection as cs
from . import jets
from . import kcontact as kc
from . import models as md
from .errors import NotInvariantFiberForm
from .forms import reeb, reeb_residual
from .geomcore import ellipsoid, euclidean, sphere
from .liealg import coordinate_torus_action, diagonal_circle_action, su2_action

TOLERANCES = {
    "pf": 1e-8,
    "reeb": 1e-8,
    "reeb_exact": 1e-12,
    "invariance": 1e-8,
    "equivariance": 1e-8,
    "orbit": 1e-7,
    "connection": 1e-9,
    "fat": 1e-6,
    "curvature": 1e-6,
    "basic": 1e-9,
    "sigma": 1e-6,
    "angle": 1e-7,
    "base": 1e-6,
    "transport_angle": 1e-4,
    "killing": 1e-4,
    "killing_round": 1e-5,
    "vertical": 1e-7,
    "metric": 1e-8,
    "fiber_dependence": 1e-3,
    "splitting": 1e-7,
    "membership": 1e-7,
}

DEFAULT_SAMPLES = {
    "std_contact": 500,
    "hopf_fatness": 100,
    "assoc_contact": 500,
    "parallel_transport": 1000,
    "yamazaki_n1": 20,
    "yamazaki_n2": 20,
    "kcontact_killing": 500,
    "cross_section_su2_s3": 20,
    "cross_section_su2_s5": 50,
    "negative_controls": 50,
}


@dataclass
class ScenarioConfig:
    scenario: str
    seed: int = 42
    samples: int | None = None
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    threads: int | None = None

    def tol(self, name):
        return float(self.tolerances.get(name, TOLERANCES[name]))

    def count(self):
        return int(self.samples if self.samples is not None else DEFAULT_SAMPLES[self.scenario])

    def echo(self):
        return {"scenario": self.scenario, "seed": self.seed, "samples": self.count(),
                "tolerances": {k: self.tol(k) for k in sorted(TOLERANCES)}}


_OPS = {
    "<=": lambda v, t: v <= t,
    "<": lambda v, t: v < t,
    ">": lambda v, t: v > t,
    ">=": lambda v, t: v >= t,
    "==": lambda v, t: v == t,
}


def _plain(x):
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        v = float(arr)
        return v if np.isfinite(v) else None
    return [_plain(v) for v in arr]


def check(name, value, threshold, comparison="<=", witness=None):
    ok = bool(_OPS[comparison](value, threshold))
    return {"name": name, "status": "PASS" if ok else "FAIL", "value": _plain(value),
            "threshold": _plain(threshold), "comparison": comparison,
            "witness": None if ok else _plain(witness)}


def flag(name, ok, witness=None):
    """A boolean check: ``value`` is the outcome, the threshold ``True``."""
    return check(name, bool(ok), True, "==", witness)


def _identity_residual(r):
    """Largest compatible-metric identity residual (everything but the eigenvalue floor)."""
    return max(v for k, v in r.items() if k != "min_eig")


# shared builders ----------------------------------------------------------------

def hopf_associated(a, seed, fiber_count=50):
    """Hopf bundle with fibre ``(E_a, alpha_std)`` under the diagonal circle."""
    a = np.asarray(a, dtype=float)
    E = ellipsoid(a)
    C = ct.verify_contact(E, md.standard_form(a.size), kc.fiber_samples(E, fiber_count, seed))
    act = diagonal_circle_action(E, a.size)
    return bd.assemble_alpha_tot(md.hopf_bundle(), C, act, seed=seed)


def flat_associated(seed, fiber_count=50):
    S3 = sphere(3)
    C = ct.verify_contact(S3, md.standard_form(2), S3.sample(fiber_count, seed))
    return bd.assemble_alpha_tot(md.flat_circle_bundle(), C, diagonal_circle_action(S3, 2),
                                 seed=seed)


def moment_images(assoc, points):
    return np.array([ct.moment_alpha(assoc.fiber, assoc.fiber_action, assoc.split(x)[1])
                     for x in points])


def fatness_and_contact(cfg, assoc, X, label):
    """Fatness on the moment images of the samples, contactness of ``alpha_tot``, and their agreement."""
    mus = moment_images(assoc, X)
    # exploit scale invariance: a log-uniform grid of positive multiples
    rng = np.random.default_rng(cfg.seed)
    mus = mus * (10.0 ** rng.uniform(-2, 2, size=(len(mus), 1)))
    P_pts = np.array([assoc.split(x)[0] for x in X])
    fat = bd.fatness_check(assoc.bundle, mus, P_pts, fat_tol=cfg.tol("fat"), threads=cfg.threads)
    rep = bd.verify_contact_associated(assoc, X, pf_tol=cfg.tol("pf"), sigma_tol=cfg.tol("sigma"),
                                       seed=cfg.seed, threads=cfg.threads, raise_on_fail=False)
    return fat, rep, [
        check(f"{label}: fatness on moment image", fat.min_relative_det, cfg.tol("fat"), ">",
              None if fat.witness_point is None else fat.witness_point),
        check(f"{label}: contact Pfaffian of alpha_M", rep.min_relative_pfaffian, cfg.tol("pf"),
              ">=", rep.witness),
        check(f"{label}: sigma_H equals moment-curvature pairing", rep.sigma_identity_error,
              cfg.tol("sigma"), "<=", rep.witness),
        flag(f"{label}: fatness outcome equals contact outcome", fat.passed == rep.passed,
             rep.witness if rep.witness is not None else fat.witness_point),
    ]


# scenarios -------------------------------------------------------------------------

def run_std_contact(cfg):
    n = cfg.count()
    seed = cfg.seed
    out = []
    # Euclidean spaces
    for k in (1, 2, 3):
        R = euclidean(2 * k + 1)
        rep = ct.contact_sweep(R, md.darboux_form(k), R.sample(n, seed), cfg.tol("pf"),
                               cfg.threads)
        out.append(check(f"contact: dz - y dx on R^{2 * k + 1}", rep.min_relative_pfaffian,
                         cfg.tol("pf"), ">=", rep.witness))
    R3 = euclidean(3)
    p = R3.sample(1, seed).points[0]
    r = reeb(md.darboux_form(), R3, p)
    out.append(check("reeb: e_z on R^3", float(np.max(np.abs(r - [0, 0, 1.0]))),
                     cfg.tol("reeb_exact"), "<=", p))
    # spheres and an ellipsoid
    mans = [(sphere(2 * k - 1), md.standard_form(k)) for k in (1, 2, 3)]
    mans.append((ellipsoid([1, 2, 3]), md.standard_form(3)))
    structures = {}
    for M, alpha in mans:
        S = M.sample(n, seed)
        rep = ct.contact_sweep(M, alpha, S, cfg.tol("pf"), cfg.threads)
        out.append(check(f"contact: alpha_std on {M.name}", rep.min_relative_pfaffian,
                         cfg.tol("pf"), ">=", rep.witness))
        if rep.passed:
            structures[M.name] = ct.verify_contact(M, alpha, S, cfg.tol("pf"), cfg.threads)
    for name in ("S^3", "S^5", "E_(1,2,3)"):
        C = structures[name]
        worst, wit = 0.0, None
        for x in C.verified_samples:
            v = reeb_residual(C.alpha, C.manifold, x, reeb(C.alpha, C.manifold, x))
            if v > worst:
                worst, wit = v, x
        out.append(check(f"reeb: linear-solve residual on {name}", worst, cfg.tol("reeb"), "<=",
                         wit))
    # invariance and moment maps
    S3, S5, E = structures["S^3"], structures["S^5"], structures["E_(1,2,3)"]
    few = S3.verified_samples.points[:50]
    for C, act in ((S3, coordinate_torus_action(S3.manifold, 2)),
                   (S5, coordinate_torus_action(S5.manifold, 3)),
                   (S3, su2_action(S3.manifold, 2))):
        r = ct.verify_invariance(C, act, C.verified_samples.points[:50], seed=seed,
                                 tol=np.inf, threads=cfg.threads)
        out.append(check(f"invariance: {act.name} on {C.manifold.name}", r.max_residual,
                         cfg.tol("invariance"), "<=", r.witness_point))
        eq = ct.moment_equivariance_residual(C, act, C.verified_samples.points[:20], seed=seed)
        out.append(check(f"moment equivariance: {act.name} on {C.manifold.name}", eq,
                         cfg.tol("equivariance"), "<="))
    circ = diagonal_circle_action(S3.manifold, 2)
    vals = np.array([ct.moment_alpha(S3, circ, x)[0] for x in few])
    out.append(check("moment: diagonal circle on S^3 is the constant 2",
                     float(np.max(np.abs(vals - 2.0))), cfg.tol("equivariance"), "<="))
    tor = coordinate_torus_action(E.manifold, 3)
    psi = np.array([ct.moment_alpha(E, tor, x) for x in E.verified_samples.points])
    out.append(check("moment: E_(1,2,3) image in the hyperplane sum a_j t_j = 2",
                     float(np.max(np.abs(psi @ [1.0, 2.0, 3.0] - 2.0))), cfg.tol("equivariance"),
                     "<="))
    out.append(check("moment: E_(1,2,3) image in the positive orthant", float(psi.min()), 0.0,
                     ">="))
    act = su2_action(S3.manifold, 2)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for x in S3.verified_samples.points[:100]:
        i, j = rng.integers(0, 3, size=2)
        lhs, rhs = ct.orbit_two_form_identity(S3, act, x, np.eye(3)[i], np.eye(3)[j])
        worst = max(worst, abs(lhs - rhs))
    out.append(check("orbit two-form identity: SU(2) on S^3", worst, cfg.tol("orbit"), "<="))
    return out


def run_hopf_fatness(cfg):
    n = cfg.count()
    H = md.hopf_bundle()
    S = H.total.sample(n, cfg.seed)
    out = []
    rep = H.connection_report(S.points[:20], seed=cfg.seed)
    out.append(check("connection: A reproduces the generator", rep["generator"],
                     cfg.tol("connection"), "<="))
    out.append(check("connection: right-action equivariance", rep["equivariance"],
                     cfg.tol("invariance"), "<="))
    out.append(check("connection: d pi has full rank", rep["dpi_rank"], H.base.dim, "=="))
    for mu in (1.0, -1.0, 0.37):
        fat = bd.fatness_check(H, [[mu]], S, fat_tol=cfg.tol("fat"), threads=cfg.threads)
        out.append(check(f"fatness: Hopf at mu = {mu:g}", fat.min_relative_det, cfg.tol("fat"),
                         ">", fat.witness_point))
    # structure equation against the bracket definition, paired with mu = 1
    rng = np.random.default_rng(cfg.seed)
    worst, wit, anti = 0.0, None, 0.0
    for p in S.points:
        b = H.pi(p)
        T = H.base.tangent_frame(b).columns
        u, v = T @ rng.standard_normal(2), T @ rng.standard_normal(2)
        s_eq = float(bd.curvature_structure_eq(H, p, H.horizontal_lift(p, u),
                                               H.horizontal_lift(p, v))[0])
        V = bd.curvature_bracket_def(H, b, u, v, p)
        Vr = bd.curvature_bracket_def(H, b, v, u, p)
        br = -float((H.A(p) @ V)[0])
        anti = max(anti, float(np.max(np.abs(V + Vr))))
        if abs(s_eq - br) > worst:
            worst, wit = abs(s_eq - br), p
    out.append(check("curvature: structure equation vs bracket definition", worst,
                     cfg.tol("curvature"), "<=", wit))
    out.append(check("curvature: bracket definition antisymmetric", anti, cfg.tol("curvature"),
                     "<="))
    assoc = hopf_associated([1.0, 1.0], cfg.seed)
    X = kc.total_samples(assoc, min(n, 100), cfg.seed + 1)
    out += fatness_and_contact(cfg, assoc, X, "Hopf x S^3")[2]
    return out


def run_assoc_contact(cfg):
    n = cfg.count()
    assoc = hopf_associated([1.0, 2.0], cfg.seed)
    X = kc.total_samples(assoc, n, cfg.seed + 1)
    out = []
    basic = max(bd.basic_residual(assoc, x) for x in X)
    out.append(check("basic: iota(X_{P x F}) alpha_M", basic, cfg.tol("basic"), "<="))
    rng = np.random.default_rng(cfg.seed)
    fr = 0.0
    for x in X:
        f = assoc.split(x)[1]
        w = assoc.fiber.manifold.tangent_frame(f).columns @ rng.standard_normal(3)
        fr = max(fr, abs(bd.fiber_restriction_residual(assoc, x, w)))
    out.append(check("fibre restriction: alpha_M(0 + w) = alpha_F(w)", fr, 0.0, "<="))
    dims = {assoc.quotient_frame(x).shape[1] for x in X[:20]}
    out.append(check("quotient frame dimension", dims.pop() if len(dims) == 1 else -1, 5, "=="))
    out += fatness_and_contact(cfg, assoc, X[:100], "Hopf x E_(1,2)")[2]
    # contact connection against the connection-induced horizontal space
    f_conf = lambda y: 0.3 * jets.sin(y[0] + 2 * y[5]) + 0.2 * y[1] * y[6]  # noqa: E731
    alpha2 = assoc.alpha_tot.scaled(f_conf)
    worst, worst2, wit = 0.0, 0.0, None
    for x in X[:50]:
        Hc = bd.associated_contact_connection(assoc, x)
        Ha = bd.horizontal_from_connection(assoc, x)
        Hs = bd.associated_contact_connection(assoc, x, alpha2)
        ang = bd.max_principal_angle(Hc, Ha)
        if ang > worst:
            worst, wit = ang, x
        worst2 = max(worst2, bd.max_principal_angle(Hc, Hs))
    out.append(check("contact connection equals connection-induced horizontal space", worst,
                     cfg.tol("angle"), "<=", wit))
    out.append(check("contact connection invariant under alpha -> e^f alpha", worst2,
                     cfg.tol("angle"), "<="))
    return out


def transport_start(assoc, fiber_point):
    p0 = np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2.0)
    return assoc.total.product.project(assoc.join(p0, fiber_point))


def run_parallel_transport(cfg):
    steps = cfg.count()
    assoc = hopf_associated([1.0, 2.0], cfg.seed)
    f0 = assoc.fiber.manifold.sample(1, cfg.seed).points[0]
    x0 = transport_start(assoc, f0)
    path = bd.great_circle(assoc.pi(x0), np.array([0.0, 1.0, 0.0]))
    rep = bd.transport_report(assoc, path, x0, steps=steps)
    out = [
        check("transport: endpoint lies over the loop end", rep.base_error, cfg.tol("base"), "<=",
              rep.endpoint),
        check("transport: fibre contact hyperplane preserved", rep.max_hyperplane_angle,
              cfg.tol("transport_angle"), "<=", rep.endpoint),
        check("transport: co-orientation preserved", rep.coorientation_values[1], 0.0, ">",
              rep.endpoint),
    ]
    const = lambda t: (assoc.pi(x0), np.zeros(3))  # noqa: E731
    x1 = bd.parallel_transport(assoc, const, x0, steps=10)
    out.append(check("transport: constant path is the identity",
                     float(np.max(np.abs(x1 - x0))), cfg.tol("base"), "<="))
    return out


def _yamazaki(cfg, bundle, a, label, fiber_dep):
    n = cfg.count()
    Y = kc.build_yamazaki_scenario(bundle, a, samples=n, seed=cfg.seed, threads=cfg.threads,
                                   raise_on_fail=False)
    out = [
        check(f"{label}: fatness on the moment simplex", Y.fatness.min_relative_det,
              cfg.tol("fat"), ">", Y.fatness.witness_point),
        check(f"{label}: contact Pfaffian of alpha_M", Y.contact.min_relative_pfaffian,
              cfg.tol("pf"), ">=", Y.contact.witness),
        check(f"{label}: sigma_H equals moment-curvature pairing",
              Y.contact.sigma_identity_error, cfg.tol("sigma"), "<="),
    ]
    a = np.asarray(a, dtype=float)
    X_gen = a / 2.0 if Y.fiber_action.group.dim == a.size else np.ones(1)
    pos = kc.positivity_check(Y.fiber, Y.fiber_action, X_gen)
    out.append(check(f"{label}: positivity of <Psi, X> on the fibre", pos.minimum, 0.0, ">",
                     pos.witness))
    X = kc.total_samples(Y.assoc, n, cfg.seed + 3, kc.fiber_samples(Y.fiber.manifold, n,
                                                                       cfg.seed + 4))
    res = [Y.metric.invariant_residuals(x) for x in X]
    worst = max(_identity_residual(r) for r in res)
    out.append(check(f"{label}: compatible-metric identities", worst, cfg.tol("metric"), "<="))
    out.append(check(f"{label}: metric positive definite", min(r["min_eig"] for r in res), 0.0,
                     ">"))
    out.append(check(f"{label}: Reeb field vertical", kc.reeb_verticality(Y.assoc, X),
                     cfg.tol("vertical"), "<="))
    kr, kw = kc.killing_residual(Y.metric, X[: min(n, 5)], h=1e-3, threads=cfg.threads)
    out.append(check(f"{label}: Killing residual of the Reeb field", kr, cfg.tol("killing"), "<=",
                     kw))
    if fiber_dep:
        p = Y.assoc.split(X[0])[0]
        d, _, _ = kc.fiber_dependence(Y.assoc, Y.metric, p,
                                      kc.fiber_samples(Y.fiber.manifold, 6, cfg.seed + 5))
        out.append(check(f"{label}: horizontal metric block varies along the fibre", d,
                         cfg.tol("fiber_dependence"), ">"))
    return out


def run_yamazaki_n1(cfg):
    return _yamazaki(cfg, md.hopf_bundle(), [1.0, 1.0], "Hopf x E_(1,1)", fiber_dep=False)


def run_yamazaki_n2(cfg):
    return _yamazaki(cfg, md.fiber_product_bundle(), [1.0, 2.0], "T^2 x E_(1,2)",
                     fiber_dep=True)


def run_kcontact_killing(cfg):
    n = cfg.count()
    out = []
    R3 = euclidean(3)
    C = ct.verify_contact(R3, md.darboux_form(), R3.sample(20, cfg.seed))
    g = kc.build_compatible_metric(C)
    e = max(_identity_residual(g.invariant_residuals(x)) for x in C.verified_samples)
    out.append(check("R^3: compatible-metric identities", e, cfg.tol("metric"), "<="))
    kr, kw = kc.killing_residual(g, C.verified_samples.points[:3])
    out.append(check("R^3: Killing residual", kr, cfg.tol("killing_round"), "<=", kw))
    S3 = sphere(3)
    C3 = ct.verify_contact(S3, md.standard_form(2), S3.sample(n, cfg.seed))
    g3 = kc.build_compatible_metric(C3)
    res = [g3.invariant_residuals(x) for x in C3.verified_samples]
    worst = max(_identity_residual(r) for r in res)
    out.append(check("S^3: compatible-metric identities", worst, cfg.tol("metric"), "<="))
    out.append(check("S^3: metric positive definite", min(r["min_eig"] for r in res), 0.0, ">"))
    kr, kw = kc.killing_residual(g3, C3.verified_samples.points[:5], threads=cfg.threads)
    out.append(check("S^3: Killing residual, round background", kr, cfg.tol("killing_round"),
                     "<=", kw))
    E = ellipsoid([1.0, 2.0, 3.0])
    CE = ct.verify_contact(E, md.standard_form(3), E.sample(n, cfg.seed))
    act = coordinate_torus_action(E, 3)
    pos = kc.positivity_check(CE, act, np.array([1.0, 2.0, 3.0]) / 2)
    out.append(check("E_(1,2,3): positivity of <Psi, a/2>", pos.minimum, 0.0, ">", pos.witness))
    f_inv = lambda y: 0.3 * (y[0] * y[0] + y[1] * y[1]) - 0.2 * (y[4] * y[4] + y[5] * y[5])  # noqa
    CEf = ct.ContactStructure(E, CE.alpha.scaled(f_inv), CE.verified_samples, 0.0, 0.0)
    for label, X in (("a/2", np.array([1.0, 2.0, 3.0]) / 2), ("-a/2", -np.array([1.0, 2, 3]) / 2),
                     ("0", np.zeros(3))):
        same = (kc.positivity_check(CE, act, X).passed
                == kc.positivity_check(CEf, act, X).passed)
        out.append(flag(f"E_(1,2,3): positivity outcome for X = {label} unchanged under e^f alpha",
                        same))
    return out


def _cross_section(cfg, n_complex):
    n = cfg.count()
    M = sphere(2 * n_complex - 1)
    C = ct.verify_contact(M, md.standard_form(n_complex), M.sample(50, cfg.seed))
    act = su2_action(M, n_complex)
    G = act.group
    sl = cs.build_slice(G, [0.0, 0.0, 1.0])
    out = []
    out.append(check("slice: <mu, m> = 0", sl.annihilator_residual(sl.mu), 1e-14, "<="))
    out.append(check("slice: dim g_mu + dim m = dim g",
                     np.linalg.matrix_rank(np.column_stack([sl.g_mu, sl.m])), G.dim, "=="))
    pts = cs.find_cross_section(C, act, sl, n, cfg.seed, threads=cfg.threads)
    out.append(check("cross-section: membership residual",
                     max(p.membership_residual for p in pts), cfg.tol("membership"), "<="))
    expected = M.dim - sl.m.shape[1]
    ranks = {cs.tangent_frame_R(C, act, sl, p.point).shape[1] for p in pts}
    out.append(check("cross-section: dim R from frame rank",
                     ranks.pop() if len(ranks) == 1 else -1, expected, "=="))
    worst = {"a": (0.0, None), "b": (0.0, None), "c": (0.0, None)}
    for p in pts:
        r = cs.verify_splitting(p.point, sl, C, act, raise_on_fail=False)
        for k in worst:
            if getattr(r, k) > worst[k][0] or worst[k][1] is None:
                worst[k] = (max(getattr(r, k), worst[k][0]), p.point)
    for k, label in (("a", "m_M(x) inside xi"), ("b", "xi = m_M + (xi cap TR)"),
                     ("c", "m_M d-alpha-orthogonal to xi cap TR")):
        out.append(check(f"splitting ({k}): {label}", worst[k][0], cfg.tol("splitting"), "<=",
                         worst[k][1]))
    f_conf = lambda y: 0.4 * jets.sin(y[0] - y[3]) + 0.1 * y[1] * y[2]  # noqa: E731
    rep = cs.verify_cross_section_contact(pts, sl, C, act, conformal=f_conf, pf_tol=cfg.tol("pf"),
                                          threads=cfg.threads, raise_on_fail=False)
    out.append(check("cross-section: Pfaffian floor on R", rep.min_relative_pfaffian,
                     cfg.tol("pf"), ">=", rep.witness))
    out.append(check("cross-section: membership under e^f alpha", rep.conformal_membership,
                     cfg.tol("membership"), "<="))
    out.append(flag("cross-section: outcome unchanged under e^f alpha", rep.conformal_passed))
    out.append(check("cross-section: G_mu-invariance of R",
                     cs.isotropy_invariance_residual(C, act, sl, pts, seed=cfg.seed),
                     cfg.tol("membership"), "<="))
    out.append(check("cross-section: <Psi,[m_i,m_j]> = -d alpha(m_i,M, m_j,M)",
                     max(cs.orbit_pairing_residual(C, act, sl, p.point) for p in pts),
                     cfg.tol("orbit"), "<="))
    svals = [cs.slice_pairing_check(sl, ct.moment_alpha(C, act, p.point)) for p in pts]
    out.append(flag("slice pairing nondegenerate at every accepted eta",
                    all(s.passed for s in svals)))
    return out


def run_cross_section_su2_s3(cfg):
    return _cross_section(cfg, 2)


def run_cross_section_su2_s5(cfg):
    return _cross_section(cfg, 3)


# negative controls -----------------------------------------------------------------

def _negatives(cfg, companions):
    """Deliberately broken inputs.  With ``companions`` return the checks that must
    still pass for the same inputs instead of the intended failures."""
    n = cfg.count()
    seed = cfg.seed
    fails, keeps = [], []

    # dz is closed
    R3 = euclidean(3)
    rep = ct.contact_sweep(R3, md.vertical_form(), R3.sample(n, seed), cfg.tol("pf"))
    fails.append(check("degenerate form dz: contact Pfaffian", rep.min_relative_pfaffian,
                       cfg.tol("pf"), ">=", rep.witness))
    rep2 = ct.contact_sweep(R3, md.darboux_form(), R3.sample(n, seed), cfg.tol("pf"))
    keeps.append(check("degenerate form dz: dz - y dx on the same samples passes",
                       rep2.min_relative_pfaffian, cfg.tol("pf"), ">="))

    # flat connection
    assoc = flat_associated(seed)
    X = kc.total_samples(assoc, n, seed + 1)
    mus = moment_images(assoc, X)
    fat = bd.fatness_check(assoc.bundle, mus, np.array([assoc.split(x)[0] for x in X]),
                           fat_tol=cfg.tol("fat"))
    crep = bd.verify_contact_associated(assoc, X, pf_tol=cfg.tol("pf"), sigma_count=50,
                                        seed=seed, raise_on_fail=False)
    fails.append(check("flat connection: fatness on moment image", fat.min_relative_det,
                       cfg.tol("fat"), ">", fat.witness_point))
    fails.append(check("flat connection: contact Pfaffian of alpha_M",
                       crep.min_relative_pfaffian, cfg.tol("pf"), ">=", crep.witness))
    keeps.append(check("flat connection: alpha_M basic",
                       max(bd.basic_residual(assoc, x) for x in X), cfg.tol("basic"), "<="))
    keeps.append(check("flat connection: sigma_H identity", crep.sigma_identity_error,
                       cfg.tol("sigma"), "<="))
    cr = assoc.bundle.connection_report(X[:10, :assoc.np], seed=seed)
    keeps.append(check("flat connection: A reproduces the generator", cr["generator"],
                       cfg.tol("connection"), "<="))
    keeps.append(flag("flat connection: fatness outcome equals contact outcome",
                      fat.passed == crep.passed))

    # flat in one torus factor
    Y = kc.build_yamazaki_scenario(md.half_flat_torus_bundle(), [1.0, 2.0], samples=min(n, 20),
                                   seed=seed, raise_on_fail=False)
    fails.append(check("half-flat torus bundle: fatness on the moment simplex",
                       Y.fatness.min_relative_det, cfg.tol("fat"), ">", Y.fatness.witness_point))
    fails.append(check("half-flat torus bundle: contact Pfaffian of alpha_M",
                       Y.contact.min_relative_pfaffian, cfg.tol("pf"), ">=", Y.contact.witness))
    witness_mu = Y.fatness.witness_mu
    wf = Y.assoc.split(Y.contact.witness)[1] if Y.contact.witness is not None else None
    psi_w = ct.moment_alpha(Y.fiber, Y.fiber_action, wf) if wf is not None else None
    match = (witness_mu is not None and psi_w is not None
             and abs(np.dot(witness_mu, psi_w)) >= (1 - 1e-9) * np.linalg.norm(witness_mu)
             * np.linalg.norm(psi_w))
    keeps.append(flag("half-flat torus bundle: fatness and contact witnesses match", match))
    keeps.append(check("half-flat torus bundle: sigma_H identity", Y.contact.sigma_identity_error,
                       cfg.tol("sigma"), "<="))

    # non-invariant fibre form
    S3 = sphere(3)
    Ct = ct.verify_contact(S3, md.twisted_form(), S3.sample(n, seed))
    keeps.append(check("non-invariant fibre form: the form itself is contact",
                       Ct.min_relative_pfaffian, cfg.tol("pf"), ">="))
    try:
        bd.assemble_alpha_tot(md.fiber_product_bundle(), Ct, coordinate_torus_action(S3, 2),
                              seed=seed)
        fails.append(check("non-invariant fibre form: torus invariance", 0.0,
                           cfg.tol("invariance"), "<="))
    except NotInvariantFiberForm as exc:
        fails.append(check("non-invariant fibre form: torus invariance", exc.value,
                           cfg.tol("invariance"), "<=", exc.witness))
    Cs = ct.verify_contact(S3, md.standard_form(2), S3.sample(n, seed))
    r = ct.verify_invariance(Cs, coordinate_torus_action(S3, 2), seed=seed, tol=np.inf)
    keeps.append(check("non-invariant fibre form: alpha_std on the same samples is invariant",
                       r.max_residual, cfg.tol("invariance"), "<="))

    # zero covector
    H = md.hopf_bundle()
    S = H.total.sample(n, seed)
    f0 = bd.fatness_check(H, [[0.0]], S, fat_tol=cfg.tol("fat"))
    fails.append(check("zero mu: Hopf fatness", f0.min_relative_det, cfg.tol("fat"), ">",
                       f0.witness_point))
    f1 = bd.fatness_check(H, [[1.0]], S, fat_tol=cfg.tol("fat"))
    keeps.append(check("zero mu: Hopf fatness at mu = 1", f1.min_relative_det, cfg.tol("fat"),
                       ">"))

    # Reeb-breaking background
    C3 = ct.verify_contact(S3, md.standard_form(2), S3.sample(n, seed))
    bad = kc.build_compatible_metric(C3, background=lambda x: np.diag([3.0, 1.0, 1.0, 1.0]))
    kr, kw = kc.killing_residual(bad, C3.verified_samples.points[:3])
    fails.append(check("Reeb-breaking background: Killing residual", kr,
                       cfg.tol("killing"), "<=", kw))
    res = [bad.invariant_residuals(x) for x in C3.verified_samples.points[:20]]
    keeps.append(check("Reeb-breaking background: compatible-metric identities",
                       max(_identity_residual(q) for q in res),
                       cfg.tol("metric"), "<="))

    # wrong complement
    act = su2_action(S3, 2)
    sl = cs.build_slice(act.group, [0.0, 0.0, 1.0])
    pts = cs.find_cross_section(C3, act, sl, 5, seed)
    wrong = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]).T
    ra = max((cs.verify_splitting(p.point, sl, C3, act, m_basis=wrong, raise_on_fail=False).a,
              i) for i, p in enumerate(pts))
    fails.append(check("wrong complement: splitting (a) m_M(x) inside xi", ra[0],
                       cfg.tol("splitting"), "<=", pts[ra[1]].point))
    good = max(max(r.a, r.b, r.c) for r in (cs.verify_splitting(p.point, sl, C3, act,
                                                                 raise_on_fail=False)
                                            for p in pts))
    keeps.append(check("wrong complement: correct complement splits", good,
                       cfg.tol("splitting"), "<="))
    keeps.append(check("wrong complement: membership of the same points",
                       max(p.membership_residual for p in pts), cfg.tol("membership"), "<="))
    return keeps if companions else fails


def run_negative_controls(cfg):
    return _negatives(cfg, companions=False)


def negative_control_companions(cfg):
    return _negatives(cfg, companions=True)


SCENARIOS = {
    "std_contact": run_std_contact,
    "hopf_fatness": run_hopf_fatness,
    "assoc_contact": run_assoc_contact,
    "parallel_transport": run_parallel_transport,
    "yamazaki_n1": run_yamazaki_n1,
    "yamazaki_n2": run_yamazaki_n2,
    "kcontact_killing": run_kcontact_killing,
    "cross_section_su2_s3": run_cross_section_su2_s3,
    "cross_section_su2_s5": run_cross_section_su2_s5,
    "negative_controls": run_negative_controls,
}
