"""Regular level sets in Euclidean space: retraction, tangent frames, sampling."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import NonConvergence, RankDeficient

THREADS_ENV = "CONTACTBUNDLES_THREADS"


@dataclass(frozen=True)
class TangentFrame:
    base_point: np.ndarray
    columns: np.ndarray  # (N, n), orthonormal

    @property
    def dim(self):
        return self.columns.shape[1]


@dataclass(frozen=True)
class SampleSet:
    seed: int
    points: np.ndarray  # (count, N)

    @property
    def count(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


class EmbeddedManifold:
    """The level set ``{x in R^N : constraint(x) = 0}`` with full-rank Jacobian.

    ``constraint`` maps an ambient point (ndarray or :class:`~contactbundles.jets.Jet1`)
    to a length-``codim`` vector.  ``codim == 0`` means the whole of ``R^N``.
    """

    def __init__(self, ambient_dim, constraint=None, codim=0, *, name="M",
                 constraint_tol=1e-10, rank_tol=1e-8, max_iter=50):
        if codim and constraint is None:
            raise ValueError("codim > 0 needs a constraint function")
        self.ambient_dim = int(ambient_dim)
        self.constraint = constraint
        self.codim = int(codim)
        self.name = name
        self.constraint_tol = constraint_tol
        self.rank_tol = rank_tol
        self.max_iter = max_iter

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, N={self.ambient_dim}, dim={self.dim})"

    @property
    def dim(self):
        return self.ambient_dim - self.codim

    # constraint evaluation --------------------------------------------------
    def residual(self, x):
        if not self.codim:
            return np.zeros(0)
        return np.atleast_1d(np.asarray(jets.value_of(self.constraint(np.asarray(x, float)))))

    def constraint_jacobian(self, x):
        """Constraint value and its ``(codim, N)`` Jacobian."""
        x = np.asarray(x, dtype=float)
        if not self.codim:
            return np.zeros(0), np.zeros((0, self.ambient_dim))
        c, J = jets.jacobian(self.constraint, x)
        return np.atleast_1d(c), J.reshape(self.codim, self.ambient_dim)

    def contains(self, x, tol=None):
        tol = self.constraint_tol if tol is None else tol
        r = self.residual(x)
        return r.size == 0 or float(np.max(np.abs(r))) <= tol

    def _svd(self, J, point):
        U, s, Vt = np.linalg.svd(J)
        if s.size and s[-1] <= self.rank_tol * s[0]:
            ratio = s[-1] / s[0] if s[0] > 0 else 0.0
            raise RankDeficient(f"constraint Jacobian of {self.name} lost rank "
                                f"(s_min/s_max = {ratio:.3e})", witness=point)
        return U, s, Vt

    # operations -------------------------------------------------------------
    def retract(self, q):
        """Gauss-Newton (minimum-norm step) projection of ``q`` onto the level set."""
        p = np.array(q, dtype=float)
        if not self.codim:
            return p
        c, J = self.constraint_jacobian(p)
        res = np.max(np.abs(c))
        if res <= self.constraint_tol:
            return p
        tight = self.constraint_tol * 1e-4
        for _ in range(self.max_iter):
            U, s, Vt = self._svd(J, p)
            p = p - Vt[: s.size].T @ ((U.T @ c) / s)
            c, J = self.constraint_jacobian(p)
            res = np.max(np.abs(c))
            if not np.isfinite(res):
                break
            if res <= tight:
                return p
        if res <= self.constraint_tol:
            return p
        raise NonConvergence(f"retraction onto {self.name} stalled at residual {res:.3e}",
                             witness=q, value=float(res))

    def project(self, q):
        """Like :meth:`retract` but always iterates to the tight tolerance.

        Smooth in ``q``; use this inside fields that get finite-differenced.
        """
        p = np.array(q, dtype=float)
        if not self.codim:
            return p
        c, J = self.constraint_jacobian(p)
        for _ in range(self.max_iter):
            res = np.max(np.abs(c))
            if res <= 1e-15 * max(1.0, float(np.abs(p).max())):
                return p
            U, s, Vt = self._svd(J, p)
            step = Vt[: s.size].T @ ((U.T @ c) / s)
            p = p - step
            c, J = self.constraint_jacobian(p)
            if np.max(np.abs(step)) <= 1e-16 * max(1.0, float(np.abs(p).max())):
                break
        res = np.max(np.abs(c))
        if res <= self.constraint_tol:
            return p
        raise NonConvergence(f"projection onto {self.name} stalled at residual {res:.3e}",
                             witness=q, value=float(res))

    def tangent_frame(self, p):
        p = np.asarray(p, dtype=float)
        if not self.codim:
            return TangentFrame(p, np.eye(self.ambient_dim))
        _, J = self.constraint_jacobian(p)
        _, s, Vt = self._svd(J, p)
        Q, _ = np.linalg.qr(Vt[self.codim:].T)
        return TangentFrame(p, Q)

    def tangent_projector(self, p):
        """Orthogonal projector of ``R^N`` onto ``T_p M``."""
        F = self.tangent_frame(p).columns
        return F @ F.T

    def sample(self, count, seed, max_attempts=None):
        """Standard Gaussian ambient draws pushed onto the manifold by :meth:`retract`."""
        if count < 1:
            raise ValueError("count must be >= 1")
        rng = np.random.default_rng(seed)
        budget = max_attempts or 50 * count
        pts = []
        attempts = 0
        while len(pts) < count:
            if attempts >= budget:
                raise NonConvergence(f"sampling {self.name}: {len(pts)}/{count} points "
                                     f"after {attempts} draws")
            attempts += 1
            q = rng.standard_normal(self.ambient_dim)
            try:
                pts.append(self.retract(q))
            except (NonConvergence, RankDeficient):
                continue
        return SampleSet(seed=seed, points=np.array(pts))


@dataclass(frozen=True)
class ProductBlocks:
    slices: tuple = field(default_factory=tuple)

    def split(self, x):
        return tuple(x[s] for s in self.slices)


def product(*manifolds, name=None, **kw):
    """Cartesian product as a level set in the product ambient space."""
    dims = [m.ambient_dim for m in manifolds]
    offsets = np.concatenate([[0], np.cumsum(dims)])
    slices = tuple(slice(int(a), int(b)) for a, b in zip(offsets[:-1], offsets[1:]))
    parts = [(m, s) for m, s in zip(manifolds, slices) if m.codim]

    def constraint(x):
        return jets.concatenate([_as_vector(m.constraint(x[s])) for m, s in parts])

    codim = sum(m.codim for m in manifolds)
    tol = min(m.constraint_tol for m in manifolds)
    out = EmbeddedManifold(sum(dims), constraint if codim else None, codim,
                           name=name or " x ".join(m.name for m in manifolds),
                           constraint_tol=kw.get("constraint_tol", tol),
                           rank_tol=kw.get("rank_tol", 1e-8))
    out.factors = tuple(manifolds)
    out.blocks = ProductBlocks(slices)
    return out


def _as_vector(c):
    if jets.is_jet(c):
        return c if c.ndim else jets.stack([c])
    return np.atleast_1d(np.asarray(c, dtype=float))


def euclidean(n, name=None):
    return EmbeddedManifold(n, name=name or f"R^{n}")


def sphere(dim, name=None):
    """Unit sphere ``S^dim`` in ``R^(dim+1)``."""
    return EmbeddedManifold(dim + 1, lambda x: x @ x - 1.0, 1, name=name or f"S^{dim}")


def ellipsoid(a, name=None):
    """``E_a = {z in C^n : sum a_j |z_j|^2 = 1}`` in interleaved real coordinates."""
    a = np.asarray(a, dtype=float)
    w = np.repeat(a, 2)
    label = ",".join(f"{v:g}" for v in a)
    return EmbeddedManifold(2 * a.size, lambda x: (w * x) @ x - 1.0, 1,
                            name=name or f"E_({label})")


def point_manifold(name="pt"):
    """A single point, as the level set ``{0}`` in ``R^1``."""
    return EmbeddedManifold(1, lambda x: x, 1, name=name)


# parallel sweeps ------------------------------------------------------------

def default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def pmap(fn, items, threads=None):
    """Ordered map; results are identical for every thread count."""
    items = list(items)
    threads = default_threads() if threads is None else int(threads)
    if threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))
