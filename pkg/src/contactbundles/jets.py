"""First-order jets: forward-mode derivatives for ambient coefficient functions.

A :class:`Jet1` carries a value array of shape ``S`` together with its
derivative with respect to ``K`` seed directions, stored as an array of shape
``S + (K,)``.  Coefficient functions written against the helpers in this
module (``sin``, ``stack``, the ``@`` operator, ...) accept plain ndarrays as
well as jets, so the same code evaluates values and Jacobians.
"""

from __future__ import annotations

import numpy as np


class Jet1:
    __slots__ = ("value", "grad")
    __array_ufunc__ = None  # make ndarray defer to the reflected operators

    def __init__(self, value, grad):
        self.value = np.asarray(value, dtype=float)
        self.grad = np.asarray(grad, dtype=float)

    @classmethod
    def seed(cls, x):
        """Independent variable ``x`` (1-D) with identity derivative."""
        x = np.asarray(x, dtype=float)
        return cls(x.copy(), np.eye(x.size).reshape(x.shape + (x.size,)))

    @classmethod
    def constant(cls, x, nseeds):
        x = np.asarray(x, dtype=float)
        return cls(x, np.zeros(x.shape + (nseeds,)))

    @property
    def shape(self):
        return self.value.shape

    @property
    def ndim(self):
        return self.value.ndim

    @property
    def nseeds(self):
        return self.grad.shape[-1]

    def __len__(self):
        return len(self.value)

    def __repr__(self):
        return f"Jet1(value={self.value!r}, grad={self.grad!r})"

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet1(self.value[idx], self.grad[idx + (slice(None),)])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def _grad_like(self, shape):
        return np.broadcast_to(self.grad, tuple(shape) + (self.nseeds,))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet1):
            v = self.value + other.value
            return Jet1(v, self._grad_like(v.shape) + other._grad_like(v.shape))
        v = self.value + np.asarray(other, dtype=float)
        return Jet1(v, self._grad_like(v.shape).copy())

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.value, -self.grad)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet1):
            v = self.value * other.value
            g = self.grad * other.value[..., None] + other.grad * self.value[..., None]
            return Jet1(v, g)
        o = np.asarray(other, dtype=float)
        return Jet1(self.value * o, self.grad * o[..., None])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet1):
            return self * other.reciprocal()
        o = np.asarray(other, dtype=float)
        return Jet1(self.value / o, self.grad / o[..., None])

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self):
        inv = 1.0 / self.value
        return Jet1(inv, -self.grad * (inv * inv)[..., None])

    def __pow__(self, power):
        if isinstance(power, Jet1):
            return exp(power * log(self))
        p = float(power)
        if p == 2.0:
            return self * self
        v = self.value ** p
        return Jet1(v, self.grad * (p * self.value ** (p - 1.0))[..., None])

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    @property
    def T(self):
        return transpose(self)

    def sum(self, axis=None):
        return sum_(self, axis=axis)


def _parts(x):
    if isinstance(x, Jet1):
        return x.value, x.grad
    return np.asarray(x, dtype=float), None


def is_jet(x):
    return isinstance(x, Jet1)


def value_of(x):
    return x.value if isinstance(x, Jet1) else np.asarray(x, dtype=float)


def matmul(a, b):
    av, ag = _parts(a)
    bv, bg = _parts(b)
    v = av @ bv
    g = None
    if ag is not None:
        g = np.moveaxis(np.moveaxis(ag, -1, 0) @ bv, 0, -1)
    if bg is not None:
        if bv.ndim == 1:
            gb = av @ bg
        else:
            gb = np.moveaxis(av @ np.moveaxis(bg, -1, 0), 0, -1)
        g = gb if g is None else g + gb
    if g is None:
        return v
    return Jet1(v, g)


def transpose(x):
    if isinstance(x, Jet1):
        return Jet1(x.value.T, np.swapaxes(x.grad, 0, 1))
    return np.asarray(x).T


def sum_(x, axis=None):
    if not isinstance(x, Jet1):
        return np.sum(x, axis=axis)
    if axis is None:
        axes = tuple(range(x.ndim))
        return Jet1(x.value.sum(), x.grad.sum(axis=axes))
    axis = axis % x.ndim
    return Jet1(x.value.sum(axis=axis), x.grad.sum(axis=axis))


def dot(a, b):
    return sum_(a * b)


def stack(items, axis=0):
    items = list(items)
    seeds = [it.nseeds for it in items if isinstance(it, Jet1)]
    if not seeds:
        return np.stack([np.asarray(it, dtype=float) for it in items], axis=axis)
    k = seeds[0]
    jets = [it if isinstance(it, Jet1) else Jet1.constant(it, k) for it in items]
    v = np.stack([j.value for j in jets], axis=axis)
    ax = axis if axis >= 0 else v.ndim + axis
    return Jet1(v, np.stack([j.grad for j in jets], axis=ax))


def concatenate(items, axis=0):
    items = list(items)
    seeds = [it.nseeds for it in items if isinstance(it, Jet1)]
    if not seeds:
        return np.concatenate([np.asarray(it, dtype=float) for it in items], axis=axis)
    k = seeds[0]
    jets = [it if isinstance(it, Jet1) else Jet1.constant(it, k) for it in items]
    v = np.concatenate([j.value for j in jets], axis=axis)
    ax = axis if axis >= 0 else v.ndim + axis
    return Jet1(v, np.concatenate([j.grad for j in jets], axis=ax))


def _unary(fn, dfn):
    def op(x):
        if isinstance(x, Jet1):
            return Jet1(fn(x.value), x.grad * dfn(x.value)[..., None])
        return fn(np.asarray(x, dtype=float))
    op.__name__ = fn.__name__
    return op


sin = _unary(np.sin, np.cos)
cos = _unary(np.cos, lambda v: -np.sin(v))
exp = _unary(np.exp, np.exp)
log = _unary(np.log, lambda v: 1.0 / v)
sqrt = _unary(np.sqrt, lambda v: 0.5 / np.sqrt(v))
tanh = _unary(np.tanh, lambda v: 1.0 - np.tanh(v) ** 2)
arctan = _unary(np.arctan, lambda v: 1.0 / (1.0 + v * v))


def jacobian(fn, x):
    """Return ``(fn(x), D fn(x))`` with the derivative of shape ``out.shape + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = fn(Jet1.seed(x))
    if isinstance(out, Jet1):
        return out.value, out.grad
    out = np.asarray(out, dtype=float)
    return out, np.zeros(out.shape + (x.size,))


def derivative(fn, t):
    """Value and derivative of a function of one real variable."""
    out = fn(Jet1(np.float64(t), np.ones(1)))
    if isinstance(out, Jet1):
        return out.value, out.grad[..., 0]
    out = np.asarray(out, dtype=float)
    return out, np.zeros_like(out)
