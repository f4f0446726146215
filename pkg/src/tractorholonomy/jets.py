# -*- coding: UTF-8 -*-
"""
tractorholonomy.jets
~~~~~~~~~~~~~~~~~~~~

Forward-mode truncated Taylor arithmetic up to order 3.

A :class:`Jet` carries a value together with its first, second and third
partial derivatives with respect to the chart coordinates. The value can be
a scalar or an array (e.g. all metric components at once); the derivative
arrays then have the value shape followed by one axis of length ``dim`` per
derivative order::

    value: S        d1: S + (d,)       d2: S + (d, d)      d3: S + (d, d, d)

Products and compositions use the Leibniz rule and Faa di Bruno's formula,
which keeps ``d2`` and ``d3`` symmetric by construction.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import math
import logging
import numbers

import numpy as np


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def _ex(a, k):
    """Append k trailing axes of length one."""
    a = np.asarray(a)
    return a.reshape(a.shape + (1,) * k)


def _outer2(u, v):
    return u[..., :, None] * v[..., None, :]


def _sym3(u, m):
    """u_i m_jk + u_j m_ik + u_k m_ij"""
    return (u[..., :, None, None] * m[..., None, :, :] +
            u[..., None, :, None] * m[..., :, None, :] +
            u[..., None, None, :] * m[..., :, :, None])


class Jet:
    __slots__ = ("value", "d1", "d2", "d3")

    def __init__(self, value, d1=None, d2=None, d3=None):
        """Truncated Taylor jet.

        :param value: Value (scalar or array)
        :param d1: First derivatives, or None for an order-0 jet
        :param d2: Second derivatives, or None
        :param d3: Third derivatives, or None
        """
        self.value = np.asarray(value, dtype=float)
        self.d1 = None if d1 is None else np.asarray(d1, dtype=float)
        self.d2 = None if d2 is None or d1 is None else np.asarray(d2, dtype=float)
        self.d3 = None if d3 is None or self.d2 is None else np.asarray(d3, dtype=float)

    @property
    def order(self):
        if self.d1 is None:
            return 0
        if self.d2 is None:
            return 1
        if self.d3 is None:
            return 2
        return 3

    @property
    def shape(self):
        return self.value.shape

    @property
    def dim(self):
        if self.d1 is None:
            return None
        return self.d1.shape[-1]

    def derivatives(self):
        return [d for d in (self.d1, self.d2, self.d3) if d is not None]

    # --- Constructors ---

    @staticmethod
    def constant(value, dim, order=3):
        value = np.asarray(value, dtype=float)
        derivs = [np.zeros(value.shape + (dim,) * k) for k in range(1, order + 1)]
        return Jet(value, *derivs)

    @staticmethod
    def zeros(shape, dim, order=3):
        return Jet.constant(np.zeros(shape), dim, order)

    @staticmethod
    def variable(coords, i, order=3):
        coords = np.asarray(coords, dtype=float)
        dim = len(coords)
        derivs = []
        if order >= 1:
            d1 = np.zeros(dim)
            d1[i] = 1.0
            derivs.append(d1)
        for k in range(2, order + 1):
            derivs.append(np.zeros((dim,) * k))
        return Jet(coords[i], *derivs)

    @staticmethod
    def variables(coords, order=3):
        return [Jet.variable(coords, i, order) for i in range(len(coords))]

    # --- Structural helpers ---

    def truncate(self, order):
        if order >= self.order:
            return self
        derivs = self.derivatives()[:order]
        return Jet(self.value, *derivs)

    def gradient(self):
        """Jet of the first derivatives (one order lower)."""
        if self.d1 is None:
            raise ValueError("Jet of order 0 has no gradient")
        return Jet(self.d1, self.d2, self.d3)

    def __getitem__(self, item):
        if not isinstance(item, tuple):
            item = (item,)
        return Jet(self.value[item], *[d[item] for d in self.derivatives()])

    def __setitem__(self, item, other):
        if not isinstance(item, tuple):
            item = (item,)
        other = _as_jet(other, self)
        self.value[item] = other.value
        for mine, theirs in zip(self.derivatives(), other.derivatives()):
            mine[item] = theirs

    def copy(self):
        return Jet(self.value.copy(), *[d.copy() for d in self.derivatives()])

    def embed(self, index_map, dim):
        """Express the jet in a larger coordinate system.

        :param index_map: For every current coordinate, its index in the new system
        :param dim: Number of coordinates of the new system
        """
        idx = np.asarray(index_map, dtype=int)
        derivs = []
        for k, d in enumerate(self.derivatives(), start=1):
            new = np.zeros(self.shape + (dim,) * k)
            new[(Ellipsis,) + np.ix_(*([idx] * k))] = d
            derivs.append(new)
        return Jet(self.value, *derivs)

    def transpose(self, axes=None):
        n = self.value.ndim
        if axes is None:
            axes = tuple(reversed(range(n)))
        derivs = []
        for k, d in enumerate(self.derivatives(), start=1):
            derivs.append(d.transpose(tuple(axes) + tuple(range(n, n + k))))
        return Jet(self.value.transpose(axes), *derivs)

    # --- Arithmetic ---

    def __neg__(self):
        return Jet(-self.value, *[-d for d in self.derivatives()])

    def __add__(self, other):
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            value = self.value + other.value
            derivs = [a + b for a, b in zip(self.derivatives()[:order], other.derivatives()[:order])]
            return Jet(value, *derivs)
        other = np.asarray(other, dtype=float)
        value = self.value + other
        derivs = [np.broadcast_to(d, value.shape + d.shape[self.value.ndim:]).copy()
                  for d in self.derivatives()]
        return Jet(value, *derivs)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            derivs = [d * _ex(other, k) for k, d in enumerate(self.derivatives(), start=1)]
            return Jet(self.value * other, *derivs)
        a, b = self, other
        order = min(a.order, b.order)
        value = a.value * b.value
        derivs = []
        if order >= 1:
            derivs.append(_ex(a.value, 1) * b.d1 + a.d1 * _ex(b.value, 1))
        if order >= 2:
            derivs.append(_ex(a.value, 2) * b.d2 + _outer2(a.d1, b.d1) + _outer2(b.d1, a.d1) +
                          a.d2 * _ex(b.value, 2))
        if order >= 3:
            derivs.append(_ex(a.value, 3) * b.d3 + a.d3 * _ex(b.value, 3) +
                          _sym3(a.d1, b.d2) + _sym3(b.d1, a.d2))
        return Jet(value, *derivs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * reciprocal(other)
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, power):
        if isinstance(power, Jet):
            return exp(power * log(self))
        if isinstance(power, numbers.Integral) or (isinstance(power, float) and power.is_integer()
                                                    and abs(power) < 64):
            n = int(power)
            if n < 0:
                return reciprocal(self ** (-n))
            result = None
            base = self
            while n > 0:
                if n & 1:
                    result = base if result is None else result * base
                n >>= 1
                if n > 0:
                    base = base * base
            if result is None:
                return Jet.constant(np.ones(self.shape), self.dim or 0, self.order)
            return result
        p = float(power)
        v = self.value
        return self.compose(v ** p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2),
                            p * (p - 1) * (p - 2) * v ** (p - 3))

    def __rpow__(self, base):
        return exp(self * math.log(base))

    def compose(self, h0, h1, h2=None, h3=None):
        """Chain rule for h(self) given the derivatives h0..h3 of h at self.value."""
        f = self
        derivs = []
        if f.order >= 1:
            derivs.append(_ex(h1, 1) * f.d1)
        if f.order >= 2:
            derivs.append(_ex(h2, 2) * _outer2(f.d1, f.d1) + _ex(h1, 2) * f.d2)
        if f.order >= 3:
            f111 = f.d1[..., :, None, None] * f.d1[..., None, :, None] * f.d1[..., None, None, :]
            derivs.append(_ex(h3, 3) * f111 + _ex(h2, 3) * _sym3(f.d1, f.d2) + _ex(h1, 3) * f.d3)
        return Jet(h0, *derivs)

    def __repr__(self):
        return "Jet(order={}, shape={}, value={})".format(self.order, self.shape, self.value)


def _as_jet(other, like):
    if isinstance(other, Jet):
        return other
    return Jet.constant(other, like.dim or 0, like.order)


# --- Elementary functions, on jets and on plain numbers ---

def reciprocal(x):
    if not isinstance(x, Jet):
        return 1.0 / np.asarray(x, dtype=float)
    v = x.value
    return x.compose(1 / v, -1 / v ** 2, 2 / v ** 3, -6 / v ** 4)


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    e = np.exp(x.value)
    return x.compose(e, e, e, e)


def log(x):
    if not isinstance(x, Jet):
        return np.log(x)
    v = x.value
    return x.compose(np.log(v), 1 / v, -1 / v ** 2, 2 / v ** 3)


def sin(x):
    if not isinstance(x, Jet):
        return np.sin(x)
    s, c = np.sin(x.value), np.cos(x.value)
    return x.compose(s, c, -s, -c)


def cos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    s, c = np.sin(x.value), np.cos(x.value)
    return x.compose(c, -s, -c, s)


def sinh(x):
    if not isinstance(x, Jet):
        return np.sinh(x)
    s, c = np.sinh(x.value), np.cosh(x.value)
    return x.compose(s, c, s, c)


def cosh(x):
    if not isinstance(x, Jet):
        return np.cosh(x)
    s, c = np.sinh(x.value), np.cosh(x.value)
    return x.compose(c, s, c, s)


def sqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)
    return x ** 0.5


def matmul(a, b):
    """Matrix product of two matrix-valued jets (or a jet and a constant matrix)."""
    if not isinstance(a, Jet):
        a = Jet.constant(a, b.dim, b.order)
    if not isinstance(b, Jet):
        b = Jet.constant(b, a.dim, a.order)
    order = min(a.order, b.order)
    value = a.value @ b.value
    derivs = []
    if order >= 1:
        derivs.append(np.einsum('ij,jkm->ikm', a.value, b.d1) + np.einsum('ijm,jk->ikm', a.d1, b.value))
    if order >= 2:
        derivs.append(np.einsum('ij,jkmn->ikmn', a.value, b.d2) + np.einsum('ijmn,jk->ikmn', a.d2, b.value) +
                      np.einsum('ijm,jkn->ikmn', a.d1, b.d1) + np.einsum('ijn,jkm->ikmn', a.d1, b.d1))
    if order >= 3:
        d3 = np.einsum('ij,jkmnp->ikmnp', a.value, b.d3) + np.einsum('ijmnp,jk->ikmnp', a.d3, b.value)
        for (x, y, z) in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
            # one derivative on a, two on b, and the mirrored split
            letters = 'mnp'
            d3 = d3 + np.einsum('ij{},jk{}->ikmnp'.format(letters[x], letters[y] + letters[z]), a.d1, b.d2)
            d3 = d3 + np.einsum('ij{},jk{}->ikmnp'.format(letters[y] + letters[z], letters[x]), a.d2, b.d1)
        derivs.append(d3)
    return Jet(value, *derivs)
