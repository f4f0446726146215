# -*- coding: UTF-8 -*-
"""
tractorholonomy.spacetimes.planewave
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Parallel tractors of a plane wave h = 2 dx dz + sum a_ij(z) y_i y_j dz^2 + sum dy_i^2.

The tractors (sigma(z), tau(z) X, 0) with X = d/dx are parallel exactly when

    sigma' = tau,    tau' = k(z) sigma,    k = trace(a) / n

with n = d - 2 the number of screen coordinates. Every solution is
isotropic, and off the zeros of sigma the scale sigma^-2 h is Ricci-flat.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from ..expressions import Expression
from ..integrate import integrate, IntegratorSettings
from ..tractor import Tractor
from ..exceptions import SpecError, DomainError
from ..util import max_abs


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class PlaneWaveSections:
    def __init__(self, n, zs, fundamental, coefficient, z0, k_values, closed_form_error=None):
        """Fundamental matrix [[sigma_1, sigma_2], [tau_1, tau_2]] on a grid of z values.

        :param k_values: Coefficient k(z) at the grid values
        """
        self.n = n
        self.zs = zs
        self.fundamental = fundamental
        self.coefficient = coefficient
        self.z0 = z0
        self.closed_form_error = closed_form_error
        self._splines = [CubicHermiteSpline(zs, fundamental[:, 0, k], fundamental[:, 1, k]) for k in range(2)]
        self._tau_splines = [CubicHermiteSpline(zs, fundamental[:, 1, k], k_values * fundamental[:, 0, k])
                             for k in range(2)]
        self.zeros = [self._zeros(k) for k in range(2)]

    @property
    def wronskian(self):
        return np.linalg.det(self.fundamental)

    @property
    def wronskian_drift(self):
        w = self.wronskian
        return float(np.max(np.abs(w - w[0])))

    def _zeros(self, k):
        sigma = self._splines[k]
        values = sigma(self.zs)
        zeros = [float(z) for z, v in zip(self.zs, values) if v == 0.0]
        for a, b, fa, fb in zip(self.zs[:-1], self.zs[1:], values[:-1], values[1:]):
            if fa * fb < 0:
                zeros.append(float(brentq(sigma, a, b, xtol=1e-14)))
        return sorted(zeros)

    def sigma_tau(self, k, z):
        if not self.zs[0] <= z <= self.zs[-1]:
            raise DomainError(f"z = {z} outside the solved interval [{self.zs[0]}, {self.zs[-1]}]")
        return float(self._splines[k](z)), float(self._tau_splines[k](z))

    def tractor_at(self, k, g, p, z_index=None):
        """Section k as a tractor (sigma, tau X, 0) in the gauge g at p."""
        z_index = g.dim - 1 if z_index is None else z_index
        sigma, tau = self.sigma_tau(k, p.coords[z_index])
        y = np.zeros(g.dim)
        y[0] = tau
        return Tractor(sigma, y, 0.0, g, p)

    def tractor_vectors(self, z, d):
        """Both sections at z as vectors of length d + 2, columns."""
        out = np.zeros((d + 2, 2))
        for k in range(2):
            sigma, tau = self.sigma_tau(k, z)
            out[0, k] = sigma
            out[1, k] = tau
        return out

    def to_json(self):
        return {"n": self.n, "z_interval": [float(self.zs[0]), float(self.zs[-1])], "z0": self.z0,
                "wronskian": float(self.wronskian[0]), "wronskian_drift": self.wronskian_drift,
                "zeros": self.zeros, "closed_form_error": self.closed_form_error,
                "constant_coefficient": self.coefficient if isinstance(self.coefficient, float) else None}


def trace_coefficient(a):
    """k(z) = trace(a(z)) / n as a float (constant a) or a callable."""
    n = len(a)
    diag = [a[i][i] for i in range(n)]
    if all(not isinstance(entry, str) for entry in diag):
        return sum(float(entry) for entry in diag) / n
    exprs = [Expression(entry, ["z"]) for entry in diag]
    if all(e.is_constant for e in exprs):
        return sum(e.value([0.0]) for e in exprs) / n
    return lambda z: sum(e.value([z]) for e in exprs) / n


def closed_form(k, z, z0):
    """Fundamental matrix of sigma' = tau, tau' = k sigma for constant k."""
    s = z - z0
    if k > 0:
        r = np.sqrt(k)
        return np.array([[np.cosh(r * s), np.sinh(r * s) / r], [r * np.sinh(r * s), np.cosh(r * s)]])
    if k < 0:
        r = np.sqrt(-k)
        return np.array([[np.cos(r * s), np.sin(r * s) / r], [-r * np.sin(r * s), np.cos(r * s)]])
    return np.array([[1.0, s], [0.0, 1.0]])


def plane_wave_parallel_tractors(a, n=None, z_interval=(0.5, 2.0), z0=None, nodes=129, settings=None):
    """Solve for the two independent parallel isotropic tractors of a plane wave.

    :param a: n x n matrix of a_ij(z), numbers or expressions in z
    :param z0: Initial point with fundamental matrix identity, default the start of the interval
    :return: PlaneWaveSections
    """
    if n is None:
        n = len(a)
    if len(a) != n or any(len(row) != n for row in a):
        raise SpecError(f"a should be a {n}x{n} matrix")
    z_lo, z_hi = float(z_interval[0]), float(z_interval[1])
    z0 = z_lo if z0 is None else float(z0)
    if not z_lo <= z0 <= z_hi:
        raise SpecError(f"z0 = {z0} outside [{z_lo}, {z_hi}]")
    k = trace_coefficient(a)
    k_fn = (lambda z: k) if isinstance(k, float) else k
    settings = IntegratorSettings(rtol=1e-12, atol=1e-14) if settings is None else IntegratorSettings.wrap(settings)

    def rhs(z, y):
        return np.array([[0.0, 1.0], [k_fn(z), 0.0]]) @ y

    zs = np.linspace(z_lo, z_hi, nodes)
    fundamental = np.zeros((nodes, 2, 2))
    forward = zs >= z0
    if np.any(forward):
        grid = zs[forward]
        if grid[-1] > z0:
            result = integrate(rhs, np.eye(2), (z0, grid[-1]), t_eval=grid, settings=settings)
            fundamental[forward] = np.array(result.y_eval)
        else:
            fundamental[forward] = np.eye(2)
    backward = zs < z0
    if np.any(backward):
        grid = zs[backward]
        # z -> 2 z0 - z turns the backward problem into a forward one
        mirrored = 2 * z0 - grid[::-1]
        result = integrate(lambda t, y: -rhs(2 * z0 - t, y), np.eye(2), (z0, mirrored[-1]), t_eval=mirrored,
                           settings=settings)
        fundamental[backward] = np.array(result.y_eval)[::-1]
    error = None
    if isinstance(k, float):
        exact = np.array([closed_form(k, z, z0) for z in zs])
        error = max_abs(fundamental - exact)
    logger.debug(f"Plane wave sections on [{z_lo}, {z_hi}], closed form error {error}")
    k_values = np.array([k_fn(z) for z in zs])
    return PlaneWaveSections(n, zs, fundamental, k, z0, k_values, error)
