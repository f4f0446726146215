# -*- coding: UTF-8 -*-
"""
tractorholonomy.tractor
~~~~~~~~~~~~~~~~~~~~~~~

Standard tractor bundle in a fixed metric gauge.

A tractor is a triple (sigma, Y, rho) of a scalar, a tangent vector and a
scalar. The frame is ordered (sigma-slot, d_1 .. d_d, rho-slot) everywhere, so
tractors are vectors of length d+2 and endomorphisms are (d+2, d+2) matrices.
The tractor metric is ``<(s,X,r),(t,Y,q)> = s q + r t + g(X,Y)``.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np
from scipy.interpolate import CubicSpline

from .curvature import curvature_bundle, CurvatureBundle
from .geometry import _check_chart
from .exceptions import (GaugeMismatch, DimensionError, SigmaVanishes, HypothesisFailed)
from .util import Tolerances, tensor_scale, max_abs, DDType


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class MatrixKind(DDType):
    ALGEBRA = "algebra"
    GROUP = "group"


class CausalTag(DDType):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    MIXED = "mixed"


class Tractor:
    def __init__(self, sigma, y, rho, gauge=None, at=None):
        self.sigma = float(sigma)
        self.y = np.array(y, dtype=float)
        self.rho = float(rho)
        self.gauge = gauge
        self.at = at
        if not (np.isfinite(self.sigma) and np.isfinite(self.rho) and np.all(np.isfinite(self.y))):
            raise ValueError("Tractor components must be finite")

    def vector(self):
        return np.concatenate(([self.sigma], self.y, [self.rho]))

    @staticmethod
    def from_vector(vector, gauge=None, at=None):
        vector = np.asarray(vector, dtype=float)
        return Tractor(vector[0], vector[1:-1], vector[-1], gauge, at)

    def to_json(self):
        return {"sigma": self.sigma, "y": self.y.tolist(), "rho": self.rho,
                "gauge": None if self.gauge is None else self.gauge.name,
                "at": None if self.at is None else self.at.coords.tolist()}

    def __repr__(self):
        return f"Tractor(sigma={self.sigma}, y={self.y.tolist()}, rho={self.rho})"


class TractorMatrix:
    def __init__(self, m, gauge=None, at=None, kind=None):
        self.m = np.array(m, dtype=float)
        self.gauge = gauge
        self.at = at
        self.kind = None if kind is None else MatrixKind.wrap(kind)

    def is_form_compatible(self, kind=None, tol=1e-8):
        kind = MatrixKind.wrap(kind, self.kind or MatrixKind.ALGEBRA)
        G = gram_matrix(self.gauge.value(self.at.coords))
        if kind == MatrixKind.ALGEBRA:
            res = self.m.T @ G + G @ self.m
            return max_abs(res) <= tol * tensor_scale(self.m)
        res = self.m.T @ G @ self.m - G
        return max_abs(res) <= tol

    def to_json(self):
        return {"m": self.m.tolist(), "gauge": None if self.gauge is None else self.gauge.name,
                "at": None if self.at is None else self.at.coords.tolist()}


def gram_matrix(metric_value):
    """Tractor Gram matrix [[0,0,1],[0,g,0],[1,0,0]]."""
    g = np.asarray(metric_value, dtype=float)
    d = g.shape[0]
    G = np.zeros((d + 2, d + 2))
    G[0, -1] = G[-1, 0] = 1.0
    G[1:-1, 1:-1] = g
    return G


def tractor_gram(g, p):
    _check_chart(g, p)
    return gram_matrix(g.value(p.coords))


def _same_gauge(t1, t2):
    if t1.gauge is not t2.gauge:
        raise GaugeMismatch("Tractors are given in different gauges")
    if t1.at is None or t2.at is None:
        if t1.at is not t2.at:
            raise GaugeMismatch("Tractors are attached to different points")
    elif not np.array_equal(t1.at.coords, t2.at.coords):
        raise GaugeMismatch("Tractors are attached to different points")


def tractor_inner(t1, t2):
    _same_gauge(t1, t2)
    g = t1.gauge.value(t1.at.coords)
    return float(t1.sigma * t2.rho + t1.rho * t2.sigma + t1.y @ g @ t2.y)


def _omega(metric, gamma, schouten, v):
    d = len(v)
    om = np.zeros((d + 2, d + 2))
    gv = metric @ v
    pv = schouten @ v
    om[0, 1:-1] = -gv
    om[1:-1, 0] = np.linalg.solve(metric, pv)
    om[1:-1, 1:-1] = np.einsum('kij,i->kj', gamma, v)
    om[1:-1, -1] = v
    om[-1, 1:-1] = -pv
    return om


def omega_from_bundle(bundle, v):
    """Connection matrix from a precomputed curvature bundle (order >= 2)."""
    return _omega(bundle.metric, bundle.christoffel, bundle.schouten, np.asarray(v, dtype=float))


def connection_matrix(g, p, v):
    """omega(v) such that D_v t = d_v t + omega(v) t in the frame (sigma, d_i, rho)."""
    if g.dim < 3:
        raise DimensionError("The tractor connection needs dimension >= 3")
    return omega_from_bundle(curvature_bundle(g, p, order=2), v)


def tractor_derivative(g, p, direction, t, t_dot):
    """D_X(s, Y, r) = (X(s) - g(X,Y), nabla_X Y + r X + s P(X)^#, X(r) - P(X,Y))

    :param t: Tractor value at p
    :param t_dot: Derivative of the components along the direction (a vector of length d+2)
    """
    if t.gauge is not None and t.gauge is not g:
        raise GaugeMismatch("Tractor is given in a different gauge")
    om = connection_matrix(g, p, direction)
    return Tractor.from_vector(np.asarray(t_dot, dtype=float) + om @ t.vector(), g, p)


def curvature_matrix_from_bundle(bundle, x, y):
    d = bundle.dim
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cxy = np.einsum('ijk,i,j->k', bundle.cotton, x, y)
    wxy = np.einsum('al,ijzl,i,j->az', bundle.inverse, bundle.weyl4, x, y)
    F = np.zeros((d + 2, d + 2))
    F[1:-1, 0] = bundle.inverse @ cxy
    F[1:-1, 1:-1] = wxy
    F[-1, 1:-1] = -cxy
    return F


def tractor_curvature(g, p, x, y):
    """F(X,Y) = [[0,0,0],[C(X,Y)^#, W(X,Y), 0],[0,-C(X,Y,.),0]]"""
    if g.dim < 4:
        raise DimensionError("The tractor curvature formula needs dimension >= 4")
    bundle = curvature_bundle(g, p, order=3)
    return TractorMatrix(curvature_matrix_from_bundle(bundle, x, y), g, p, kind=MatrixKind.ALGEBRA)


def tractor_curvature_from_connection(g, p, i, j):
    """F(d_i, d_j) = d_i omega_j - d_j omega_i + [omega_i, omega_j], from jets."""
    if g.dim < 3:
        raise DimensionError("The tractor connection needs dimension >= 3")
    b = curvature_bundle(g, p, order=3)
    d = b.dim

    def omega(k):
        e = np.zeros(d)
        e[k] = 1.0
        return omega_from_bundle(b, e)

    def d_omega(m, k):
        """Partial derivative along d_m of omega(d_k)."""
        out = np.zeros((d + 2, d + 2))
        out[0, 1:-1] = -b.dmetric[k, :, m]
        out[1:-1, 0] = b.dinverse[:, :, m] @ b.schouten[:, k] + b.inverse @ b.dschouten[:, k, m]
        out[1:-1, 1:-1] = b.dchristoffel[:, k, :, m]
        out[-1, 1:-1] = -b.dschouten[k, :, m]
        return out

    wi, wj = omega(i), omega(j)
    return d_omega(i, j) - d_omega(j, i) + wi @ wj - wj @ wi


# --- Conformal change of gauge ---

def theta_map(g, phi, p, t, weighted=True, target=None):
    """Map a tractor in the g-gauge to the e^{2 phi} g gauge.

    The density form is (s, X + s grad phi, r - d phi(X) - |grad phi|^2 s / 2).
    The weighted form multiplies the slots by (e^{phi}, e^{-phi}, e^{-phi}) and
    intertwines the connections of g and e^{2 phi} g.

    :param target: Metric attached as gauge of the result (normally the rescaled metric)
    """
    value, _ = theta_map_field(g, phi, p.coords, t.vector(), None, weighted)
    return Tractor.from_vector(value, target, p)


def theta_map_field(g, phi, coords, value, jacobian=None, weighted=True):
    """Theta applied to a tractor field given by its value and Jacobian at coords.

    :param jacobian: (d+2, d) partial derivatives of the components, or None
    :return: Tuple (value, jacobian) of the transformed field
    """
    coords = np.asarray(coords, dtype=float)
    order = 1 if jacobian is None else 2
    ph = phi.jet(coords, order)
    gj = g.jet(coords, order - 1)
    ginv = np.linalg.inv(gj.value)
    value = np.asarray(value, dtype=float)
    s, y, r = value[0], value[1:-1], value[-1]
    dphi = ph.d1
    grad = ginv @ dphi
    n2 = float(dphi @ grad)
    s1 = s
    y1 = y + s * grad
    r1 = r - dphi @ y - 0.5 * n2 * s
    out = np.concatenate(([s1], y1, [r1]))
    jac_out = None
    if jacobian is not None:
        jacobian = np.asarray(jacobian, dtype=float)
        js, jy, jr = jacobian[0], jacobian[1:-1], jacobian[-1]
        hphi = ph.d2
        dginv = -np.einsum('ka,abm,bl->klm', ginv, gj.d1, ginv)
        jgrad = np.einsum('klm,l->km', dginv, dphi) + ginv @ hphi
        jn2 = 2 * hphi @ grad + np.einsum('a,abm,b->m', dphi, dginv, dphi)
        jy1 = jy + np.outer(grad, js) + s * jgrad
        jr1 = jr - hphi @ y - dphi @ jy - 0.5 * (jn2 * s + n2 * js)
        jac_out = np.vstack(([js], jy1, [jr1]))
    if weighted:
        e = np.exp(ph.value)
        factors = np.full(len(out), 1.0 / e)
        factors[0] = e
        if jac_out is not None:
            signs = np.full(len(out), -1.0)
            signs[0] = 1.0
            jac_out = factors[:, None] * (jac_out + (signs * out)[:, None] * dphi[None, :])
        out = factors * out
    return out, jac_out


# --- Parallel and recurrent sections ---

def canonical_einstein_section(g, p):
    """(1, 0, -S/(2d(d-1))) with its tractor length and causal type.

    The section is parallel when g is Einstein."""
    b = curvature_bundle(g, p, order=2)
    d = b.dim
    rho = -b.scalar / (2 * d * (d - 1))
    t = Tractor(1.0, np.zeros(d), rho, g, p)
    length = 2 * rho
    return t, length, causal_tag(length)


def causal_tag(length, tol=1e-9):
    if length > tol:
        return CausalTag.SPACELIKE
    if length < -tol:
        return CausalTag.TIMELIKE
    return CausalTag.LIGHTLIKE


def einstein_scale_section(g, sigma, p):
    """(s, grad s, -(Laplace s + J s)/d) for a scale s; parallel exactly when s^-2 g is Einstein."""
    b = curvature_bundle(g, p, order=2)
    s = sigma.jet_at(p, 2)
    d = b.dim
    trace_p = float(np.einsum('ij,ij->', b.inverse, b.schouten))
    rho = -(b.laplacian(s) + trace_p * s.value) / d
    return Tractor(float(s.value), b.inverse @ s.d1, rho, g, p)


def einstein_scale_field(g, sigma):
    """Tractor field callback (value, jacobian) for the section of a scale sigma."""
    def field(coords):
        coords = np.asarray(coords, dtype=float)
        s = sigma.jet(coords, 3)
        jet = g.jet(coords, 3)
        b = CurvatureBundle(coords, jet, order=3)
        d = b.dim
        # value
        grad = b.inverse @ s.d1
        trace_p = float(np.einsum('ij,ij->', b.inverse, b.schouten))
        hess = b.hessian(s)
        lap = float(np.einsum('ij,ij->', b.inverse, hess))
        rho = -(lap + trace_p * s.value) / d
        value = np.concatenate(([float(s.value)], grad, [rho]))
        # jacobian
        jgrad = np.einsum('klm,l->km', b.dinverse, s.d1) + b.inverse @ s.d2
        dhess = (s.d3 - np.einsum('kijm,k->ijm', b.dchristoffel, s.d1)
                 - np.einsum('kij,km->ijm', b.christoffel, s.d2))
        dlap = np.einsum('ijm,ij->m', b.dinverse, hess) + np.einsum('ij,ijm->m', b.inverse, dhess)
        dtrace_p = np.einsum('ijm,ij->m', b.dinverse, b.schouten) + np.einsum('ij,ijm->m', b.inverse, b.dschouten)
        jrho = -(dlap + dtrace_p * s.value + trace_p * s.d1) / d
        jacobian = np.vstack(([s.d1], jgrad, [jrho]))
        return value, jacobian
    return field


class RecurrentRescaleResult:
    def __init__(self, ts, theta, factors, sections, recurrence_residual, parallel_defect,
                 closedness_residual):
        self.ts = ts
        self.theta = theta
        self.factors = factors
        self.sections = sections
        self.recurrence_residual = recurrence_residual
        self.parallel_defect = parallel_defect
        self.closedness_residual = closedness_residual

    def to_json(self):
        return {"nodes": len(self.ts), "factor_min": float(np.min(self.factors)),
                "factor_max": float(np.max(self.factors)),
                "recurrence_residual": self.recurrence_residual,
                "parallel_defect": self.parallel_defect,
                "closedness_residual": self.closedness_residual}


def recurrent_rescale(g, curve, field, theta=None, nodes=65, tolerances=None, settings=None):
    """Rescale a recurrent tractor field along a curve to a parallel one.

    :param field: Callback coords -> (value, jacobian) of the tractor field
    :param theta: None (read off from D t = theta t), a callback coords -> 1-form,
        or an array of theta(velocity) samples at the nodes
    :return: RecurrentRescaleResult with the factors f(t) = exp(-int theta)
    """
    from .transport import transport_tractor
    tolerances = Tolerances.wrap(tolerances)
    ts = np.linspace(0.0, 1.0, nodes)
    values, derivs, closed = [], [], []
    sigma_scale = 0.0
    for t in ts:
        coords = curve.point(t)
        vel = curve.velocity(t)
        b = CurvatureBundle(coords, g.jet(coords, 2), order=2)
        value, jac = field(coords)
        value = np.asarray(value, dtype=float)
        jac = np.asarray(jac, dtype=float)
        values.append(value)
        derivs.append(jac @ vel + omega_from_bundle(b, vel) @ value)
        sigma_scale = max(sigma_scale, abs(value[0]))
        if abs(value[0]) > 0:
            s, y = value[0], value[1:-1]
            dy = (jac[1:-1] * s - np.outer(y, jac[0])) / s ** 2
            nabla_y = dy + np.einsum('kij,j->ki', b.christoffel, y / s)
            form = b.metric @ nabla_y
            closed.append(max_abs(form - form.T) / tensor_scale(form))
    values = np.array(values)
    derivs = np.array(derivs)
    scale = tensor_scale(values)
    if max_abs(values[:, :-1]) <= tolerances.recognizer * scale:
        raise HypothesisFailed("A tractor of the form (0, 0, rho) cannot be recurrent")
    if np.min(np.abs(values[:, 0])) < tolerances.recognizer * scale:
        raise SigmaVanishes("The sigma component vanishes on the curve")
    if theta is None:
        theta_samples = derivs[:, 0] / values[:, 0]
    elif callable(theta):
        theta_samples = np.array([np.asarray(theta(curve.point(t))) @ curve.velocity(t) for t in ts])
    else:
        theta_samples = np.asarray(theta, dtype=float)
    recurrence = max_abs(derivs - theta_samples[:, None] * values) / tensor_scale(derivs, values)
    integral = CubicSpline(ts, theta_samples).antiderivative()(ts)
    factors = np.exp(-integral)
    sections = factors[:, None] * values
    transported = transport_tractor(g, curve, t_eval=ts, settings=settings)
    predicted = np.array([m @ sections[0] for m in transported.node_matrices])
    defect = max_abs(predicted - sections) / tensor_scale(sections)
    closedness = max(closed) if closed else 0.0
    logger.debug(f"Recurrent rescale: recurrence={recurrence:.2e}, defect={defect:.2e}, closed={closedness:.2e}")
    return RecurrentRescaleResult(ts, theta_samples, factors, sections, recurrence, defect, closedness)


def tractor_bianchi_defect(g, p, triples):
    """Cyclic sum of F(X_i, X_j) t_k minus (0, sum s_i C(X_j, X_k)^#, 0).

    :param triples: Three tuples (s_i, X_i, r_i)
    """
    if g.dim < 4:
        raise DimensionError("The tractor Bianchi identity needs dimension >= 4")
    if len(triples) != 3:
        raise ValueError("Exactly three tractors are needed")
    b = curvature_bundle(g, p, order=3)
    ts = [np.concatenate(([s], np.asarray(x, dtype=float), [r])) for s, x, r in triples]
    xs = [np.asarray(x, dtype=float) for _, x, _ in triples]
    lhs = np.zeros(b.dim + 2)
    rhs = np.zeros(b.dim + 2)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        lhs += curvature_matrix_from_bundle(b, xs[i], xs[j]) @ ts[k]
        cjk = np.einsum('abc,a,b->c', b.cotton, xs[j], xs[k])
        rhs[1:-1] += triples[i][0] * (b.inverse @ cjk)
    return Tractor.from_vector(lhs - rhs, g, p)
