# -*- coding: UTF-8 -*-
"""
tractorholonomy.curvature
~~~~~~~~~~~~~~~~~~~~~~~~~

Levi-Civita connection and curvature tensors from exact metric jets.

Conventions (documented in ``docs/usage/conventions.rst``)::

    R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
    riemann4[i,j,k,l] = g(R(d_i, d_j) d_k, d_l)
    ricci[j,k] = trace(X -> R(X, d_j) d_k)            (positive on spheres)
    schouten = (ricci - S/(2(d-1)) g) / (d-2)
    weyl4 = riemann4 + kulkarni_nomizu(g, schouten)    (totally trace-free)
    cotton[x,y,z] = (nabla_x P)(y,z) - (nabla_y P)(x,z)

All tensors are dense numpy arrays with covariant indices unless stated
otherwise. Derivatives of curvature (nabla P, nabla R, nabla W) come from
order-3 jets by differentiating the formulas, never by differencing.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from . import jets
from .geometry import check_value, conformal_rescale, _check_chart
from .exceptions import DimensionError, DegenerateMetric
from .util import Tolerances, tensor_scale, max_abs


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def kulkarni_nomizu(a, b):
    """(A o B)(U,V,X,Y) = A(U,X)B(V,Y) + A(V,Y)B(U,X) - A(U,Y)B(V,X) - A(V,X)B(U,Y)"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (np.einsum('ux,vy->uvxy', a, b) + np.einsum('vy,ux->uvxy', a, b)
            - np.einsum('uy,vx->uvxy', a, b) - np.einsum('vx,uy->uvxy', a, b))


def _kulkarni_nomizu_d(a, db):
    """Kulkarni-Nomizu product with a trailing derivative axis on the second factor."""
    return (np.einsum('ux,vyn->uvxyn', a, db) + np.einsum('vy,uxn->uvxyn', a, db)
            - np.einsum('uy,vxn->uvxyn', a, db) - np.einsum('vx,uyn->uvxyn', a, db))


def _covariant_derivative(t, dt, gamma):
    """nabla T for a covariant tensor T with partial derivatives dt (last axis).

    :return: Array with the derivative index first
    """
    rank = t.ndim
    result = np.moveaxis(dt, -1, 0).copy()
    letters = 'abcdefgh'[:rank]
    for slot in range(rank):
        src = letters[:slot] + 'm' + letters[slot + 1:]
        result -= np.einsum('mn{},{}->n{}'.format(letters[slot], src, letters), gamma, t)
    return result


class CurvatureBundle:
    def __init__(self, coords, jet, order=3):
        """All curvature quantities at one point, computed in a single pass.

        :param coords: Coordinates of the point
        :param jet: Metric jet at the point, of at least the requested order
        :param order: 1 for the connection only, 2 for curvature, 3 for the
            derivatives of curvature (cotton, nabla R, nabla W)
        """
        self.coords = np.asarray(coords, dtype=float)
        self.order = order
        g = jet.value
        d = g.shape[0]
        self.dim = d
        self.metric = g
        self.inverse = np.linalg.inv(g)
        ginv = self.inverse
        dg = jet.d1
        self.dmetric = dg
        gam1 = 0.5 * (dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1))
        self.christoffel = np.einsum('kl,lij->kij', ginv, gam1)
        self.christoffel_first = gam1
        if order < 2:
            return
        gamma = self.christoffel
        d2g = jet.d2
        dginv = -np.einsum('ka,abm,bl->klm', ginv, dg, ginv)
        self.dinverse = dginv
        dgam1 = 0.5 * (d2g.transpose(0, 2, 1, 3) + d2g - d2g.transpose(2, 0, 1, 3))
        dgamma = np.einsum('klm,lij->kijm', dginv, gam1) + np.einsum('kl,lijm->kijm', ginv, dgam1)
        self.dchristoffel = dgamma
        # R3[a,k,i,j] = (R(d_i, d_j) d_k)^a
        r3 = (np.einsum('ajki->akij', dgamma) - np.einsum('aikj->akij', dgamma)
              + np.einsum('aim,mjk->akij', gamma, gamma) - np.einsum('ajm,mik->akij', gamma, gamma))
        self.riemann_endo = r3
        self.riemann4 = np.einsum('la,akij->ijkl', g, r3)
        self.ricci = np.einsum('azay->yz', r3)
        self.scalar = float(np.einsum('yz,yz->', ginv, self.ricci))
        if d >= 3:
            self.schouten = (self.ricci - self.scalar / (2 * (d - 1)) * g) / (d - 2)
            self.weyl4 = self.riemann4 + kulkarni_nomizu(g, self.schouten)
        else:
            self.schouten = None
            self.weyl4 = None
        if order < 3:
            return
        d3g = jet.d3
        d2ginv = -(np.einsum('kan,abm,bl->klmn', dginv, dg, ginv)
                   + np.einsum('ka,abmn,bl->klmn', ginv, d2g, ginv)
                   + np.einsum('ka,abm,bln->klmn', ginv, dg, dginv))
        d2gam1 = 0.5 * (d3g.transpose(0, 2, 1, 3, 4) + d3g - d3g.transpose(2, 0, 1, 3, 4))
        d2gamma = (np.einsum('klmn,lij->kijmn', d2ginv, gam1) + np.einsum('klm,lijn->kijmn', dginv, dgam1)
                   + np.einsum('kln,lijm->kijmn', dginv, dgam1) + np.einsum('kl,lijmn->kijmn', ginv, d2gam1))
        dr3 = (np.einsum('ajkin->akijn', d2gamma) - np.einsum('aikjn->akijn', d2gamma)
               + np.einsum('aimn,mjk->akijn', dgamma, gamma) + np.einsum('aim,mjkn->akijn', gamma, dgamma)
               - np.einsum('ajmn,mik->akijn', dgamma, gamma) - np.einsum('ajm,mikn->akijn', gamma, dgamma))
        self.driemann_endo = dr3
        driemann4 = np.einsum('lan,akij->ijkln', dg, r3) + np.einsum('la,akijn->ijkln', g, dr3)
        self.nabla_riemann = _covariant_derivative(self.riemann4, driemann4, gamma)
        dricci = np.einsum('azayn->yzn', dr3)
        self.dricci = dricci
        self.dscalar = np.einsum('yzn,yz->n', dginv, self.ricci) + np.einsum('yz,yzn->n', ginv, dricci)
        if d >= 3:
            c = 1.0 / (2 * (d - 1))
            dschouten = (dricci - c * self.dscalar[None, None, :] * g[:, :, None]
                         - c * self.scalar * dg) / (d - 2)
            self.dschouten = dschouten
            # nabla_schouten[n,a,b] = (nabla_n P)(a,b)
            self.nabla_schouten = _covariant_derivative(self.schouten, dschouten, gamma)
            self.cotton = self.nabla_schouten - self.nabla_schouten.transpose(1, 0, 2)
            dweyl = driemann4 + _kulkarni_nomizu_d(g, dschouten) + _kulkarni_nomizu_d(self.schouten, dg)
            self.nabla_weyl = _covariant_derivative(self.weyl4, dweyl, gamma)
            self.divergence_weyl = np.einsum('ne,nxyze->xyz', ginv, self.nabla_weyl)
        else:
            self.dschouten = None
            self.nabla_schouten = None
            self.cotton = None
            self.nabla_weyl = None
            self.divergence_weyl = None

    def hessian(self, sigma_jet):
        """Symmetric Hessian (nabla_X d sigma)(Y) of a scalar jet of order >= 2."""
        return sigma_jet.d2 - np.einsum('kij,k->ij', self.christoffel, sigma_jet.d1)

    def laplacian(self, sigma_jet):
        return float(np.einsum('ij,ij->', self.inverse, self.hessian(sigma_jet)))

    def identity_residuals(self):
        """Relative residuals of the algebraic identities the tensors must satisfy."""
        res = {}
        gamma = self.christoffel
        res["christoffel_symmetry"] = max_abs(gamma - gamma.transpose(0, 2, 1)) / tensor_scale(gamma)
        compat = (np.moveaxis(self.dmetric, -1, 0) - np.einsum('lki,lj->kij', gamma, self.metric)
                  - np.einsum('lkj,il->kij', gamma, self.metric))
        res["metric_compatibility"] = max_abs(compat) / tensor_scale(self.dmetric, self.metric)
        if self.order < 2:
            return res
        r = self.riemann4
        scale = tensor_scale(r)
        res["riemann_antisymmetry_12"] = max_abs(r + np.einsum('jikl->ijkl', r)) / scale
        res["riemann_antisymmetry_34"] = max_abs(r + np.einsum('ijlk->ijkl', r)) / scale
        res["riemann_pair_symmetry"] = max_abs(r - np.einsum('klij->ijkl', r)) / scale
        res["riemann_first_bianchi"] = max_abs(r + np.einsum('jkil->ijkl', r) + np.einsum('kijl->ijkl', r)) / scale
        res["ricci_symmetry"] = max_abs(self.ricci - self.ricci.T) / tensor_scale(self.ricci)
        if self.schouten is not None:
            res["schouten_trace"] = (abs(float(np.einsum('ij,ij->', self.inverse, self.schouten))
                                         - self.scalar / (2 * (self.dim - 1)))
                                     / tensor_scale(self.schouten, self.scalar))
            w = self.weyl4
            traces = [max_abs(np.tensordot(w, self.inverse, axes=([p, q], [0, 1])))
                      for p in range(4) for q in range(p + 1, 4)]
            res["weyl_trace"] = max(traces) / tensor_scale(w, r)
        if self.order >= 3 and self.cotton is not None:
            c = self.cotton
            res["cotton_antisymmetry"] = max_abs(c + c.transpose(1, 0, 2)) / tensor_scale(c)
            res["cotton_divergence"] = (max_abs((self.dim - 3) * c - self.divergence_weyl)
                                        / tensor_scale((self.dim - 3) * c, self.divergence_weyl))
        return res

    def to_json(self):
        result = {"coords": self.coords.tolist(), "metric": self.metric.tolist(),
                  "christoffel": self.christoffel.tolist()}
        if self.order >= 2:
            result.update({"riemann4": self.riemann4.tolist(), "ricci": self.ricci.tolist(),
                           "scalar": self.scalar})
            if self.schouten is not None:
                result.update({"schouten": self.schouten.tolist(), "weyl4": self.weyl4.tolist()})
        if self.order >= 3 and self.cotton is not None:
            result["cotton"] = self.cotton.tolist()
        result["identity_residuals"] = self.identity_residuals()
        return result


def curvature_bundle(g, p, order=3, check=True, tolerances=None):
    """Connection and curvature of g at p in one pass."""
    _check_chart(g, p)
    jet = g.jet(p.coords, order)
    if check:
        check_value(g, jet.value, p.coords, tolerances)
    return CurvatureBundle(p.coords, jet, order)


def christoffel(g, p):
    """Gamma[k,i,j] = Gamma^k_ij"""
    return curvature_bundle(g, p, order=1).christoffel


def riemann(g, p):
    return curvature_bundle(g, p, order=2).riemann4


def ricci(g, p):
    return curvature_bundle(g, p, order=2).ricci


def scalar(g, p):
    return curvature_bundle(g, p, order=2).scalar


def _require_dim(g, minimum, what):
    if g.dim < minimum:
        raise DimensionError(f"{what} needs dimension >= {minimum}, got {g.dim}")


def schouten(g, p):
    _require_dim(g, 3, "Schouten tensor")
    return curvature_bundle(g, p, order=2).schouten


def weyl(g, p):
    _require_dim(g, 4, "Weyl tensor")
    return curvature_bundle(g, p, order=2).weyl4


def cotton(g, p):
    _require_dim(g, 3, "Cotton tensor")
    return curvature_bundle(g, p, order=3).cotton


def nabla_riemann(g, p):
    """nabla R with the derivative index first: [n,i,j,k,l] = (nabla_n R)(i,j,k,l)"""
    return curvature_bundle(g, p, order=3).nabla_riemann


def divergence_weyl(g, p):
    _require_dim(g, 4, "Divergence of the Weyl tensor")
    return curvature_bundle(g, p, order=3).divergence_weyl


def hessian(g, sigma, p):
    bundle = curvature_bundle(g, p, order=1)
    return bundle.hessian(sigma.jet_at(p, 2))


def sectional_curvature(g, p, u, v):
    bundle = curvature_bundle(g, p, order=2)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    gm = bundle.metric
    denom = (u @ gm @ u) * (v @ gm @ v) - (u @ gm @ v) ** 2
    if abs(denom) < 1e-14:
        raise DegenerateMetric("Plane spanned by u and v is degenerate")
    return float(np.einsum('ijkl,i,j,k,l->', bundle.riemann4, u, v, v, u) / denom)


def _sample(g, points, n, seed):
    if points is None:
        points = g.chart.sample_points(n, seed=seed)
    return points


def is_einstein(g, points=None, n=20, seed=0, tolerances=None):
    """Report whether Ric = (S/d) g at the sampled points."""
    tolerances = Tolerances.wrap(tolerances)
    points = _sample(g, points, n, seed)
    deviation, scale, scalars = 0.0, 1e-30, []
    for p in points:
        b = curvature_bundle(g, p, order=2, tolerances=tolerances)
        trace_free = b.ricci - b.scalar / g.dim * b.metric
        deviation = max(deviation, max_abs(trace_free))
        scale = max(scale, tensor_scale(b.ricci, b.scalar / g.dim * b.metric))
        scalars.append(b.scalar)
    threshold = tolerances.einstein * scale
    return {"verdict": bool(deviation <= threshold), "max_deviation": deviation, "threshold": threshold,
            "points": len(points), "scalar_min": float(min(scalars)), "scalar_max": float(max(scalars))}


def is_c_space(g, points=None, n=20, seed=0, tolerances=None):
    """Report whether the Cotton tensor vanishes at the sampled points."""
    _require_dim(g, 3, "Cotton tensor")
    tolerances = Tolerances.wrap(tolerances)
    points = _sample(g, points, n, seed)
    deviation, scale = 0.0, 1e-30
    for p in points:
        b = curvature_bundle(g, p, order=3, tolerances=tolerances)
        deviation = max(deviation, max_abs(b.cotton))
        scale = max(scale, tensor_scale(b.nabla_schouten, b.schouten))
    threshold = tolerances.c_space * scale
    return {"verdict": bool(deviation <= threshold), "max_deviation": deviation, "threshold": threshold,
            "points": len(points)}


# --- Conformal transformation laws ---

def schouten_transformation_residual(g, phi, p):
    """Relative residual of P(e^{2 phi} g) = P - H_phi + d phi^2 - |d phi|^2 g / 2."""
    _require_dim(g, 3, "Schouten tensor")
    b = curvature_bundle(g, p, order=2)
    bt = curvature_bundle(conformal_rescale(g, phi), p, order=2)
    ph = phi.jet_at(p, 2)
    dphi = ph.d1
    expected = (b.schouten - b.hessian(ph) + np.outer(dphi, dphi)
                - 0.5 * float(dphi @ b.inverse @ dphi) * b.metric)
    return max_abs(bt.schouten - expected) / tensor_scale(bt.schouten, expected)


def weyl_covariance_residual(g, phi, p):
    """Relative residual of W(e^{2 phi} g) = e^{2 phi} W(g)."""
    _require_dim(g, 4, "Weyl tensor")
    w = curvature_bundle(g, p, order=2).weyl4
    wt = curvature_bundle(conformal_rescale(g, phi), p, order=2).weyl4
    expected = np.exp(2 * phi.value(p.coords)) * w
    return max_abs(wt - expected) / tensor_scale(wt, expected)


def cotton_divergence_residual(g, p):
    """Relative residual of (d-3) C = div W."""
    _require_dim(g, 4, "Divergence of the Weyl tensor")
    b = curvature_bundle(g, p, order=3)
    lhs = (g.dim - 3) * b.cotton
    return max_abs(lhs - b.divergence_weyl) / tensor_scale(lhs, b.divergence_weyl)


def log_hessian_residual(g, sigma, p):
    """Residual of H_{log sigma} = H_sigma / sigma - d sigma^2 / sigma^2."""
    b = curvature_bundle(g, p, order=1)
    s = sigma.jet_at(p, 2)
    lhs = b.hessian(jets.log(s))
    rhs = b.hessian(s) / s.value - np.outer(s.d1, s.d1) / s.value ** 2
    return max_abs(lhs - rhs) / tensor_scale(lhs, rhs)
