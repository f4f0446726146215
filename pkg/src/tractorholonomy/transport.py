# -*- coding: UTF-8 -*-
"""
tractorholonomy.transport
~~~~~~~~~~~~~~~~~~~~~~~~~

Parallel transport of tangent vectors and tractors along curves.

Transport matrices map a vector (or tractor) at the start of the curve to its
parallel translate at the end, i.e. they solve ``M' = -A(gamma') M`` with
``A`` the Christoffel matrix (tangent mode) or the tractor connection matrix
(tractor mode).

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from .curvature import CurvatureBundle
from .integrate import integrate, IntegratorSettings
from .tractor import omega_from_bundle, gram_matrix
from .exceptions import DomainExit, DimensionError, DomainError
from .util import Mode, max_abs


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class TransportResult:
    def __init__(self, matrix, curve, steps, error_estimate, mode, node_params=None, node_matrices=None):
        self.matrix = matrix
        self.curve = curve
        self.steps = steps
        self.error_estimate = error_estimate
        self.mode = mode
        self.node_params = node_params
        self.node_matrices = node_matrices

    def gram(self, g, coords):
        value = g.value(coords)
        return value if self.mode == Mode.TANGENT else gram_matrix(value)

    def gram_residual(self, g):
        """max |P^T G(end) P - G(start)|"""
        g0 = self.gram(g, self.curve.start())
        g1 = self.gram(g, self.curve.end())
        return max_abs(self.matrix.T @ g1 @ self.matrix - g0)

    def to_json(self):
        return {"mode": self.mode.value, "steps": self.steps, "error_estimate": self.error_estimate,
                "curve": self.curve.to_json()}


def connection_rhs(g, curve_piece, mode):
    """Right hand side t, M -> -A(gamma'(t)) M of the transport equation."""
    chart = g.chart
    order = 1 if mode == Mode.TANGENT else 2

    def rhs(t, m):
        coords = curve_piece.point(t)
        if not chart.contains(coords):
            raise DomainExit(f"Curve left the chart at {coords.tolist()}")
        vel = curve_piece.velocity(t)
        bundle = CurvatureBundle(coords, g.jet(coords, order), order=order)
        if mode == Mode.TANGENT:
            a = np.einsum('kij,i->kj', bundle.christoffel, vel)
        else:
            a = omega_from_bundle(bundle, vel)
        return -a @ m

    return rhs


def transport(g, curve, mode=Mode.TRACTOR, t_eval=None, settings=None):
    """Transport matrix along a curve.

    :param t_eval: Curve parameters at which the partial transport matrices
        (start -> gamma(t)) are recorded in ``node_matrices``
    """
    mode = Mode.wrap(mode)
    if mode == Mode.TRACTOR and g.dim < 3:
        raise DimensionError("Tractor transport needs dimension >= 3")
    if curve.chart != g.chart:
        raise DomainError("Curve and metric live on different charts")
    settings = IntegratorSettings.wrap(settings)
    size = g.dim if mode == Mode.TANGENT else g.dim + 2
    total = np.eye(size)
    steps, error = 0, 0.0
    nodes = None if t_eval is None else np.asarray(t_eval, dtype=float)
    node_matrices = {} if nodes is not None else None
    for piece, t0, t1 in curve.smooth_pieces():
        local_nodes, local_idx = None, []
        if nodes is not None:
            mask = (nodes >= t0) & (nodes <= t1)
            local_idx = [k for k in np.flatnonzero(mask) if k not in node_matrices]
            local_nodes = [(nodes[k] - t0) / (t1 - t0) for k in local_idx]
            local_nodes = [min(max(s, 0.0), 1.0) for s in local_nodes]
        result = integrate(connection_rhs(g, piece, mode), np.eye(size), (0.0, 1.0),
                           t_eval=local_nodes, settings=settings)
        if nodes is not None:
            order = np.argsort(local_nodes, kind="stable")
            for pos, k in enumerate(np.asarray(local_idx)[order]):
                node_matrices[k] = result.y_eval[pos] @ total
        total = result.y @ total
        steps += result.steps
        error += result.error_estimate
    node_list = None
    if nodes is not None:
        node_list = [node_matrices[k] for k in range(len(nodes))]
    return TransportResult(total, curve, steps, error, mode, nodes, node_list)


def transport_tangent(g, curve, t_eval=None, settings=None):
    return transport(g, curve, Mode.TANGENT, t_eval, settings)


def transport_tractor(g, curve, t_eval=None, settings=None):
    return transport(g, curve, Mode.TRACTOR, t_eval, settings)
