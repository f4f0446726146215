# -*- coding: UTF-8 -*-
"""
tractorholonomy.spacetimes.ambient
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Ambient metrics of a base metric g of dimension n.

* Einstein base with scalar curvature S != 0, on (t, base, s):
  ``c (dt^2 - ds^2) + t^2 g`` with ``c = n (n-1) / S``. It is Ricci-flat
  and d/ds is parallel.
* Its cone, on (t, base): ``c dt^2 + t^2 g``.
* Any base, on (xbar, base, zbar): ``2 dxbar dzbar + zbar^2 g``. Its
  curvature is zbar^2 R(g) in the base slots and zero otherwise.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from ..jets import Jet
from ..geometry import Chart, MetricField, Point
from ..curvature import curvature_bundle, is_einstein
from ..transport import transport_tangent
from ..tractor import causal_tag
from ..exceptions import NotEinstein, ZeroScalar, SpecError
from ..util import Tolerances, max_abs, tensor_scale
from .spec import Family, SpacetimeSpec


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


t_interval = (0.5, 2.0)
s_interval = (-1.0, 1.0)


def einstein_scalar(base, tolerances=None, n=8, seed=0):
    """Scalar curvature of an Einstein base; NotEinstein or ZeroScalar otherwise."""
    tolerances = Tolerances.wrap(tolerances)
    report = is_einstein(base.metric, n=n, seed=seed, tolerances=tolerances)
    if not report["verdict"]:
        raise NotEinstein(f"Base {base.metric.name} is not Einstein "
                          f"(deviation {report['max_deviation']:.3e} > {report['threshold']:.3e})")
    scalar = base.metric.metadata.get("einstein_scalar", 0.5 * (report["scalar_min"] + report["scalar_max"]))
    if abs(report["scalar_max"] - report["scalar_min"]) > tolerances.einstein * max(abs(scalar), 1.0):
        raise NotEinstein(f"Scalar curvature of {base.metric.name} is not constant")
    if abs(scalar) <= tolerances.einstein:
        raise ZeroScalar(f"Base {base.metric.name} has zero scalar curvature")
    return float(scalar)


# --- Specs ---

def _base_spec(base_spec):
    return base_spec if isinstance(base_spec, SpacetimeSpec) else SpacetimeSpec.from_dict(base_spec)


def ambient_einstein(base_spec):
    """Spec of the Einstein ambient metric; checks that the base is Einstein with S != 0."""
    from .families import build
    base_spec = _base_spec(base_spec)
    einstein_scalar(build(base_spec))
    return SpacetimeSpec(Family.AMBIENT_EINSTEIN, {"base": base_spec})


def ambient_ricci_flat(base_spec):
    return SpacetimeSpec(Family.AMBIENT_RICCI_FLAT, {"base": _base_spec(base_spec)})


def cone(base_spec):
    from .families import build
    base_spec = _base_spec(base_spec)
    einstein_scalar(build(base_spec))
    return SpacetimeSpec(Family.CONE, {"base": base_spec})


# --- Metrics ---

def _chart(base, before, after, name, spec):
    chart = base.chart
    names = [b[0] for b in before] + list(chart.coord_names) + [a[0] for a in after]
    box = [b[1] for b in before]
    box += [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi) for lo, hi in zip(chart.lower, chart.upper)]
    box += [a[1] for a in after]
    if spec is not None and spec.domain is not None:
        for key, bounds in spec.domain.items():
            if key not in names:
                raise SpecError(f"Domain given for unknown coordinate {key}, chart has {names}")
            box[names.index(key)] = (float(bounds[0]), float(bounds[1]))
    return Chart(names, box, name=name)


def _signature(base, extra_negative, extra_positive):
    if base.metric.signature_hint is None:
        return None
    r, s = base.metric.signature_hint
    return r + extra_negative, s + extra_positive


def _warped_block(base, coords, order, first, warp):
    """warp^2 * g(base coordinates), embedded in the ambient coordinates."""
    m = base.dim
    d = len(coords)
    block = base.metric.jet(coords[first:first + m], order).embed(range(first, first + m), d)
    return block * (warp * warp)


def ambient_einstein_metric(base, spec=None, tolerances=None):
    scalar = einstein_scalar(base, tolerances)
    m = base.dim
    c = m * (m - 1) / scalar
    d = m + 2
    chart = _chart(base, [("t", t_interval)], [("s", s_interval)], "ambient_einstein", spec)

    def jet_fn(coords, order):
        t = Jet.variable(coords, 0, order)
        result = Jet.zeros((d, d), d, order)
        result[0, 0] = c
        result[d - 1, d - 1] = -c
        result[1:m + 1, 1:m + 1] = _warped_block(base, coords, order, 1, t)
        return result

    return MetricField(chart, jet_fn, _signature(base, 1, 1), name=f"ambient_einstein({base.metric.name})",
                       metadata={"family": "ambient_einstein", "c": c, "base_scalar": scalar})


def cone_metric(base, spec=None, tolerances=None):
    scalar = einstein_scalar(base, tolerances)
    m = base.dim
    c = m * (m - 1) / scalar
    d = m + 1
    chart = _chart(base, [("t", t_interval)], [], "cone", spec)

    def jet_fn(coords, order):
        t = Jet.variable(coords, 0, order)
        result = Jet.zeros((d, d), d, order)
        result[0, 0] = c
        result[1:, 1:] = _warped_block(base, coords, order, 1, t)
        return result

    sig = _signature(base, 0, 1) if c > 0 else _signature(base, 1, 0)
    return MetricField(chart, jet_fn, sig, name=f"cone({base.metric.name})",
                       metadata={"family": "cone", "c": c, "base_scalar": scalar})


def ambient_ricci_flat_metric(base, spec=None):
    m = base.dim
    d = m + 2
    chart = _chart(base, [("xbar", (-1.0, 1.0))], [("zbar", t_interval)], "ambient_ricci_flat", spec)

    def jet_fn(coords, order):
        zbar = Jet.variable(coords, d - 1, order)
        result = Jet.zeros((d, d), d, order)
        result[0, d - 1] = 1.0
        result[d - 1, 0] = 1.0
        result[1:m + 1, 1:m + 1] = _warped_block(base, coords, order, 1, zbar)
        return result

    return MetricField(chart, jet_fn, _signature(base, 1, 1), name=f"ambient_ricci_flat({base.metric.name})",
                       metadata={"family": "ambient_ricci_flat"})


def default_base_point(base, family):
    """Base point over the base's base point, at t = 1 (s = 0) or zbar = 1 (xbar = 0)."""
    coords = list(base.base_point.coords)
    if family == Family.AMBIENT_EINSTEIN:
        return [1.0] + coords + [0.0]
    if family == Family.CONE:
        return [1.0] + coords
    return [0.0] + coords + [1.0]


# --- Structural checks ---

def _layout(spacetime):
    """(base, base slice start, warp coordinate index, extra index or None)"""
    family = spacetime.spec.family
    base = spacetime.metric.metadata["base"]
    d = spacetime.dim
    if family == Family.AMBIENT_RICCI_FLAT:
        return base, 1, d - 1, 0
    if family == Family.AMBIENT_EINSTEIN:
        return base, 1, 0, d - 1
    if family == Family.CONE:
        return base, 1, 0, None
    raise SpecError(f"{family.value} is not an ambient family")


def _base_bundle(spacetime, p, order):
    base, first, _, _ = _layout(spacetime)
    coords = p.coords[first:first + base.dim]
    return curvature_bundle(base.metric, Point(base.chart, coords), order=order)


def expected_christoffel(spacetime, p):
    """Christoffel symbols of the ambient metric from those of the base."""
    family = spacetime.spec.family
    base, first, warp_idx, _ = _layout(spacetime)
    m = base.dim
    d = spacetime.dim
    b = _base_bundle(spacetime, p, order=1)
    warp = p.coords[warp_idx]
    sl = slice(first, first + m)
    gamma = np.zeros((d, d, d))
    gamma[sl, sl, sl] = b.christoffel
    if family == Family.AMBIENT_RICCI_FLAT:
        gamma[0, sl, sl] = -warp * b.metric
    else:
        gamma[warp_idx, sl, sl] = -(warp / spacetime.metric.metadata["c"]) * b.metric
    for k in range(first, first + m):
        gamma[k, k, warp_idx] = gamma[k, warp_idx, k] = 1.0 / warp
    return gamma


def expected_curvature(spacetime, p):
    """zbar^2 R(g) for the Ricci-flat ambient metric, t^2 (R(g) - K(g, g) / c) for the
    Einstein ambient metric and the cone, zero outside the base slots."""
    family = spacetime.spec.family
    base, first, warp_idx, _ = _layout(spacetime)
    m = base.dim
    d = spacetime.dim
    b = _base_bundle(spacetime, p, order=2)
    warp = p.coords[warp_idx]
    block = b.riemann4.copy()
    if family != Family.AMBIENT_RICCI_FLAT:
        g = b.metric
        k0 = np.einsum('jk,il->ijkl', g, g) - np.einsum('ik,jl->ijkl', g, g)
        block = block - k0 / spacetime.metric.metadata["c"]
    r4 = np.zeros((d,) * 4)
    sl = slice(first, first + m)
    r4[sl, sl, sl, sl] = warp ** 2 * block
    return r4


def _points(spacetime, points, n, seed):
    if points is None:
        points = spacetime.chart.sample_points(n, seed=seed)
    return points


def ambient_christoffel_residual(spacetime, points=None, n=50, seed=0, threshold=1e-12):
    worst = 0.0
    points = _points(spacetime, points, n, seed)
    for p in points:
        actual = curvature_bundle(spacetime.metric, p, order=1).christoffel
        expected = expected_christoffel(spacetime, p)
        worst = max(worst, max_abs(actual - expected) / max(tensor_scale(actual, expected), 1.0))
    return {"residual": worst, "threshold": threshold, "verdict": bool(worst <= threshold),
            "points": len(points)}


def ambient_curvature_residual(spacetime, points=None, n=20, seed=0, threshold=1e-8):
    worst, largest = 0.0, 0.0
    points = _points(spacetime, points, n, seed)
    for p in points:
        actual = curvature_bundle(spacetime.metric, p, order=2).riemann4
        expected = expected_curvature(spacetime, p)
        worst = max(worst, max_abs(actual - expected) / max(tensor_scale(actual, expected), 1.0))
        largest = max(largest, max_abs(actual))
    return {"residual": worst, "threshold": threshold, "verdict": bool(worst <= threshold),
            "max_curvature": largest, "points": len(points)}


def parallel_field_check(spacetime, curve=None, nodes=9, tolerances=None, settings=None):
    """d/ds on the Einstein ambient metric: parallel along a curve and its causal type.

    The length g(d/ds, d/ds) = -c is negative (timelike) for S > 0 and
    positive (spacelike) for S < 0.
    """
    from .recognizers import default_curve
    if spacetime.spec.family != Family.AMBIENT_EINSTEIN:
        raise SpecError("parallel_field_check needs an ambient_einstein spacetime")
    tolerances = Tolerances.wrap(tolerances)
    g = spacetime.metric
    d = g.dim
    e_s = np.zeros(d)
    e_s[d - 1] = 1.0
    if curve is None:
        curve = default_curve(g)
    ts = np.linspace(0.0, 1.0, nodes)
    result = transport_tangent(g, curve, t_eval=ts, settings=settings)
    defect = max(max_abs(m @ e_s - e_s) for m in result.node_matrices)
    nabla = max(max_abs(curvature_bundle(g, p, order=1).christoffel[:, :, d - 1])
                for p in g.chart.sample_points(8, seed=0))
    length = float(g.value(spacetime.base_point.coords)[d - 1, d - 1])
    residual = max(defect, nabla)
    return {"residual": residual, "threshold": tolerances.transport, "verdict": bool(residual <= tolerances.transport),
            "transport_defect": defect, "nabla_residual": nabla, "length": length,
            "causal_tag": causal_tag(length, tolerances.causal).value,
            "base_scalar": g.metadata["base_scalar"]}


def ambient_higher_derivative_samples(spacetime, p=None, tolerances=None):
    """First covariant derivatives of the curvature of the Ricci-flat ambient
    metric of a plane wave, at a point.

    Checks (nabla_Yi R)(Yj, Z, Z, Zbar) = a_ij zbar and
    (nabla_Z R)(Yj, Z, Yi, Zbar) = -a_ij zbar and returns the endomorphisms
    R(A, B) and (nabla_U R)(A, B) of all coordinate directions as holonomy
    algebra samples.
    """
    tolerances = Tolerances.wrap(tolerances)
    if spacetime.spec.family != Family.AMBIENT_RICCI_FLAT:
        raise SpecError("Higher derivative samples need an ambient_ricci_flat spacetime")
    base = spacetime.metric.metadata["base"]
    if "plane_wave_a" not in base.metric.metadata or "block_indices" in base.metric.metadata:
        raise SpecError("Higher derivative samples need a plane wave base")
    g = spacetime.metric
    if p is None:
        p = spacetime.base_point
    d = g.dim
    n = base.dim - 2
    ys = [2 + i for i in range(n)]
    z, zbar = n + 2, d - 1
    b = curvature_bundle(g, p, order=3)
    nr = b.nabla_riemann
    a = base.metric.metadata["plane_wave_a"](p.coords[z])
    w = p.coords[zbar]
    first = np.array([[nr[ys[i], ys[j], z, z, zbar] for j in range(n)] for i in range(n)])
    second = np.array([[nr[z, ys[j], z, ys[i], zbar] for j in range(n)] for i in range(n)])
    residual = max(max_abs(first - a * w), max_abs(second + a * w)) / max(tensor_scale(a * w), 1.0)
    samples = [b.riemann_endo[:, :, i, j] for i in range(d) for j in range(i + 1, d)]
    for u in range(d):
        for i in range(d):
            for j in range(i + 1, d):
                samples.append(b.inverse @ nr[u, i, j].T)
    threshold = tolerances.identity
    return {"first": first.tolist(), "second": second.tolist(), "expected_first": (a * w).tolist(),
            "expected_second": (-a * w).tolist(), "residual": residual, "threshold": threshold,
            "verdict": bool(residual <= threshold), "samples": samples, "point": p.coords.tolist()}
