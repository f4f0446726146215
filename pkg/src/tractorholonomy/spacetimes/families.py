# -*- coding: UTF-8 -*-
"""
tractorholonomy.spacetimes.families
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Builders for the metric families of :class:`~tractorholonomy.spacetimes.spec.Family`.

Wave families use the coordinates (x, y1..yn, z) and the normal form

    h = 2 dx dz + sum_i u_i dy_i dz + f dz^2 + sum_ij g_ij dy_i dy_j

so that h(d_yi, d_z) = u_i / 2 and X = d/dx is recurrent with
theta = Gamma^x_(. x) (equal to f_x / 2 dz when u and g do not depend on x).

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from ..jets import Jet
from ..expressions import Expression
from ..geometry import Chart, MetricField, Point
from ..exceptions import SpecError
from .spec import Family, SpacetimeSpec, wave_coords, depends_on_x
from .recognizers import RecurrentStructure


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


wave_box = {"x": (-2.0, 2.0), "y": (-1.5, 1.5), "z": (0.5, 2.0)}


class Spacetime:
    def __init__(self, metric, spec, recurrent=None, base_point=None):
        """Built metric with its structural metadata.

        :param base_point: Base point for holonomy analyses, default the centre of the chart
        """
        self.metric = metric
        self.spec = spec
        self.recurrent = recurrent
        if recurrent is not None:
            metric.metadata["recurrent"] = recurrent
        if base_point is None:
            base_point = metric.chart.center()
        elif not isinstance(base_point, Point):
            base_point = Point(metric.chart, base_point)
        self.base_point = base_point

    @property
    def chart(self):
        return self.metric.chart

    @property
    def dim(self):
        return self.metric.dim

    def to_json(self):
        return {"spec": self.spec.to_dict(), "chart": self.chart.to_json(), "dim": self.dim,
                "signature": None if self.metric.signature_hint is None else list(self.metric.signature_hint),
                "recurrent": None if self.recurrent is None else self.recurrent.to_json(),
                "base_point": self.base_point.coords.tolist()}

    def __repr__(self):
        return f"Spacetime({self.spec.family.value}, dim={self.dim})"


def make_chart(coords, default_box, spec, name=None):
    """Chart with the default box, overridden per coordinate by ``spec.domain``."""
    box = dict(zip(coords, default_box))
    if spec.domain is not None:
        for key, bounds in spec.domain.items():
            if key not in box:
                raise SpecError(f"Domain given for unknown coordinate {key}, chart has {coords}")
            box[key] = (float(bounds[0]), float(bounds[1]))
    return Chart(coords, [box[c] for c in coords], name=name)


def _constant(value):
    def fn(coords, order):
        return Jet.constant(value, len(coords), order)
    return fn


def normal_form_metric(chart, f, u=None, screen=None, screen_indices=None, name=None, metadata=None):
    """Metric in the recurrent normal form on a chart (x, screen..., z).

    :param f: Expression for h(d_z, d_z)
    :param u: Expressions u_i, h(d_yi, d_z) = u_i / 2
    :param screen: Dict (i, j) -> Expression (or number) on screen indices, default the identity
    """
    d = chart.dim
    if screen_indices is None:
        screen_indices = list(range(1, d - 1))
    components = {(0, d - 1): _constant(1.0), (d - 1, d - 1): f.jet}
    if u is not None:
        for i, ui in zip(screen_indices, u):
            half = Expression(f"({ui.text})/2", chart.coord_names)
            components[(i, d - 1)] = half.jet
    if screen is None:
        screen = {(i, i): 1.0 for i in screen_indices}
    for (i, j), value in screen.items():
        components[(min(i, j), max(i, j))] = value.jet if isinstance(value, Expression) else _constant(float(value))
    return MetricField.from_components(chart, components, signature_hint=(1, d - 1), name=name,
                                       metadata=metadata)


def quadratic_form_text(a, names):
    terms = []
    for i, row in enumerate(a):
        for j, entry in enumerate(row):
            if isinstance(entry, str) or float(entry) != 0.0:
                terms.append(f"({entry})*{names[i]}*{names[j]}")
    return " + ".join(terms) if terms else "0"


def coefficient_function(a):
    """z -> numpy array of the a_ij(z)."""
    exprs = [[Expression(entry, ["z"]) for entry in row] for row in a]

    def fn(z):
        return np.array([[e.value([z]) for e in row] for row in exprs])
    return fn


def _wave(spec):
    p = spec.params
    family = spec.family
    n = int(p["n"])
    coords = wave_coords(n)
    chart = make_chart(coords, [wave_box["x"]] + [wave_box["y"]] * n + [wave_box["z"]], spec,
                       name=family.value)
    metadata = {"family": family.value}
    u = None
    screen = None
    if family in (Family.PLANE_WAVE, Family.CAHEN_WALLACH):
        f = Expression(quadratic_form_text(p["a"], coords[1:-1]), coords)
        metadata["plane_wave_a"] = coefficient_function(p["a"])
        parallel = True
    elif family == Family.RECURRENT_GENERAL:
        f = Expression(p["f"], coords)
        if p["u"] is not None:
            u = [Expression(entry, coords) for entry in p["u"]]
        if p["g"] is not None:
            screen = {(i + 1, j + 1): Expression(p["g"][i][j], coords) for i in range(n) for j in range(i, n)}
        parallel = not depends_on_x(p["f"], coords)
    else:
        f = Expression(p["f"], coords)
        parallel = family == Family.PP_WAVE or not depends_on_x(p["f"], coords)
    g = normal_form_metric(chart, f, u=u, screen=screen, name=spec.name or family.value, metadata=metadata)
    return Spacetime(g, spec, RecurrentStructure(g, parallel=parallel), spec.base_point)


def _block_product(spec):
    """Plane wave with a curved Riemannian 2-block in the screen."""
    p = spec.params
    n = int(p["n"])
    ys = [f"y{i + 1}" for i in range(n)]
    if p["block"] == "sphere":
        block, block_box, curvature = ["theta", "phi"], [(0.5, 2.6), (-1.5, 1.5)], 1.0
    else:
        block, block_box, curvature = ["v1", "v2"], [(-1.0, 1.0), (0.5, 2.0)], -1.0
    coords = ["x"] + ys + block + ["z"]
    chart = make_chart(coords, [wave_box["x"]] + [wave_box["y"]] * n + block_box + [wave_box["z"]], spec,
                       name=spec.family.value)
    f = Expression(quadratic_form_text(p["a"], ys), coords)
    i, j = n + 1, n + 2
    screen = {(k, k): 1.0 for k in range(1, n + 1)}
    if p["block"] == "sphere":
        screen[(i, i)] = 1.0
        screen[(j, j)] = Expression("sin(theta)^2", coords)
    else:
        screen[(i, i)] = Expression("1/v2^2", coords)
        screen[(j, j)] = Expression("1/v2^2", coords)
    metadata = {"family": spec.family.value, "plane_wave_a": coefficient_function(p["a"]),
                "plane_wave_screen": list(range(1, n + 1)), "block_indices": (i, j),
                "block_curvature": curvature}
    g = normal_form_metric(chart, f, screen=screen, name=spec.name or spec.family.value, metadata=metadata)
    return Spacetime(g, spec, RecurrentStructure(g, parallel=True), spec.base_point)


def _flat(spec):
    p = spec.params
    d = int(p["dim"])
    r, s = (1, d - 1) if p["signature"] is None else (int(p["signature"][0]), int(p["signature"][1]))
    coords = [f"x{i + 1}" for i in range(d)]
    chart = make_chart(coords, [(-1.0, 1.0)] * d, spec, name="flat")
    g = MetricField.constant(chart, np.diag([-1.0] * r + [1.0] * s), signature_hint=(r, s),
                             name=spec.name or "flat", metadata={"family": "flat", "einstein_scalar": 0.0})
    return Spacetime(g, spec, base_point=spec.base_point)


def _einstein_model(spec):
    p = spec.params
    m = int(p["dim"])
    radius2 = float(p["radius"]) ** 2
    kind = p["kind"]
    xs = [f"x{i + 1}" for i in range(m)]
    if kind == "sphere" and p["coordinates"] == "polar":
        coords = ["theta", "phi"]
        box = [(0.5, 2.6), (-1.5, 1.5)]
        exprs = {(0, 0): f"{radius2}", (1, 1): f"{radius2}*sin(theta)^2"}
        signature, scalar = (0, 2), 2.0 / radius2
    elif kind == "sphere":
        coords, box = xs, [(-1.0, 1.0)] * m
        conformal = f"4*{radius2}/(1 + {' + '.join(f'{x}^2' for x in xs)})^2"
        exprs = {(i, i): conformal for i in range(m)}
        signature, scalar = (0, m), m * (m - 1) / radius2
    elif kind == "hyperbolic":
        coords = xs[:-1] + ["w"]
        box = [(-1.0, 1.0)] * (m - 1) + [(0.5, 2.0)]
        exprs = {(i, i): f"{radius2}/w^2" for i in range(m)}
        signature, scalar = (0, m), -m * (m - 1) / radius2
    else:
        coords = ["t"] + xs[:-1]
        box = [(0.5, 2.0)] + [(-1.0, 1.0)] * (m - 1)
        exprs = {(0, 0): f"-{radius2}/t^2"}
        exprs.update({(i, i): f"{radius2}/t^2" for i in range(1, m)})
        signature, scalar = (1, m - 1), m * (m - 1) / radius2
    chart = make_chart(coords, box, spec, name=kind)
    g = MetricField.from_expressions(chart, exprs, signature_hint=signature, name=spec.name or kind,
                                     metadata={"family": "einstein_model", "einstein_scalar": scalar})
    return Spacetime(g, spec, base_point=spec.base_point)


def _generic(spec):
    p = spec.params
    coords = list(p["coords"])
    chart = make_chart(coords, [(-1.0, 1.0)] * len(coords), spec, name="generic")
    exprs = {}
    for key, text in p["components"].items():
        a, b = (coords.index(s.strip()) for s in str(key).split(","))
        exprs[(min(a, b), max(a, b))] = str(text)
    sig = (int(p["signature"][0]), int(p["signature"][1]))
    g = MetricField.from_expressions(chart, exprs, signature_hint=sig, name=spec.name or "generic",
                                     metadata={"family": "generic"})
    return Spacetime(g, spec, base_point=spec.base_point)


def _ambient(spec):
    from . import ambient
    base = build(spec.base)
    if spec.family == Family.AMBIENT_EINSTEIN:
        g = ambient.ambient_einstein_metric(base, spec)
    elif spec.family == Family.AMBIENT_RICCI_FLAT:
        g = ambient.ambient_ricci_flat_metric(base, spec)
    else:
        g = ambient.cone_metric(base, spec)
    g.metadata["base"] = base
    return Spacetime(g, spec, base_point=spec.base_point or ambient.default_base_point(base, spec.family))


_builders = {
    Family.FLAT: _flat,
    Family.PP_WAVE: _wave,
    Family.PR_WAVE: _wave,
    Family.PLANE_WAVE: _wave,
    Family.CAHEN_WALLACH: _wave,
    Family.RECURRENT_GENERAL: _wave,
    Family.EINSTEIN_MODEL: _einstein_model,
    Family.RIEMANNIAN_BLOCK_PRODUCT: _block_product,
    Family.AMBIENT_EINSTEIN: _ambient,
    Family.AMBIENT_RICCI_FLAT: _ambient,
    Family.CONE: _ambient,
    Family.GENERIC: _generic,
}


def build(spec):
    """Metric field with structural metadata for a spec (or a spec table)."""
    if not isinstance(spec, SpacetimeSpec):
        spec = SpacetimeSpec.from_dict(spec)
    if spec.family == Family.PP_WAVE and depends_on_x(spec.params["f"], wave_coords(int(spec.params["n"]))):
        raise SpecError(f"pp_wave needs f independent of x, got f = {spec.params['f']}")
    spacetime = _builders[spec.family](spec)
    logger.debug(f"Built {spacetime}")
    return spacetime
