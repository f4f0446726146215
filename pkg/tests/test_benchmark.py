import math

import numpy as np
import pytest

from tractorholonomy import holonomy, transport
from tractorholonomy.curvature import curvature_bundle
from tractorholonomy.curves import CurveSpec
from tractorholonomy.geometry import Chart, MetricField
from tractorholonomy.spacetimes import build
from tractorholonomy.util import Mode


n = 4


def stereographic_sphere(d):
    names = ["x{}".format(i) for i in range(d)]
    chart = Chart(names)
    factor = "4/(1 + {})^2".format(" + ".join(name + "^2" for name in names))
    return MetricField.from_expressions(chart, {(i, i): factor for i in range(d)}, signature_hint=(0, d))


# --- CURVATURE ---


@pytest.mark.benchmark(group="curvature")
def test_curvature_bundle_sphere(benchmark):
    g = stereographic_sphere(n)
    p = g.chart.point([0.1, -0.2, 0.3, 0.05])

    def c():
        return curvature_bundle(g, p, order=3).scalar

    assert benchmark(c) == pytest.approx(n * (n - 1))


@pytest.mark.benchmark(group="curvature")
def test_curvature_bundle_plane_wave(benchmark):
    st = build({"family": "plane_wave", "a": [["z", 0], [0, "sin(z)"]]})
    p = st.chart.center()

    def c():
        return curvature_bundle(st.metric, p, order=3).scalar

    assert benchmark(c) == pytest.approx(0.0, abs=1e-12)


# --- TRANSPORT ---


@pytest.mark.benchmark(group="transport")
def test_transport_tangent_rectangle(benchmark):
    chart = Chart(["th", "ph"], domain_box=[(0.1, 3.0), None])
    g = MetricField.from_expressions(chart, {(0, 0): "1", (1, 1): "sin(th)^2"})
    loop = CurveSpec.rectangle(chart, [1.0, 0.0], 0, 1, 0.3)

    def t():
        return np.trace(transport.transport_tangent(g, loop).matrix)

    angle = (math.cos(1.0) - math.cos(1.3)) * 0.3
    assert benchmark(t) == pytest.approx(2 * math.cos(angle), rel=1e-8)


@pytest.mark.benchmark(group="transport")
def test_transport_tractor_rectangle(benchmark):
    st = build({"family": "plane_wave"})
    loop = CurveSpec.rectangle(st.chart, st.base_point.coords, 1, 3, 0.2)

    def t():
        return transport.transport_tractor(st.metric, loop).gram_residual(st.metric)

    assert benchmark(t) < 1e-8


# --- HOLONOMY ---


@pytest.mark.benchmark(group="holonomy")
def test_holonomy_algebra_sphere(benchmark):
    g = stereographic_sphere(3)
    settings = holonomy.HolonomySettings(loops=2, lassos=1, nodes_per_loop=3, refine=False, parallel=False)

    def h():
        return holonomy.holonomy_algebra(g, g.chart.center(), Mode.TANGENT, settings).dim

    assert benchmark(h) == 3
