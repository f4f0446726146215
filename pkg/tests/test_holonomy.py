import math
import logging

import numpy as np
import pytest

from tractorholonomy import holonomy, lie
from tractorholonomy.holonomy import HolonomySettings, LoopFamily, span_algebra
from tractorholonomy.curves import CurveSpec
from tractorholonomy.geometry import Chart, MetricField
from tractorholonomy.exceptions import SpecError, NoRecurrentField
from tractorholonomy.config import RunConfig
from tractorholonomy.analyses import RunContext, run_analysis
from tractorholonomy.spacetimes import build
from tractorholonomy import util
from tractorholonomy.util import Mode


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def small_settings(**kwargs):
    settings = {"loops": 2 if util.test_quick() else 4, "lassos": 1 if util.test_quick() else 2, "nodes_per_loop": 3,
                "parallel": False}
    settings.update(kwargs)
    return HolonomySettings(**settings)


def round_sphere_2d():
    chart = Chart(["th", "ph"], domain_box=[(0.1, 3.0), None])
    return MetricField.from_expressions(chart, {(0, 0): "1", (1, 1): "sin(th)^2"}, signature_hint=(0, 2))


def stereographic_sphere(d):
    names = ["x{}".format(i) for i in range(d)]
    chart = Chart(names)
    factor = "4/(1 + {})^2".format(" + ".join(n + "^2" for n in names))
    return MetricField.from_expressions(chart, {(i, i): factor for i in range(d)}, signature_hint=(0, d))


def test_settings():
    settings = HolonomySettings(loops=8, lassos=3)
    refined = settings.refined()
    assert refined.loops == 16
    assert refined.lassos == 6
    assert not refined.refine
    assert refined.integrator.rtol == pytest.approx(settings.integrator.rtol / 2)
    assert HolonomySettings.wrap({"loops": 5}).loops == 5
    assert settings.to_json()["rectangle_scales"] == [0.4, 0.2, 0.1]


def test_span_algebra():
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    span = span_algebra([rotation, 2 * rotation, -0.5 * rotation])
    assert span.dim == 1
    assert span.contains(3 * rotation)
    assert not span.contains(np.eye(2))
    assert span.is_abelian()
    assert span.gap_ratio() > 1e6
    e12 = np.zeros((3, 3))
    e12[0, 1], e12[1, 0] = 1.0, -1.0
    e13 = np.zeros((3, 3))
    e13[0, 2], e13[2, 0] = 1.0, -1.0
    assert span_algebra([e12, e13]).dim == 2
    closed = span_algebra([e12, e13], close=True)
    assert closed.dim == 3
    assert closed.closure_rounds >= 1
    assert not closed.is_abelian()
    zero = span_algebra([np.zeros((3, 3)), 1e-12 * e12])
    assert zero.dim == 0
    assert zero.to_json()["dim"] == 0
    assert span_algebra([]).dim == 0


def test_loop_family():
    chart = Chart(["x", "y", "z"], domain_box=[(-1, 1), (-1, 1), (-1, 1)])
    base = chart.center()
    settings = HolonomySettings(loops=5, lassos=2)
    family = LoopFamily.default(chart, base, settings)
    inventory = family.inventory()
    assert inventory["rectangle"] == 3 * 3
    assert inventory["lasso"] == 2
    assert inventory["smooth"] <= 5
    for loop_id, curve, info in family:
        assert curve.is_loop
        np.testing.assert_array_equal(curve.start(), base.coords)
    again = LoopFamily.default(chart, base, settings)
    for (_, c1, _), (_, c2, _) in zip(family, again):
        np.testing.assert_array_equal(c1.point(0.3), c2.point(0.3))
    segment = CurveSpec.segment(chart, base.coords, [0.5, 0.0, 0.0])
    with pytest.raises(SpecError):
        LoopFamily(base, [(0, segment, {"type": "segment"})])


def test_sphere_tangent_holonomy():
    g = round_sphere_2d()
    base = g.chart.center()
    span = holonomy.holonomy_algebra(g, base, Mode.TANGENT, small_settings())
    assert span.dim == 1
    assert span.stable
    assert span.refined_dim == 1
    assert span.size == 2
    assert "stable under refinement" in span.verdict
    assert span.inventory["types"]["rectangle"] == 3
    assert "rectangle" not in span.inventory["refinement"]["types"]


def test_flat_holonomy_is_trivial():
    chart = Chart(["t", "x", "y"])
    g = MetricField.constant(chart, np.diag([-1.0, 1.0, 1.0]))
    span = holonomy.holonomy_algebra(g, chart.center(), Mode.TRACTOR, small_settings(refine=False))
    assert span.dim == 0
    assert "refinement not run" in span.verdict
    assert span.size == 5


def test_conformally_flat_tractor_holonomy():
    g = stereographic_sphere(3)
    span = holonomy.holonomy_algebra(g, g.chart.center(), Mode.TRACTOR,
                                     small_settings(loops=1, lassos=1, refine=False, rectangle_scales=(0.2,)))
    assert span.dim == 0
    tangent = holonomy.holonomy_algebra(g, g.chart.center(), Mode.TANGENT,
                                        small_settings(loops=1, lassos=1, refine=False, rectangle_scales=(0.2,)))
    assert tangent.dim == 3


def test_small_loop_curvature():
    g = round_sphere_2d()
    p = g.chart.point([1.2, 0.5])
    result = holonomy.small_loop_curvature(g, p, 0, 1, scales=(0.2, 0.1, 0.05), mode=Mode.TANGENT)
    assert len(result.errors) == 3
    assert result.errors[-1] < result.errors[0]
    assert result.errors[-1] < 0.25 * np.linalg.norm(result.reference)


def test_loop_inversion():
    g = stereographic_sphere(3)
    curve = CurveSpec.segment(g.chart, [0.0, 0.0, 0.0], [0.3, -0.2, 0.1])
    residual, error = holonomy.loop_inversion_residual(g, curve)
    assert residual < 1e-8


def test_screen_holonomy_needs_recurrent_field():
    g = round_sphere_2d()
    with pytest.raises(NoRecurrentField):
        holonomy.screen_holonomy(g, None, g.chart.center())


def _curves(family, kind):
    return [curve for _, curve, info in family if info["type"] == kind]


def test_loop_family_extension():
    chart = Chart(["x", "y", "z"], domain_box=[(-1, 1), (-1, 1), (-1, 1)])
    base = chart.center()
    settings = HolonomySettings(loops=3, lassos=2)
    refined = settings.refined()
    first = LoopFamily.default(chart, base, settings)
    extra = LoopFamily.default(chart, base, refined, extends=settings)
    full = LoopFamily.default(chart, base, refined)
    inventory = extra.inventory()
    assert "rectangle" not in inventory
    assert inventory["lasso"] == refined.lassos - settings.lassos
    assert inventory.get("smooth", 0) <= refined.loops - settings.loops
    # the larger ensemble starts with the loops of the smaller one
    for kind in ["smooth", "lasso"]:
        expected = _curves(first, kind) + _curves(extra, kind)
        assert len(expected) == len(_curves(full, kind))
        for c1, c2 in zip(expected, _curves(full, kind)):
            np.testing.assert_array_equal(c1.point(0.3), c2.point(0.3))
            np.testing.assert_array_equal(c1.point(0.8), c2.point(0.8))


def test_refinement_only_adds_loops():
    g = round_sphere_2d()
    settings = small_settings()
    span = holonomy.holonomy_algebra(g, g.chart.center(), Mode.TANGENT, settings)
    refinement = span.inventory["refinement"]
    assert "rectangle" not in refinement["types"]
    assert refinement["loops"] <= settings.loops + settings.lassos
    assert refinement["types"]["lasso"] == settings.lassos
    assert span.inventory["loops"] == len(LoopFamily.default(g.chart, g.chart.center(), settings))


def test_plane_wave_tractor_holonomy():
    quick = util.test_quick()
    config = RunConfig.from_dict({
        "spec": {"family": "plane_wave", "a": [["z", 0.5], [0.5, -1]]},
        "analyses": ["tractor_holonomy"],
        "holonomy": {"loops": 6 if quick else 12, "lassos": 1 if quick else 2, "rectangle_scales": [0.3],
                     "nodes_per_loop": 5, "refine": not quick, "parallel": False,
                     "integrator": {"rtol": 1e-8, "atol": 1e-10}}})
    verdicts, details = run_analysis(RunContext(config), "tractor_holonomy")
    assert verdicts["dim"] == 5
    assert details["plane_wave_pattern"]["model_dim"] == 5
    assert verdicts["pattern"]
    assert verdicts["sections_fixed"]
    if not quick:
        assert verdicts["stable"]


def test_ambient_sphere_holonomy():
    st = build({"family": "ambient_ricci_flat",
                "base": {"family": "einstein_model", "kind": "sphere", "dim": 2, "coordinates": "polar"}})
    assert st.dim == 4
    span = holonomy.holonomy_algebra(st.metric, st.base_point, Mode.TANGENT, small_settings(refine=False))
    assert span.dim == 3
    assert not span.is_abelian()
    base = st.metric.metadata["base"]
    base_span = holonomy.holonomy_algebra(base.metric, base.base_point, Mode.TANGENT, small_settings(refine=False))
    assert base_span.dim == 1
    assert len(lie.ambient_model_algebra(base_span.basis)) == span.dim


def test_screen_holonomy_pr_wave():
    st = build({"family": "pr_wave", "n": 2, "f": "x*y1 + y1^2 - y2^2"})
    settings = small_settings(refine=False)
    span = holonomy.screen_holonomy(st.metric, st.recurrent, st.base_point, settings=settings)
    assert span.dim == 0
    assert span.size == 2
    assert span.inventory["x_invariance_residual"] < 1e-6
    # X is only recurrent, so the holonomy has a nonzero R part
    tangent = holonomy.holonomy_algebra(st.metric, st.base_point, Mode.TANGENT, settings)
    assert tangent.dim > 0
    assert not tangent.is_abelian()


def test_screen_holonomy_pp_wave():
    st = build({"family": "pp_wave", "n": 2, "f": "y1^2*y2 + sin(z)*y1"})
    settings = small_settings(refine=False)
    span = holonomy.screen_holonomy(st.metric, st.recurrent, st.base_point, settings=settings)
    assert span.dim == 0
    assert span.is_abelian()
    assert span.inventory["x_invariance_residual"] < 1e-6
    tangent = holonomy.holonomy_algebra(st.metric, st.base_point, Mode.TANGENT, settings)
    assert tangent.dim > 0
    assert tangent.is_abelian()


def test_screen_holonomy_block_product():
    st = build({"family": "riemannian_block_product", "n": 1, "a": [["z"]], "block": "sphere"})
    span = holonomy.screen_holonomy(st.metric, st.recurrent, st.base_point,
                                    settings=small_settings(refine=False, rectangle_scales=(0.2,)))
    # screen (y1, theta, phi): the curved block gives so(2) on its own two directions
    assert span.size == 3
    assert span.dim == 1
    assert span.inventory["x_invariance_residual"] < 1e-6
    rotation = span.basis[0]
    assert max(np.max(np.abs(rotation[0, :])), np.max(np.abs(rotation[:, 0]))) < 1e-6
    assert abs(rotation[1, 2]) == pytest.approx(1 / math.sqrt(2), rel=1e-6)
    np.testing.assert_allclose(rotation[1, 2], -rotation[2, 1], atol=1e-8)


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_sphere_tangent_holonomy()
