import logging

import numpy as np
import pytest

from tractorholonomy import tractor
from tractorholonomy.tractor import Tractor, CausalTag
from tractorholonomy.geometry import Chart, MetricField, ScalarField, conformal_rescale, metric_jet
from tractorholonomy.curvature import curvature_bundle
from tractorholonomy.curves import CurveSpec
from tractorholonomy.exceptions import DimensionError, GaugeMismatch, HypothesisFailed, SigmaVanishes
from tractorholonomy.spacetimes import build
from tractorholonomy.util import max_abs, tensor_scale


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def generic_lorentzian():
    chart = Chart(["t", "x", "y", "z"])
    return MetricField.from_expressions(chart, {
        (0, 0): "-(1 + x^2)",
        (0, 1): "0.05*y",
        (1, 1): "exp(0.2*t*y)",
        (2, 2): "1 + 0.1*z^2",
        (3, 3): "1 + 0.1*x*y",
    })


def stereographic_sphere(d):
    names = ["x{}".format(i) for i in range(d)]
    chart = Chart(names)
    factor = "4/(1 + {})^2".format(" + ".join(n + "^2" for n in names))
    return MetricField.from_expressions(chart, {(i, i): factor for i in range(d)}, signature_hint=(0, d))


def test_gram_matrix():
    G = tractor.gram_matrix(np.diag([-1.0, 1.0, 1.0]))
    assert G.shape == (5, 5)
    assert G[0, 4] == 1.0 and G[4, 0] == 1.0
    assert G[0, 0] == 0.0
    np.testing.assert_array_equal(G[1:4, 1:4], np.diag([-1.0, 1.0, 1.0]))


def test_inner_product_and_gauges():
    g = generic_lorentzian()
    p = g.chart.point([0.1, 0.2, 0.3, 0.4])
    t1 = Tractor(1.0, [0.0, 1.0, 0.0, 0.0], 2.0, g, p)
    t2 = Tractor(3.0, [0.0, 0.0, 1.0, 0.0], -1.0, g, p)
    assert tractor.tractor_inner(t1, t2) == pytest.approx(1.0 * -1.0 + 2.0 * 3.0)
    assert tractor.tractor_inner(t1, t1) == pytest.approx(4.0 + float(g.value(p.coords)[1, 1]))
    other = Tractor(1.0, [0.0] * 4, 0.0, g, g.chart.point([0.0, 0.0, 0.0, 0.0]))
    with pytest.raises(GaugeMismatch):
        tractor.tractor_inner(t1, other)
    h = MetricField.constant(g.chart, np.diag([-1.0, 1, 1, 1]))
    with pytest.raises(GaugeMismatch):
        tractor.tractor_inner(t1, Tractor(1.0, [0.0] * 4, 0.0, h, p))
    with pytest.raises(ValueError):
        Tractor(np.nan, [0.0] * 4, 0.0)
    np.testing.assert_array_equal(Tractor.from_vector(t1.vector()).vector(), t1.vector())


def test_connection_is_metric():
    g = generic_lorentzian()
    p = g.chart.point([0.1, 0.2, 0.3, 0.4])
    v = np.array([0.3, -1.0, 0.5, 2.0])
    om = tractor.connection_matrix(g, p, v)
    G = tractor.tractor_gram(g, p)
    dG = tractor.gram_matrix(np.einsum('ijm,m->ij', metric_jet(g, p, 1).d1, v))
    dG[0, -1] = dG[-1, 0] = 0.0
    np.testing.assert_allclose(om.T @ G + G @ om, dG, atol=1e-12)
    with pytest.raises(DimensionError):
        tractor.connection_matrix(MetricField.constant(Chart(["a", "b"]), np.eye(2)),
                                  Chart(["a", "b"]).center(), [1.0, 0.0])


def test_curvature_from_connection():
    g = generic_lorentzian()
    p = g.chart.point([0.1, 0.2, 0.3, 0.4])
    b = curvature_bundle(g, p)
    scale = tensor_scale(b.weyl4, b.cotton)
    for i, j in [(0, 1), (1, 2), (0, 3), (2, 3)]:
        e_i, e_j = np.eye(4)[i], np.eye(4)[j]
        F = tractor.tractor_curvature(g, p, e_i, e_j)
        assert F.is_form_compatible()
        assert max_abs(F.m[0]) == 0.0
        F_conn = tractor.tractor_curvature_from_connection(g, p, i, j)
        assert max_abs(F.m - F_conn) < 1e-8 * scale


def test_conformally_flat_curvature_vanishes():
    g = stereographic_sphere(4)
    p = g.chart.point([0.1, -0.2, 0.3, 0.0])
    F = tractor.tractor_curvature(g, p, np.eye(4)[0], np.eye(4)[2])
    assert max_abs(F.m) < 1e-9


def test_bianchi_defect():
    g = generic_lorentzian()
    p = g.chart.point([0.1, 0.2, 0.3, 0.4])
    b = curvature_bundle(g, p)
    triples = [(1.0, [1.0, 0.0, 0.5, 0.0], 0.2),
               (-0.5, [0.0, 1.0, 0.0, 0.3], 1.0),
               (2.0, [0.2, 0.0, 1.0, 1.0], -0.7)]
    defect = tractor.tractor_bianchi_defect(g, p, triples)
    assert max_abs(defect.vector()) < 1e-8 * tensor_scale(b.weyl4, b.cotton)
    with pytest.raises(ValueError):
        tractor.tractor_bianchi_defect(g, p, triples[:2])


def test_theta_map_preserves_inner_product():
    g = generic_lorentzian()
    phi = ScalarField.from_expression(g.chart, "0.1*t + 0.05*x^2 - 0.02*y*z")
    gh = conformal_rescale(g, phi)
    p = g.chart.point([0.1, 0.2, 0.3, 0.4])
    t1 = Tractor(1.0, [0.3, 1.0, 0.0, -0.2], 2.0, g, p)
    t2 = Tractor(-0.4, [0.0, 0.5, 1.0, 0.1], 0.7, g, p)
    for weighted in [True, False]:
        target = gh if weighted else g
        s1 = tractor.theta_map(g, phi, p, t1, weighted=weighted, target=target)
        s2 = tractor.theta_map(g, phi, p, t2, weighted=weighted, target=target)
        assert tractor.tractor_inner(s1, s2) == pytest.approx(tractor.tractor_inner(t1, t2), rel=1e-12)


def test_canonical_einstein_section():
    g = stereographic_sphere(4)
    p = g.chart.point([0.2, 0.1, 0.0, -0.3])
    t, length, tag = tractor.canonical_einstein_section(g, p)
    assert t.rho == pytest.approx(-0.5)
    assert length == pytest.approx(-1.0)
    assert tag == CausalTag.TIMELIKE
    assert tractor.causal_tag(0.5) == CausalTag.SPACELIKE
    assert tractor.causal_tag(0.0) == CausalTag.LIGHTLIKE


def test_einstein_scale_section_flat():
    chart = Chart(["t", "x", "y"])
    g = MetricField.constant(chart, np.diag([-1.0, 1.0, 1.0]))
    sigma = ScalarField.constant(chart, 2.0)
    p = chart.point([0.1, 0.2, 0.3])
    t = tractor.einstein_scale_section(g, sigma, p)
    np.testing.assert_allclose(t.vector(), [2.0, 0.0, 0.0, 0.0, 0.0], atol=1e-14)
    value, jacobian = tractor.einstein_scale_field(g, sigma)(p.coords)
    np.testing.assert_allclose(value, t.vector(), atol=1e-14)
    np.testing.assert_allclose(jacobian, np.zeros((5, 3)), atol=1e-14)


@pytest.mark.parametrize("a,z,k", [
    ([[2, 0], [0, 1]], 1.0, 1.5),
    ([["z", 0.5], [0.5, -1]], 1.6, 0.3),
])
def test_plane_wave_section_derivative(a, z, k):
    st = build({"family": "plane_wave", "a": a})
    g = st.metric
    p = g.chart.point([0.1, 0.2, -0.3, z])
    sigma, tau = 1.3, 0.4
    t = Tractor(sigma, [tau, 0, 0, 0], 0, g, p)
    for v in [np.array([0.3, -0.2, 0.5, 0.7]), np.array([0.0, 0.0, 0.0, 1.0])]:
        # sigma' = tau, tau' = k sigma along z
        t_dot = np.array([tau * v[3], k * sigma * v[3], 0, 0, 0, 0])
        dt = tractor.tractor_derivative(g, p, v, t, t_dot)
        assert max_abs(dt.vector()) == pytest.approx(0.0, abs=1e-10)
    wrong = np.array([tau, 0, 0, 0, 0, 0])
    dt = tractor.tractor_derivative(g, p, np.array([0.0, 0.0, 0.0, 1.0]), t, wrong)
    assert abs(dt.y[0]) == pytest.approx(k * sigma)


def test_theta_map_intertwines_connections():
    g = generic_lorentzian()
    phi = ScalarField.from_expression(g.chart, "0.1*t + 0.05*x^2 - 0.02*y*z")
    gh = conformal_rescale(g, phi)
    rng = np.random.default_rng(3)
    for coords in [[0.1, 0.2, 0.3, 0.4], [-0.3, 0.1, 0.0, 0.2], [0.25, -0.4, 0.15, -0.1]]:
        p = g.chart.point(coords)
        value = rng.normal(size=6)
        jacobian = rng.normal(size=(6, 4))
        v = rng.normal(size=4)
        t = Tractor.from_vector(value, g, p)
        expected = tractor.theta_map(g, phi, p, tractor.tractor_derivative(g, p, v, t, jacobian @ v), target=gh)
        mapped, mapped_jacobian = tractor.theta_map_field(g, phi, p.coords, value, jacobian)
        result = tractor.tractor_derivative(gh, p, v, Tractor.from_vector(mapped, gh, p), mapped_jacobian @ v)
        scale = tensor_scale(expected.vector(), result.vector())
        assert max_abs(result.vector() - expected.vector()) < 1e-9 * scale


def recurrent_field(parallel, u):
    """e^u times a parallel tractor field: recurrent with theta = du."""
    def field(coords):
        value, jacobian = parallel(coords)
        ju = u.jet(coords, 1)
        e = np.exp(ju.value)
        return e * value, e * (jacobian + np.outer(value, ju.d1))
    return field


def test_recurrent_rescale():
    chart = Chart(["x", "y", "z"])
    g = MetricField.constant(chart, np.eye(3), signature_hint=(0, 3))
    # sigma^-2 g is a round sphere metric
    sigma = ScalarField.from_expression(chart, "1 + 0.2*x - 0.1*y + 0.3*(x^2 + y^2 + z^2)")
    u = ScalarField.from_expression(chart, "0.4*x - 0.3*y*z")
    field = recurrent_field(tractor.einstein_scale_field(g, sigma), u)
    curve = CurveSpec.segment(chart, [-0.3, 0.2, 0.1], [0.4, -0.2, 0.3])
    result = tractor.recurrent_rescale(g, curve, field, nodes=33)
    assert result.recurrence_residual < 1e-10
    assert result.parallel_defect < 1e-6
    assert result.closedness_residual < 1e-8
    u0 = u.value(curve.point(0.0))
    expected = [np.exp(u0 - u.value(curve.point(t))) for t in result.ts]
    np.testing.assert_allclose(result.factors, expected, rtol=1e-6)
    given = tractor.recurrent_rescale(g, curve, field, theta=lambda c: u.jet(c, 1).d1, nodes=33)
    np.testing.assert_allclose(given.factors, result.factors, rtol=1e-6)
    assert result.to_json()["nodes"] == 33


def test_recurrent_rescale_pr_wave():
    st = build({"family": "pr_wave", "n": 2, "f": "x*y1 + y1^2 - y2^2"})
    g = st.metric
    curve = CurveSpec.segment(g.chart, [-0.5, 0.2, -0.1, 1.0], [0.5, -0.3, 0.2, 1.5])

    def constant(value):
        return lambda coords: (np.array(value, dtype=float), np.zeros((6, 4)))

    with pytest.raises(HypothesisFailed):
        tractor.recurrent_rescale(g, curve, constant([0, 0, 0, 0, 0, 1.0]), nodes=17)

    def vanishing(coords):
        value = np.array([coords[0], 0, 0, 0, 0, 0.0])
        jacobian = np.zeros((6, 4))
        jacobian[0, 0] = 1.0
        return value, jacobian

    with pytest.raises(SigmaVanishes):
        tractor.recurrent_rescale(g, curve, vanishing, nodes=17)
    # (1, 0, 0) is parallel only for Einstein metrics with vanishing scalar curvature
    result = tractor.recurrent_rescale(g, curve, constant([1.0, 0, 0, 0, 0, 0]), nodes=17)
    assert result.recurrence_residual > 1e-3
    assert result.parallel_defect > 1e-3


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_curvature_from_connection()
