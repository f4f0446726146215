import math
import logging

import numpy as np
import pytest

from tractorholonomy import geometry
from tractorholonomy.geometry import Chart, Point, MetricField, ScalarField
from tractorholonomy.exceptions import DomainError, DimensionError, SpecError, DegenerateMetric


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def test_chart():
    chart = Chart(["t", "x", "y"], domain_box=[None, (0, 2), (None, 1)])
    assert chart.dim == 3
    assert chart.index("x") == 1
    assert chart.contains([5.0, 1.0, -3.0])
    assert not chart.contains([0.0, 2.0, 0.0])
    assert not chart.contains([0.0, 1.0])
    lo, hi = chart.sampling_box(margin=0.0)
    np.testing.assert_allclose(lo, [-1.0, 0.0, -1.0])
    np.testing.assert_allclose(hi, [1.0, 2.0, 1.0])
    np.testing.assert_allclose(chart.center().coords, [0.0, 1.0, 0.0])
    with pytest.raises(SpecError):
        chart.index("z")


def test_chart_errors():
    with pytest.raises(DimensionError):
        Chart(["x"])
    with pytest.raises(SpecError):
        Chart(["x", "x"])
    with pytest.raises(SpecError):
        Chart(["x", "y"], domain_box=[(1, 0), None])
    with pytest.raises(DimensionError):
        Chart(["x", "y"], domain_box=[(0, 1)])


def test_points():
    chart = Chart(["x", "y"], domain_box=[(0, 1), (0, 1)])
    with pytest.raises(DomainError):
        Point(chart, [1.5, 0.5])
    with pytest.raises(DimensionError):
        Point(chart, [0.5])
    p = chart.point([0.25, 0.5])
    assert p.to_json() == {"x": 0.25, "y": 0.5}


def test_sample_points():
    chart = Chart(["x", "y"], domain_box=[(0, 1), (-2, 2)])
    points = chart.sample_points(20, seed=3)
    assert len(points) == 20
    for p in points:
        assert 0.1 <= p.coords[0] <= 0.9
        assert -1.6 <= p.coords[1] <= 1.6
    again = chart.sample_points(20, seed=3)
    np.testing.assert_array_equal([p.coords for p in points], [p.coords for p in again])


def test_signature():
    assert geometry.signature(np.diag([-1.0, 1.0, 1.0])) == (1, 2, 0)
    assert geometry.signature(np.diag([1.0, 0.0])) == (0, 1, 1)


def test_check_metric_minkowski():
    chart = Chart(["t", "x", "y", "z"])
    g = MetricField.constant(chart, np.diag([-1.0, 1, 1, 1]), signature_hint=(1, 3))
    report = geometry.check_metric(g, n=10)
    assert report["verdict"]
    assert report["signatures"] == [[1, 3]]
    assert report["min_det_ratio"] == pytest.approx(1.0)


def test_degenerate_metric():
    chart = Chart(["x", "y"])
    g = MetricField.constant(chart, [[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DegenerateMetric):
        geometry.eval_metric(g, chart.center())
    report = geometry.check_metric(g, n=4)
    assert not report["verdict"]
    wrong = MetricField.constant(chart, np.diag([1.0, 1.0]), signature_hint=(1, 1))
    with pytest.raises(DegenerateMetric):
        geometry.eval_metric(wrong, chart.center())
    with pytest.raises(SpecError):
        MetricField.constant(chart, np.eye(2), signature_hint=(1, 2))


def test_from_expressions_and_finite_differences():
    chart = Chart(["u", "v"], domain_box=[(0.5, 2), (-1, 1)])
    g = MetricField.from_expressions(chart, {(0, 0): "u^2", (0, 1): "0.1*sin(v)", (1, 1): "exp(u*v)"})
    p = chart.point([1.2, 0.3])
    jet = geometry.metric_jet(g, p)
    assert jet.value[0, 1] == pytest.approx(0.1 * math.sin(0.3))
    assert jet.value[1, 0] == pytest.approx(0.1 * math.sin(0.3))
    fd = geometry.finite_difference_jet(g, p)
    for exact, approx in zip(jet.derivatives(), fd):
        np.testing.assert_allclose(exact, approx, rtol=1e-6, atol=1e-8)


def test_conformal_rescale():
    chart = Chart(["x", "y"])
    g = MetricField.constant(chart, np.diag([1.0, 2.0]), metadata={"recurrent": "x"})
    phi = ScalarField.from_expression(chart, "0.5*x + y^2")
    h = geometry.conformal_rescale(g, phi)
    p = chart.point([0.2, 0.4])
    factor = math.exp(2 * (0.1 + 0.16))
    np.testing.assert_allclose(h.value(p.coords), np.diag([factor, 2 * factor]))
    assert "recurrent" not in h.metadata
    other = ScalarField.constant(Chart(["a", "b"]), 1.0)
    with pytest.raises(DomainError):
        geometry.conformal_rescale(g, other)


def test_index_gymnastics():
    chart = Chart(["x", "y"])
    g = MetricField.constant(chart, [[2.0, 0.0], [0.0, -1.0]])
    p = chart.center()
    v = np.array([1.0, 3.0])
    np.testing.assert_allclose(geometry.raise_index(g, p, geometry.lower_index(g, p, v)), v)


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_from_expressions_and_finite_differences()
