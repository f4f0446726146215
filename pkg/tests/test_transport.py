import math
import logging

import numpy as np
import pytest

from tractorholonomy import transport
from tractorholonomy.curves import CurveSpec
from tractorholonomy.geometry import Chart, MetricField
from tractorholonomy.exceptions import DimensionError, DomainError, DomainExit
from tractorholonomy.util import max_abs


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def round_sphere_2d():
    chart = Chart(["th", "ph"], domain_box=[(0.1, 3.0), None])
    return MetricField.from_expressions(chart, {(0, 0): "1", (1, 1): "sin(th)^2"}, signature_hint=(0, 2))


def stereographic_sphere(d):
    names = ["x{}".format(i) for i in range(d)]
    chart = Chart(names)
    factor = "4/(1 + {})^2".format(" + ".join(n + "^2" for n in names))
    return MetricField.from_expressions(chart, {(i, i): factor for i in range(d)}, signature_hint=(0, d))


def test_flat_polar_loop():
    chart = Chart(["r", "phi"], domain_box=[(0, None), None])
    g = MetricField.from_expressions(chart, {(0, 0): "1", (1, 1): "r^2"})
    loop = CurveSpec.rectangle(chart, [1.0, 0.0], 0, 1, 0.5)
    result = transport.transport_tangent(g, loop)
    np.testing.assert_allclose(result.matrix, np.eye(2), atol=1e-8)
    segment = CurveSpec.segment(chart, [1.0, 0.0], [1.0, 0.5])
    assert max_abs(transport.transport_tangent(g, segment).matrix - np.eye(2)) > 0.1


def test_sphere_holonomy_angle():
    g = round_sphere_2d()
    loop = CurveSpec.rectangle(g.chart, [1.0, 0.0], 0, 1, 0.3)
    result = transport.transport_tangent(g, loop)
    angle = (math.cos(1.0) - math.cos(1.3)) * 0.3
    assert np.trace(result.matrix) == pytest.approx(2 * math.cos(angle), rel=1e-8)
    assert result.gram_residual(g) < 1e-8
    assert result.to_json()["mode"] == "tangent"


def test_tractor_transport_conformally_flat():
    g = stereographic_sphere(3)
    loop = CurveSpec.rectangle(g.chart, [0.1, 0.2, -0.1], 0, 2, 0.4)
    result = transport.transport_tractor(g, loop)
    assert result.matrix.shape == (5, 5)
    np.testing.assert_allclose(result.matrix, np.eye(5), atol=1e-7)
    segment = CurveSpec.segment(g.chart, [0.0, 0.0, 0.0], [0.3, 0.1, 0.2])
    assert transport.transport_tractor(g, segment).gram_residual(g) < 1e-8


def test_node_matrices():
    g = stereographic_sphere(3)
    loop = CurveSpec.rectangle(g.chart, [0.1, 0.2, -0.1], 0, 1, 0.2)
    result = transport.transport_tractor(g, loop, t_eval=[0.0, 0.25, 0.6, 1.0])
    assert len(result.node_matrices) == 4
    np.testing.assert_allclose(result.node_matrices[0], np.eye(5), atol=1e-14)
    np.testing.assert_allclose(result.node_matrices[-1], result.matrix, atol=1e-12)


def test_errors():
    g = round_sphere_2d()
    loop = CurveSpec.rectangle(g.chart, [1.0, 0.0], 0, 1, 0.3)
    with pytest.raises(DimensionError):
        transport.transport_tractor(g, loop)
    other = CurveSpec.segment(Chart(["a", "b"]), [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        transport.transport_tangent(g, other)
    leaving = CurveSpec.segment(g.chart, [1.0, 0.0], [3.5, 0.0])
    with pytest.raises(DomainExit):
        transport.transport_tangent(g, leaving)


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_sphere_holonomy_angle()
