import math
import logging

import numpy as np
import pytest

from tractorholonomy.spacetimes import build, plane_wave_parallel_tractors
from tractorholonomy.spacetimes.planewave import closed_form, trace_coefficient
from tractorholonomy.curves import CurveSpec
from tractorholonomy.tractor import tractor_inner, tractor_gram
from tractorholonomy.transport import transport_tractor
from tractorholonomy.exceptions import SpecError, DomainError


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def test_trace_coefficient():
    assert trace_coefficient([[1, 0], [0, 3]]) == pytest.approx(2.0)
    assert trace_coefficient([["2", 0], [0, "4"]]) == pytest.approx(3.0)
    k = trace_coefficient([["z", 0], [0, "z^2"]])
    assert k(2.0) == pytest.approx(3.0)


def test_closed_form():
    for k in [-2.0, 0.0, 1.5]:
        m = closed_form(k, 1.3, 0.5)
        assert np.linalg.det(m) == pytest.approx(1.0)
        np.testing.assert_array_equal(closed_form(k, 0.5, 0.5), np.eye(2))


def test_traceless_sections():
    sections = plane_wave_parallel_tractors([[1, 0], [0, -1]])
    assert sections.coefficient == 0.0
    assert sections.closed_form_error < 1e-10
    assert sections.wronskian_drift < 1e-10
    assert sections.zeros[0] == []
    assert sections.zeros[1] == pytest.approx([0.5])
    sigma, tau = sections.sigma_tau(1, 1.5)
    assert sigma == pytest.approx(1.0)
    assert tau == pytest.approx(1.0)


def test_oscillating_sections():
    sections = plane_wave_parallel_tractors([[-4]], z_interval=(0.0, 2.0), z0=0.0)
    assert sections.closed_form_error < 1e-9
    np.testing.assert_allclose(sections.zeros[0], [math.pi / 4], atol=1e-7)
    np.testing.assert_allclose(sections.zeros[1], [0.0, math.pi / 2], atol=1e-7)
    sigma, tau = sections.sigma_tau(0, 1.0)
    assert sigma == pytest.approx(math.cos(2.0), abs=1e-7)
    assert tau == pytest.approx(-2 * math.sin(2.0), abs=1e-6)


def test_interior_initial_point():
    sections = plane_wave_parallel_tractors([[1, 0], [0, 1]], z_interval=(0.5, 2.0), z0=1.0)
    assert sections.closed_form_error < 1e-9
    sigma, _ = sections.sigma_tau(0, 0.5)
    assert sigma == pytest.approx(math.cosh(0.5), rel=1e-7)
    assert sections.zeros[0] == []
    assert sections.zeros[1] == pytest.approx([1.0])


def test_variable_coefficient():
    sections = plane_wave_parallel_tractors([["z"]])
    assert sections.closed_form_error is None
    assert sections.wronskian_drift < 1e-9
    assert sections.to_json()["constant_coefficient"] is None


def test_errors():
    with pytest.raises(SpecError):
        plane_wave_parallel_tractors([[1, 0]])
    with pytest.raises(SpecError):
        plane_wave_parallel_tractors([[1]], z0=3.0)
    sections = plane_wave_parallel_tractors([[1]])
    with pytest.raises(DomainError):
        sections.sigma_tau(0, 2.5)


def test_sections_are_parallel_and_isotropic():
    st = build({"family": "plane_wave", "a": [["z", 0], [0, 1]]})
    g = st.metric
    sections = plane_wave_parallel_tractors(st.spec.params["a"], z0=0.7)
    start = g.chart.point([0.0, 0.2, -0.1, 0.7])
    end = g.chart.point([0.5, -0.3, 0.4, 1.8])
    for k in range(2):
        t = sections.tractor_at(k, g, start)
        assert tractor_inner(t, t) == pytest.approx(0.0, abs=1e-14)
    columns = sections.tractor_vectors(0.7, g.dim)
    np.testing.assert_allclose(columns.T @ tractor_gram(g, start) @ columns, np.zeros((2, 2)), atol=1e-14)
    np.testing.assert_allclose(columns[:2], np.eye(2), atol=1e-9)
    m = transport_tractor(g, CurveSpec.segment(g.chart, start.coords, end.coords)).matrix
    np.testing.assert_allclose(m @ columns, sections.tractor_vectors(1.8, g.dim), atol=1e-6)


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_sections_are_parallel_and_isotropic()
