import logging

import numpy as np
import pytest

from tractorholonomy.curves import CurveSpec, CurveKind
from tractorholonomy.geometry import Chart
from tractorholonomy.exceptions import DomainError, SpecError


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def test_segment():
    chart = Chart(["x", "y"])
    c = CurveSpec.segment(chart, [0.0, 0.0], [1.0, 2.0])
    np.testing.assert_allclose(c.point(0.5), [0.5, 1.0])
    np.testing.assert_allclose(c.velocity(0.3), [1.0, 2.0])
    assert not c.is_loop
    r = c.reversed()
    np.testing.assert_array_equal(r.start(), c.end())
    np.testing.assert_allclose(r.velocity(0.1), [-1.0, -2.0])
    part = c.restrict(0.5, 1.0)
    np.testing.assert_allclose(part.start(), [0.5, 1.0])
    np.testing.assert_allclose(part.velocity(0.0), [0.5, 1.0])
    with pytest.raises(SpecError):
        c.restrict(0.6, 0.2)


def test_rectangle():
    chart = Chart(["x", "y", "z"])
    c = CurveSpec.rectangle(chart, [0.0, 0.0, 1.0], 0, 2, 0.1)
    assert c.kind == CurveKind.RECTANGLE_LOOP
    assert c.is_composite
    assert c.is_loop
    assert len(c.smooth_pieces()) == 4
    np.testing.assert_allclose(c.velocity(0.1), [0.4, 0.0, 0.0])
    np.testing.assert_allclose(c.point(0.5), [0.1, 0.0, 1.1])
    with pytest.raises(SpecError):
        CurveSpec.rectangle(chart, [0.0, 0.0, 0.0], 1, 1, 0.1)


def test_smooth_loop():
    chart = Chart(["x", "y"])
    coefficients = np.zeros((2, 2, 2))
    coefficients[0, 1] = [0.1, 0.0]
    coefficients[1, 0] = [0.0, 0.05]
    c = CurveSpec.smooth_loop(chart, [0.3, 0.4], coefficients)
    assert c.is_loop
    np.testing.assert_allclose(c.point(0.25), [0.3 + 0.1, 0.4 - 0.1], atol=1e-15)
    h = 1e-6
    fd = (c.point(0.3 + h) - c.point(0.3 - h)) / (2 * h)
    np.testing.assert_allclose(c.velocity(0.3), fd, rtol=1e-6)


def test_lasso_and_reversal():
    chart = Chart(["x", "y"])
    c = CurveSpec.lasso(chart, [0.0, 0.0], [0.5, 0.5], 0, 1, 0.1)
    assert c.is_loop
    pieces = c.smooth_pieces()
    assert len(pieces) == 6
    assert pieces[0][1] == 0.0
    assert pieces[-1][2] == pytest.approx(1.0)
    r = c.reversed()
    assert r.is_loop
    np.testing.assert_allclose(r.point(0.5), c.point(0.5))
    sub = c.restrict(0.0, 0.5)
    np.testing.assert_allclose(sub.start(), [0.0, 0.0])


def test_domain_check():
    chart = Chart(["x", "y"], domain_box=[(0, 1), (0, 1)])
    CurveSpec.segment(chart, [0.2, 0.2], [0.8, 0.8]).check_domain()
    with pytest.raises(DomainError):
        CurveSpec.segment(chart, [0.2, 0.2], [1.5, 0.8]).check_domain()
    with pytest.raises(SpecError):
        CurveSpec.composite(chart, [])
    with pytest.raises(SpecError):
        CurveSpec(chart)


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_lasso_and_reversal()
