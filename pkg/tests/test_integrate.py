import math
import logging

import numpy as np
import pytest

from tractorholonomy.integrate import integrate, cash_karp_step, IntegratorSettings, _a, _b4, _b5, _c
from tractorholonomy.exceptions import IntegratorFailure


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def test_exponential_decay():
    result = integrate(lambda t, y: -y, np.array([1.0]))
    assert result.y[0] == pytest.approx(math.exp(-1.0), rel=1e-9)
    assert result.steps > 0


def test_rotation_matrix():
    a = np.array([[0.0, -1.0], [1.0, 0.0]])
    result = integrate(lambda t, m: a @ m, np.eye(2), t_span=(0.0, math.pi / 2), t_eval=[0.0, math.pi / 4])
    np.testing.assert_allclose(result.y, [[0.0, -1.0], [1.0, 0.0]], atol=1e-9)
    assert len(result.y_eval) == 2
    np.testing.assert_array_equal(result.y_eval[0], np.eye(2))
    c = math.cos(math.pi / 4)
    np.testing.assert_allclose(result.y_eval[1], [[c, -c], [c, c]], atol=1e-9)


def test_quartic_exact_in_one_step():
    y5, err = cash_karp_step(lambda t, y: 5 * t ** 4 * np.ones_like(y), 0.0, np.zeros(1), 1.0)
    assert y5[0] == pytest.approx(1.0, abs=1e-14)


def test_tableau_order_conditions():
    for stage in range(1, 6):
        assert sum(_a[stage]) == pytest.approx(_c[stage], abs=1e-15)
    for b, order in [(_b5, 5), (_b4, 4)]:
        for k in range(1, order + 1):
            # quadrature of t^(k-1) on [0, 1]
            assert b @ _c ** (k - 1) == pytest.approx(1 / k, abs=1e-14)


def test_failures():
    with pytest.raises(IntegratorFailure):
        integrate(lambda t, y: y, np.ones(1), t_span=(1.0, 1.0))
    with pytest.raises(IntegratorFailure):
        integrate(lambda t, y: y, np.ones(1), t_eval=[2.0])
    with pytest.raises(IntegratorFailure):
        integrate(lambda t, y: y, np.ones(1), settings={"max_steps": 1})
    with pytest.raises(IntegratorFailure):
        integrate(lambda t, y: np.full_like(y, np.nan), np.ones(1))


def test_settings():
    settings = IntegratorSettings(rtol=1e-8)
    refined = settings.refined()
    assert refined.rtol == pytest.approx(5e-9)
    assert refined.atol == pytest.approx(settings.atol / 2)
    assert IntegratorSettings.wrap(None).rtol == 1e-10
    assert IntegratorSettings.wrap({"atol": 1e-9}).atol == 1e-9
    assert IntegratorSettings.wrap(settings) is settings


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_rotation_matrix()
