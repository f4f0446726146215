import logging

import numpy as np
import pytest

from tractorholonomy.spacetimes import build, recognizers
from tractorholonomy.spacetimes.recognizers import RecurrentStructure, frame_gram
from tractorholonomy.geometry import Chart, MetricField
from tractorholonomy.exceptions import NoRecurrentField, HypothesisFailed
from tractorholonomy import util


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def n_points():
    return 3 if util.test_quick() else 6


def test_frame_gram():
    gram = frame_gram(2)
    assert gram.shape == (4, 4)
    assert gram[0, 3] == gram[3, 0] == 1.0
    np.testing.assert_array_equal(gram[1:3, 1:3], np.eye(2))
    assert gram[0, 0] == gram[3, 3] == 0.0


def test_adapted_frame():
    st = build({"family": "recurrent_general", "u": ["y1", "0"], "g": [[1, 0], [0, "1 + 0.1*y1^2"]]})
    rec = st.recurrent
    assert rec.n == 2
    assert rec.screen == [1, 2]
    for p in st.chart.sample_points(4, seed=2):
        frame = rec.adapted_frame(p.coords)
        np.testing.assert_array_equal(frame[:, 0], rec.vector())
        assert rec.frame_residual(p.coords) < 1e-12


def test_adapted_frame_needs_positive_screen():
    chart = Chart(["x", "y", "z"])
    g = MetricField.constant(chart, [[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])
    rec = RecurrentStructure(g)
    with pytest.raises(HypothesisFailed):
        rec.adapted_frame(chart.center().coords)


def test_pp_wave_conditions():
    st = build({"family": "pp_wave"})
    for p in st.chart.sample_points(n_points(), seed=0):
        trace = recognizers.pp_trace_condition(st.metric, p)
        assert trace["verdict"]
        pr = recognizers.pr_condition(st.metric, p)
        assert pr["verdict"]
        assert pr["consistent"]
        iso = recognizers.ricci_isotropy(st.metric, p)
        assert iso["verdict"]
        assert iso["consistent"]
        assert iso["scalar_zero"]


def test_requires_recurrent_field():
    sphere = build({"family": "einstein_model", "kind": "sphere", "dim": 3})
    with pytest.raises(NoRecurrentField):
        recognizers.pp_trace_condition(sphere.metric, sphere.base_point)
    with pytest.raises(HypothesisFailed):
        recognizers.invariant_tractor_subbundle_check(sphere.metric, n=2)


def test_theta_of_pr_wave():
    st = build({"family": "pr_wave"})
    p = st.chart.point([0.3, 0.2, -0.1, 1.0])
    theta = st.recurrent.theta(p.coords)
    # f = x*y1 + y1^2 - y2^2, theta = f_x / 2 dz
    np.testing.assert_allclose(theta, [0.0, 0.0, 0.0, 0.1], atol=1e-14)
    dtheta = st.recurrent.dtheta(p.coords)
    np.testing.assert_allclose(dtheta, -dtheta.T)
    assert abs(dtheta[1, 3]) == pytest.approx(0.5)


def test_pr_is_pp_for_pp_wave():
    st = build({"family": "pp_wave"})
    points = st.chart.sample_points(n_points(), seed=0)
    report = recognizers.pr_is_pp_when_isotropic(st.metric, points=points, nodes=9)
    assert report["verdict"] is True
    assert report["factor_min"] == pytest.approx(1.0)
    assert report["factor_max"] == pytest.approx(1.0)
    assert report["parallel_defect"] <= report["transport_threshold"]


def test_invariant_subbundle_pp_wave():
    st = build({"family": "pp_wave"})
    report = recognizers.invariant_tractor_subbundle_check(st.metric, n=n_points())
    assert report["verdict"]
    assert report["classification"] == "totally_isotropic"
    assert report["points"] == n_points()


def test_battery_plane_wave():
    st = build({"family": "plane_wave"})
    report = recognizers.pp_equivalence_battery(st.metric, n=n_points())
    assert report["parallel"]
    assert report["consistent"]
    assert report["verdict"]
    assert len(report["points"]) == n_points()
    for row in report["points"]:
        assert row["rho"] >= 0.0


def test_battery_block_product_fails_consistently():
    st = build({"family": "riemannian_block_product"})
    report = recognizers.pp_equivalence_battery(st.metric, n=n_points())
    assert not report["verdict"]
    for row in report["points"]:
        assert not row["verdicts"]["simple"]
        assert row["verdicts"]["simple"] == row["verdicts"]["skew"]


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_battery_plane_wave()
