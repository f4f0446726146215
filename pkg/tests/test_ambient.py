import logging

import numpy as np
import pytest

from tractorholonomy.spacetimes import (build, ambient_einstein, ambient_ricci_flat, cone, einstein_scalar,
                                        ambient_christoffel_residual, ambient_curvature_residual,
                                        parallel_field_check, ambient_higher_derivative_samples, Family)
from tractorholonomy.holonomy import span_algebra
from tractorholonomy.exceptions import NotEinstein, ZeroScalar, SpecError
from tractorholonomy import util


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


sphere = {"family": "einstein_model", "kind": "sphere", "dim": 2, "coordinates": "polar"}
cylinder = {"family": "generic", "coords": ["th", "ph", "w"],
            "components": {"th,th": "1", "ph,ph": "sin(th)^2", "w,w": "1"},
            "signature": [0, 3], "domain": {"th": [0.5, 2.5]}}


def n_points():
    return 3 if util.test_quick() else 8


def test_einstein_scalar():
    assert einstein_scalar(build(sphere)) == pytest.approx(2.0)
    hyperbolic = build({"family": "einstein_model", "kind": "hyperbolic", "dim": 3, "radius": 0.5})
    assert einstein_scalar(hyperbolic) == pytest.approx(-24.0)
    with pytest.raises(ZeroScalar):
        einstein_scalar(build({"family": "flat", "dim": 3}))
    with pytest.raises(NotEinstein):
        einstein_scalar(build(cylinder))


def test_ambient_specs():
    spec = ambient_einstein(sphere)
    assert spec.family == Family.AMBIENT_EINSTEIN
    assert spec.dim == 4
    assert cone(sphere).dim == 3
    assert ambient_ricci_flat(cylinder).dim == 5
    with pytest.raises(ZeroScalar):
        ambient_einstein({"family": "flat", "dim": 3})
    with pytest.raises(NotEinstein):
        cone(cylinder)


def test_ambient_einstein_metric():
    st = build({"family": "ambient_einstein", "base": sphere})
    assert st.chart.coord_names == ("t", "theta", "phi", "s")
    np.testing.assert_allclose(st.base_point.coords, [1.0] + list(build(sphere).base_point.coords) + [0.0])
    assert st.metric.metadata["c"] == pytest.approx(1.0)
    assert tuple(st.metric.signature_hint) == (1, 3)
    h = st.metric.value([1.5, 1.0, 0.2, 0.3])
    assert h[0, 0] == pytest.approx(1.0)
    assert h[3, 3] == pytest.approx(-1.0)
    assert h[2, 2] == pytest.approx(1.5 ** 2 * np.sin(1.0) ** 2)
    points = st.chart.sample_points(n_points(), seed=0)
    assert ambient_christoffel_residual(st, points=points)["verdict"]
    curvature = ambient_curvature_residual(st, points=points)
    assert curvature["verdict"]
    # The cone over the unit 2-sphere is flat
    assert curvature["max_curvature"] < 1e-10


def test_parallel_field():
    st = build({"family": "ambient_einstein", "base": sphere})
    report = parallel_field_check(st)
    assert report["verdict"]
    assert report["length"] == pytest.approx(-1.0)
    assert report["causal_tag"] == "timelike"
    hyperbolic = build({"family": "ambient_einstein",
                        "base": {"family": "einstein_model", "kind": "hyperbolic", "dim": 2}})
    report = parallel_field_check(hyperbolic)
    assert report["verdict"]
    assert report["length"] == pytest.approx(1.0)
    assert report["causal_tag"] == "spacelike"
    with pytest.raises(SpecError):
        parallel_field_check(build({"family": "cone", "base": sphere}))


def test_cone():
    st = build({"family": "cone", "base": {"family": "einstein_model", "kind": "sphere", "dim": 3}})
    assert st.dim == 4
    assert tuple(st.metric.signature_hint) == (0, 4)
    points = st.chart.sample_points(n_points(), seed=1)
    assert ambient_christoffel_residual(st, points=points)["verdict"]
    assert ambient_curvature_residual(st, points=points)["verdict"]


def test_ambient_ricci_flat():
    st = build({"family": "ambient_ricci_flat", "base": cylinder})
    assert st.chart.coord_names[0] == "xbar"
    assert st.chart.coord_names[-1] == "zbar"
    assert tuple(st.metric.signature_hint) == (1, 4)
    points = st.chart.sample_points(n_points(), seed=2)
    assert ambient_christoffel_residual(st, points=points)["verdict"]
    report = ambient_curvature_residual(st, points=points)
    assert report["verdict"]
    assert report["max_curvature"] > 0.1


def test_higher_derivative_samples():
    st = build({"family": "ambient_ricci_flat", "base": {"family": "plane_wave", "a": [["z", 0], [0, 1]]}})
    report = ambient_higher_derivative_samples(st)
    assert report["verdict"]
    np.testing.assert_allclose(report["first"], report["expected_first"], atol=1e-8)
    np.testing.assert_allclose(report["second"], report["expected_second"], atol=1e-8)
    d = st.dim
    assert len(report["samples"]) == d * (d - 1) // 2 * (d + 1)
    assert span_algebra(report["samples"]).dim > 0
    with pytest.raises(SpecError):
        ambient_higher_derivative_samples(build({"family": "ambient_ricci_flat", "base": sphere}))
    with pytest.raises(SpecError):
        ambient_higher_derivative_samples(build({"family": "ambient_einstein", "base": sphere}))


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_ambient_einstein_metric()
