import logging
from pathlib import Path

import pytest

from tractorholonomy import cli
from tractorholonomy.config import RunConfig, Analysis
from tractorholonomy.spacetimes import Family
from tractorholonomy.exceptions import ConfigError


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


plane_wave_toml = """
name = "plane wave"
analyses = ["tractor_holonomy", "plane_wave_sections"]
seed = 3
sample_points = 5

[spec]
family = "plane_wave"
n = 2
a = [["z", 0], [0, 1]]

[tolerances]
transport = 1e-5

[holonomy]
loops = 6
refine = false

[holonomy.integrator]
rtol = 1e-9

[options.plane_wave_sections]
nodes = 65

[expect.tractor_holonomy]
dim = 5
"""


def test_load(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(plane_wave_toml)
    config = RunConfig.load(path)
    assert config.name == "plane wave"
    assert config.analyses == [Analysis.TRACTOR_HOLONOMY, Analysis.PLANE_WAVE_SECTIONS]
    assert config.spec.family == Family.PLANE_WAVE
    assert config.spec.params["a"] == [["z", 0], [0, 1]]
    assert config.seed == 3
    assert config.tolerances.transport == pytest.approx(1e-5)
    assert config.expect == {"tractor_holonomy": {"dim": 5}}
    assert config.options_for("plane_wave_sections") == {"nodes": 65}
    assert config.options_for(Analysis.BERGER) == {}
    settings = config.holonomy_settings()
    assert settings.loops == 6
    assert settings.seed == 3
    assert not settings.refine
    assert settings.integrator.rtol == pytest.approx(1e-9)


def test_to_dict_is_stable(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(plane_wave_toml)
    first = RunConfig.load(path).to_dict()
    second = RunConfig.load(path).to_dict()
    assert first == second
    assert "output_path" not in first
    assert first["holonomy"]["seed"] == 3
    assert first["spec"]["family"] == "plane_wave"


def test_with_overrides():
    config = RunConfig(spec={"family": "flat", "dim": 3}, analyses=["curvature"])
    changed = config.with_overrides(seed=7, tol_scale=10.0, output_path="elsewhere")
    assert changed.seed == 7
    assert changed.output_path == "elsewhere"
    assert changed.tolerances.identity == pytest.approx(10 * config.tolerances.identity)
    assert config.seed == 0
    with pytest.raises(ConfigError):
        config.with_overrides(tol_scale=0.0)


def test_spacetime_free():
    config = RunConfig.from_dict({"analyses": ["counterexample_iso_l"], "options": {"counterexample_iso_l": {"n": 3}}})
    assert config.spec is None
    assert config.to_dict()["spec"] is None
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"analyses": ["counterexample_iso_l", "curvature"]})
    berger = RunConfig.from_dict({"analyses": ["berger"], "options": {"berger": {"algebra": "plane_wave_model"}}})
    assert berger.spec is None
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"analyses": ["berger"], "options": {"berger": {"algebra": "tractor_holonomy"}}})


@pytest.mark.parametrize("data", [
    {"spec": {"family": "flat"}, "analyses": []},
    {"spec": {"family": "flat"}, "analyses": ["curvatures"]},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "unknown": 1},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "seed": "zero"},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "seed": True},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "sample_points": 0},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "tolerances": {"identity": -1.0}},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "tolerances": {"nonsense": 1.0}},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "expect": {"berger": {"berger": True}}},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "holonomy": {"seed": 1}},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "holonomy": {"loopz": 1}},
    {"spec": {"family": "flat"}, "analyses": ["curvature"], "holonomy": {"integrator": {"order": 5}}},
    {"spec": {"family": "no_such_family"}, "analyses": ["curvature"]},
    {"spec": {"dim": 4}, "analyses": ["curvature"]},
])
def test_config_errors(data):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(data)


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.load(tmp_path / "missing.toml")
    path = tmp_path / "broken.toml"
    path.write_text("analyses = [\"curvature\"\n[spec")
    with pytest.raises(ConfigError):
        RunConfig.load(path)
    with pytest.raises(ConfigError):
        RunConfig.from_dict([1, 2, 3])


configs_directory = Path(__file__).parent.parent / "configs"


@pytest.mark.parametrize("path", sorted(configs_directory.glob("*.toml")), ids=lambda p: p.stem)
def test_shipped_configs_validate(path):
    config = RunConfig.load(path)
    assert config.expect
    assert cli.validate(config) == []


if __name__ == "__main__":
    import sys
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))
    test_with_overrides()
