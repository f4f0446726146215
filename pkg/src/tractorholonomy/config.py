# -*- coding: UTF-8 -*-
"""
tractorholonomy.config
~~~~~~~~~~~~~~~~~~~~~~

Run configuration read from a TOML file.

A configuration names one spacetime, the analyses to run on it and
optionally tolerance overrides, loop ensemble settings, per analysis
options and the verdicts that are expected. See ``docs/usage/config.rst``.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import copy
import logging
from pathlib import Path

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from .exceptions import ConfigError
from .holonomy import HolonomySettings
from .integrate import IntegratorSettings
from .spacetimes.spec import SpacetimeSpec
from .util import DDType, Tolerances


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class Analysis(DDType):
    CURVATURE = "curvature"
    RECOGNIZE = "recognize"
    TRACTOR_HOLONOMY = "tractor_holonomy"
    TANGENT_HOLONOMY = "tangent_holonomy"
    SCREEN_HOLONOMY = "screen_holonomy"
    AMBIENT_COMPARE = "ambient_compare"
    BERGER = "berger"
    PLANE_WAVE_SECTIONS = "plane_wave_sections"
    CLASSIFY_INVARIANTS = "classify_invariants"
    COUNTEREXAMPLE_ISO_L = "counterexample_iso_l"


# Analyses that do not need a spacetime
spacetime_free = (Analysis.COUNTEREXAMPLE_ISO_L, Analysis.BERGER)

# berger algebras that are spanned by holonomy samples of the spacetime
span_algebras = ("tractor_holonomy", "tangent_holonomy")

top_level_keys = ("spec", "analyses", "tolerances", "seed", "sample_points", "output_path", "expect",
                  "holonomy", "options", "name")


def _analysis(name):
    try:
        return Analysis.wrap(name)
    except ValueError as exc:
        raise ConfigError(f"Unknown analysis: {name}") from exc


class RunConfig:
    def __init__(self, spec=None, analyses=None, tolerances=None, seed=0, sample_points=20,
                 output_path="reports", expect=None, holonomy=None, options=None, name=None):
        """Everything one run needs.

        :param spec: SpacetimeSpec or a table that describes one
        :param analyses: Non-empty list of :class:`Analysis` names
        :param tolerances: Dict of tolerance overrides (all positive)
        :param expect: Dict analysis -> {verdict key: expected value}
        :param holonomy: Dict of :class:`~tractorholonomy.holonomy.HolonomySettings` keyword arguments
        :param options: Dict analysis -> keyword options for that analysis
        """
        if not analyses:
            raise ConfigError("A run needs at least one analysis")
        self.analyses = [_analysis(a) for a in analyses]
        self.tolerance_overrides = {} if tolerances is None else dict(tolerances)
        try:
            self.tolerances = Tolerances().override(**self.tolerance_overrides)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError(f"seed should be an integer, got {seed!r}")
        self.seed = seed
        if not isinstance(sample_points, int) or sample_points < 1:
            raise ConfigError(f"sample_points should be a positive integer, got {sample_points!r}")
        self.sample_points = sample_points
        self.output_path = output_path
        self.expect = {} if expect is None else {_analysis(k).value: dict(v) for k, v in expect.items()}
        for key in self.expect:
            if Analysis(key) not in self.analyses:
                raise ConfigError(f"Expectations given for {key}, which is not run")
        self.holonomy = {} if holonomy is None else dict(holonomy)
        known = HolonomySettings().kwargs()
        for key in self.holonomy:
            # the loop seed is the run seed
            if key not in known or key == "seed":
                raise ConfigError(f"Unknown holonomy setting: {key}")
        if "integrator" in self.holonomy:
            integrator_keys = IntegratorSettings().kwargs()
            for key in self.holonomy["integrator"]:
                if key not in integrator_keys:
                    raise ConfigError(f"Unknown integrator setting: {key}")
        self.options = {} if options is None else {_analysis(k).value: dict(v) for k, v in options.items()}
        if spec is None:
            missing = [a.value for a in self.analyses if self._needs_spacetime(a)]
            if missing:
                raise ConfigError("A [spec] table is needed for the analyses " + ", ".join(missing))
            self.spec = None
        else:
            self.spec = SpacetimeSpec.from_dict(spec)
        self.name = name

    def _needs_spacetime(self, analysis):
        if analysis == Analysis.BERGER:
            return self.options.get(analysis.value, {}).get("algebra", "tractor_holonomy") in span_algebras
        return analysis not in spacetime_free

    def holonomy_settings(self):
        """HolonomySettings seeded with the run seed."""
        kwargs = copy.deepcopy(self.holonomy)
        kwargs["seed"] = self.seed
        return HolonomySettings(**kwargs)

    def options_for(self, analysis):
        return dict(self.options.get(Analysis.wrap(analysis).value, {}))

    def with_overrides(self, seed=None, tol_scale=None, output_path=None):
        """Copy with the command line overrides applied."""
        result = copy.deepcopy(self)
        if seed is not None:
            result.seed = int(seed)
        if tol_scale is not None:
            if tol_scale <= 0:
                raise ConfigError(f"--tol-scale should be positive, got {tol_scale}")
            values = result.tolerances.kwargs()
            values["scale"] = float(tol_scale)
            result.tolerances = Tolerances(**values)
        if output_path is not None:
            result.output_path = output_path
        return result

    @staticmethod
    def from_dict(data):
        if not isinstance(data, dict):
            raise ConfigError("A run configuration should be a table")
        unknown = sorted(set(data) - set(top_level_keys))
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        return RunConfig(**{key: data[key] for key in top_level_keys if key in data})

    @staticmethod
    def load(path):
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Configuration file not found: {path}")
        try:
            with path.open("rb") as ifile:
                data = tomllib.load(ifile)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"Cannot parse {path}: {exc}") from exc
        logger.debug(f"Read configuration from {path}")
        return RunConfig.from_dict(data)

    def to_dict(self):
        """Resolved configuration as it is embedded in reports.

        The output path is left out so reports do not depend on where they are written.
        """
        return {"name": self.name,
                "spec": None if self.spec is None else self.spec.to_dict(),
                "analyses": [a.value for a in self.analyses],
                "tolerances": self.tolerances.kwargs(),
                "seed": self.seed,
                "sample_points": self.sample_points,
                "holonomy": self.holonomy_settings().to_json(),
                "options": copy.deepcopy(self.options),
                "expect": copy.deepcopy(self.expect)}

    def __repr__(self):
        return f"RunConfig({[a.value for a in self.analyses]}, spec={self.spec})"
