# -*- coding: UTF-8 -*-
"""
tractorholonomy.spacetimes.spec
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Declarative description of a built-in metric family.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import copy
import logging

import numpy as np
import sympy

from ..expressions import Expression
from ..exceptions import ConfigError, SpecError
from ..util import DDType


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class Family(DDType):
    FLAT = "flat"
    PP_WAVE = "pp_wave"
    PR_WAVE = "pr_wave"
    PLANE_WAVE = "plane_wave"
    CAHEN_WALLACH = "cahen_wallach"
    RECURRENT_GENERAL = "recurrent_general"
    EINSTEIN_MODEL = "einstein_model"
    RIEMANNIAN_BLOCK_PRODUCT = "riemannian_block_product"
    AMBIENT_EINSTEIN = "ambient_einstein"
    AMBIENT_RICCI_FLAT = "ambient_ricci_flat"
    CONE = "cone"
    GENERIC = "generic"


wave_families = (Family.PP_WAVE, Family.PR_WAVE, Family.PLANE_WAVE, Family.CAHEN_WALLACH,
                 Family.RECURRENT_GENERAL, Family.RIEMANNIAN_BLOCK_PRODUCT)
ambient_families = (Family.AMBIENT_EINSTEIN, Family.AMBIENT_RICCI_FLAT, Family.CONE)
einstein_kinds = ("sphere", "hyperbolic", "de_sitter")
block_kinds = ("sphere", "hyperbolic")

_round_sphere = {"family": "einstein_model", "kind": "sphere", "dim": 2, "coordinates": "polar"}

# family -> {parameter: (type, default, description)}
parameter_catalog = {
    Family.FLAT: {
        "dim": ("int", 4, "Dimension"),
        "signature": ("signature", None, "[negative, positive] eigenvalue counts, default [1, dim-1]"),
    },
    Family.PP_WAVE: {
        "n": ("int", 2, "Number of screen coordinates y1..yn"),
        "f": ("expression", "y1^2*y2", "f(y, z) in h = 2 dx dz + f dz^2 + sum dy_i^2, independent of x"),
    },
    Family.PR_WAVE: {
        "n": ("int", 2, "Number of screen coordinates y1..yn"),
        "f": ("expression", "x*y1 + y1^2 - y2^2", "f(x, y, z) in h = 2 dx dz + f dz^2 + sum dy_i^2"),
    },
    Family.PLANE_WAVE: {
        "n": ("int", 2, "Number of screen coordinates y1..yn"),
        "a": ("matrix", [[1, 0], [0, -1]], "Symmetric a_ij(z): numbers or expressions in z, f = sum a_ij y_i y_j"),
    },
    Family.CAHEN_WALLACH: {
        "n": ("int", 2, "Number of screen coordinates y1..yn"),
        "a": ("constant_matrix", [[1, 0], [0, -1]], "Constant symmetric a_ij, f = sum a_ij y_i y_j"),
    },
    Family.RECURRENT_GENERAL: {
        "n": ("int", 2, "Number of screen coordinates y1..yn"),
        "f": ("expression", "x*z + y1^2", "f(x, y, z)"),
        "u": ("vector", None, "u_i(y, z) with h(d_yi, d_z) = u_i / 2, default 0"),
        "g": ("matrix", None, "Screen block g_ij(y, z), default the identity"),
    },
    Family.EINSTEIN_MODEL: {
        "kind": ("choice", "sphere", "One of " + ", ".join(einstein_kinds)),
        "dim": ("int", 2, "Dimension"),
        "coordinates": ("choice", "stereographic",
                        "stereographic or polar (polar only for the 2-sphere)"),
        "radius": ("float", 1.0, "Curvature radius"),
    },
    Family.RIEMANNIAN_BLOCK_PRODUCT: {
        "n": ("int", 1, "Number of plane wave screen coordinates"),
        "a": ("matrix", [[1]], "Plane wave coefficients a_ij(z)"),
        "block": ("choice", "sphere", "Curved 2-dimensional factor: sphere (polar) or hyperbolic (upper half plane)"),
    },
    Family.AMBIENT_EINSTEIN: {
        "base": ("spec", _round_sphere, "Einstein base metric with nonzero scalar curvature"),
    },
    Family.AMBIENT_RICCI_FLAT: {
        "base": ("spec", _round_sphere, "Any base metric"),
    },
    Family.CONE: {
        "base": ("spec", _round_sphere, "Einstein base metric with nonzero scalar curvature"),
    },
    Family.GENERIC: {
        "coords": ("names", None, "Coordinate names"),
        "components": ("components", None, "Table 'a,b' -> expression for the component g_ab (a <= b)"),
        "signature": ("signature", None, "[negative, positive] eigenvalue counts"),
    },
}

common_keys = ("family", "params", "domain", "base_point", "name")


class SpacetimeSpec:
    def __init__(self, family, params=None, domain=None, base_point=None, name=None):
        """Family name plus family specific parameters.

        :param family: Family (or its string value)
        :param params: Parameters, missing ones take the catalog default
        :param domain: Optional dict coordinate name -> [low, high] overriding the default box
        :param base_point: Optional coordinates of the base point for holonomy analyses
        """
        try:
            self.family = Family.wrap(family)
        except ValueError as exc:
            raise ConfigError(f"Unknown family: {family}") from exc
        params = {} if params is None else dict(params)
        catalog = parameter_catalog[self.family]
        unknown = sorted(set(params) - set(catalog))
        if unknown:
            raise ConfigError(f"Unknown parameters for {self.family.value}: {', '.join(unknown)}")
        self.params = {}
        for key, (kind, default, _) in catalog.items():
            value = params.get(key, copy.deepcopy(default))
            if kind == "spec" and value is not None and not isinstance(value, SpacetimeSpec):
                value = SpacetimeSpec.from_dict(value)
            self.params[key] = value
        self.domain = None if domain is None else {str(k): list(v) for k, v in dict(domain).items()}
        self.base_point = None if base_point is None else [float(c) for c in base_point]
        self.name = name

    @property
    def base(self):
        return self.params.get("base")

    @property
    def dim(self):
        p = self.params
        if self.family == Family.FLAT:
            return int(p["dim"])
        if self.family == Family.RIEMANNIAN_BLOCK_PRODUCT:
            return int(p["n"]) + 4
        if self.family in wave_families:
            return int(p["n"]) + 2
        if self.family == Family.EINSTEIN_MODEL:
            return int(p["dim"])
        if self.family in (Family.AMBIENT_EINSTEIN, Family.AMBIENT_RICCI_FLAT):
            return self.base.dim + 2
        if self.family == Family.CONE:
            return self.base.dim + 1
        return len(p["coords"] or [])

    @staticmethod
    def from_dict(data):
        """Read a spec from a (TOML) table.

        Family parameters can be given flat next to ``family`` or in a
        ``params`` sub-table.
        """
        if isinstance(data, SpacetimeSpec):
            return data
        if not isinstance(data, dict):
            raise ConfigError(f"A spacetime spec should be a table, got {type(data).__name__}")
        if "family" not in data:
            raise ConfigError("A spacetime spec needs a 'family' entry")
        params = dict(data.get("params", {}))
        for key, value in data.items():
            if key not in common_keys:
                params[key] = value
        return SpacetimeSpec(data["family"], params, domain=data.get("domain"),
                             base_point=data.get("base_point"), name=data.get("name"))

    def to_dict(self):
        result = {"family": self.family.value}
        for key, value in self.params.items():
            if value is None:
                continue
            result[key] = value.to_dict() if isinstance(value, SpacetimeSpec) else copy.deepcopy(value)
        if self.domain is not None:
            result["domain"] = copy.deepcopy(self.domain)
        if self.base_point is not None:
            result["base_point"] = list(self.base_point)
        if self.name is not None:
            result["name"] = self.name
        return result

    def validate(self):
        """Check every parameter and build the metric once.

        Raises SpecError (or a subclass such as ZeroScalar) on the first problem.

        :return: The built :class:`~tractorholonomy.spacetimes.families.Spacetime`
        """
        for key, (kind, _, _) in parameter_catalog[self.family].items():
            _check_type(self.family, key, kind, self.params[key])
        base = self.base
        if base is not None:
            base.validate()
        _check_family(self)
        from .families import build
        return build(self)

    def __eq__(self, other):
        return isinstance(other, SpacetimeSpec) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"SpacetimeSpec({self.family.value}, {self.params})"


def _check_type(family, key, kind, value):
    where = f"{family.value}.{key}"
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ConfigError(f"{where} should be an integer, got {value!r}")
        if value < 1:
            raise ConfigError(f"{where} should be positive, got {value}")
    elif kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
            raise ConfigError(f"{where} should be a positive number, got {value!r}")
    elif kind == "expression":
        if not isinstance(value, (str, int, float)) or isinstance(value, bool):
            raise ConfigError(f"{where} should be an expression, got {value!r}")
    elif kind in ("matrix", "constant_matrix"):
        if value is None:
            return
        if not isinstance(value, (list, tuple)) or not all(isinstance(row, (list, tuple)) for row in value):
            raise ConfigError(f"{where} should be a list of rows, got {value!r}")
        for row in value:
            for entry in row:
                if isinstance(entry, bool) or not isinstance(entry, (str, int, float)):
                    raise ConfigError(f"{where} has an invalid entry {entry!r}")
                if kind == "constant_matrix" and isinstance(entry, str):
                    raise ConfigError(f"{where} needs constant entries, got {entry!r}")
    elif kind == "vector":
        if value is not None and not isinstance(value, (list, tuple)):
            raise ConfigError(f"{where} should be a list, got {value!r}")
    elif kind == "choice":
        if not isinstance(value, str):
            raise ConfigError(f"{where} should be a string, got {value!r}")
    elif kind == "signature":
        if value is not None and (not isinstance(value, (list, tuple)) or len(value) != 2):
            raise ConfigError(f"{where} should be [negative, positive], got {value!r}")
    elif kind == "names":
        if value is None or not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{where} should be a list of coordinate names, got {value!r}")
    elif kind == "components":
        if value is None or not isinstance(value, dict):
            raise ConfigError(f"{where} should be a table of component expressions, got {value!r}")
    elif kind == "spec":
        if not isinstance(value, SpacetimeSpec):
            raise ConfigError(f"{where} should be a spacetime spec")


def _square(family, key, value, n):
    if len(value) != n or any(len(row) != n for row in value):
        raise SpecError(f"{family.value}.{key} should be a {n}x{n} matrix, got {value!r}")


def _symmetric(family, key, value, variables):
    n = len(value)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = sympy.sympify(Expression(value[i][j], variables).expr)
            rhs = sympy.sympify(Expression(value[j][i], variables).expr)
            if sympy.simplify(lhs - rhs) != 0:
                raise SpecError(f"{family.value}.{key} is not symmetric: [{i}][{j}] = {value[i][j]!r}, "
                                f"[{j}][{i}] = {value[j][i]!r}")


def wave_coords(n):
    return ["x"] + [f"y{i + 1}" for i in range(n)] + ["z"]


def depends_on_x(text, variables):
    expr = Expression(text, variables)
    if not expr.depends_on("x"):
        return False
    return sympy.simplify(sympy.diff(sympy.sympify(expr.expr), sympy.Symbol("x"))) != 0


def _check_family(spec):
    family, p = spec.family, spec.params
    if family in wave_families:
        n = int(p["n"])
        coords = wave_coords(n)
        if family == Family.PP_WAVE:
            if depends_on_x(p["f"], coords):
                raise SpecError(f"pp_wave needs f independent of x, got f = {p['f']}")
        elif family == Family.PR_WAVE:
            Expression(p["f"], coords)
        elif family in (Family.PLANE_WAVE, Family.CAHEN_WALLACH, Family.RIEMANNIAN_BLOCK_PRODUCT):
            _square(family, "a", p["a"], n)
            _symmetric(family, "a", p["a"], ["z"])
        elif family == Family.RECURRENT_GENERAL:
            Expression(p["f"], coords)
            if p["u"] is not None:
                if len(p["u"]) != n:
                    raise SpecError(f"recurrent_general.u should have {n} entries, got {len(p['u'])}")
                for entry in p["u"]:
                    if depends_on_x(entry, coords):
                        raise SpecError(f"recurrent_general.u should not depend on x, got {entry}")
            if p["g"] is not None:
                _square(family, "g", p["g"], n)
                _symmetric(family, "g", p["g"], coords)
                for row in p["g"]:
                    for entry in row:
                        if depends_on_x(entry, coords):
                            raise SpecError(f"recurrent_general.g should not depend on x, got {entry}")
        if family == Family.RIEMANNIAN_BLOCK_PRODUCT and p["block"] not in block_kinds:
            raise SpecError(f"Unknown block {p['block']}, expected one of {', '.join(block_kinds)}")
    elif family == Family.FLAT:
        sig = p["signature"]
        if sig is not None and (int(sig[0]) < 0 or int(sig[1]) < 0 or int(sig[0]) + int(sig[1]) != int(p["dim"])):
            raise SpecError(f"flat.signature {sig} does not match dim {p['dim']}")
        if int(p["dim"]) < 2:
            raise SpecError("flat needs dim >= 2")
    elif family == Family.EINSTEIN_MODEL:
        if p["kind"] not in einstein_kinds:
            raise SpecError(f"Unknown einstein_model kind {p['kind']}, expected one of {', '.join(einstein_kinds)}")
        if int(p["dim"]) < 2:
            raise SpecError("einstein_model needs dim >= 2")
        if p["coordinates"] not in ("stereographic", "polar"):
            raise SpecError(f"Unknown coordinates {p['coordinates']}")
        if p["coordinates"] == "polar" and (p["kind"] != "sphere" or int(p["dim"]) != 2):
            raise SpecError("Polar coordinates are only available for the 2-sphere")
    elif family == Family.GENERIC:
        coords = list(p["coords"])
        if p["signature"] is None:
            raise SpecError("generic needs a signature")
        for key, text in p["components"].items():
            names = [s.strip() for s in str(key).split(",")]
            if len(names) != 2 or any(name not in coords for name in names):
                raise SpecError(f"generic.components key '{key}' should be 'a,b' with a, b in {coords}")
            Expression(text, coords)
    if spec.domain is not None:
        for key, bounds in spec.domain.items():
            if len(bounds) != 2 or not float(bounds[0]) < float(bounds[1]):
                raise SpecError(f"Invalid domain interval for {key}: {bounds}")
    if spec.base_point is not None and len(spec.base_point) != spec.dim:
        raise SpecError(f"base_point has {len(spec.base_point)} coordinates, expected {spec.dim}")


def catalog():
    """Self-describing list of the families and their parameters."""
    result = {}
    for family, params in parameter_catalog.items():
        entries = {}
        for key, (kind, default, description) in params.items():
            entries[key] = {"type": kind, "default": default, "description": description}
        result[family.value] = entries
    return result
