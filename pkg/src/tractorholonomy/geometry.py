# -*- coding: UTF-8 -*-
"""
tractorholonomy.geometry
~~~~~~~~~~~~~~~~~~~~~~~~

Charts, points, metric fields and scalar fields.

A :class:`MetricField` is a callback ``(coords, order) -> Jet`` that returns
all metric components at once as a (d,d) tensor jet. Built-in families ship
closed-form callbacks; generic metrics are compiled from expressions and
differentiated with jet arithmetic. Finite differences are only used by
:func:`finite_difference_jet`, an oracle for the tests.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np
from scipy.stats import qmc

from . import jets
from .jets import Jet
from .expressions import Expression
from .exceptions import DomainError, DimensionError, DegenerateMetric, SpecError
from .util import Tolerances, max_abs


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class Chart:
    def __init__(self, coord_names, domain_box=None, name=None):
        """Single coordinate chart.

        :param coord_names: Names of the coordinates, pairwise distinct
        :param domain_box: Optional list of (low, high) open bounds per coordinate.
            A bound can be None for an unbounded side.
        """
        self.coord_names = tuple(str(c) for c in coord_names)
        if len(self.coord_names) < 2:
            raise DimensionError(f"A chart needs at least 2 coordinates, got {len(self.coord_names)}")
        if len(set(self.coord_names)) != len(self.coord_names):
            raise SpecError(f"Coordinate names are not distinct: {self.coord_names}")
        self.name = name
        self.lower = np.full(self.dim, -np.inf)
        self.upper = np.full(self.dim, np.inf)
        if domain_box is not None:
            if len(domain_box) != self.dim:
                raise DimensionError(f"Domain box has {len(domain_box)} intervals for {self.dim} coordinates")
            for i, bounds in enumerate(domain_box):
                if bounds is None:
                    continue
                lo, hi = bounds
                self.lower[i] = -np.inf if lo is None else float(lo)
                self.upper[i] = np.inf if hi is None else float(hi)
                if self.lower[i] >= self.upper[i]:
                    raise SpecError(f"Empty interval for coordinate {self.coord_names[i]}: {bounds}")

    @property
    def dim(self):
        return len(self.coord_names)

    def index(self, name):
        try:
            return self.coord_names.index(name)
        except ValueError:
            raise SpecError(f"Unknown coordinate {name}, chart has {self.coord_names}")

    def contains(self, coords):
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            return False
        return bool(np.all(np.isfinite(coords)) and np.all(coords > self.lower) and np.all(coords < self.upper))

    def sampling_box(self, margin=0.1):
        """Closed box used for sampling: the domain box shrunk by a relative margin.
        Unbounded sides are replaced by +-1 around the finite bound (or around 0)."""
        lo = self.lower.copy()
        hi = self.upper.copy()
        for i in range(self.dim):
            if np.isinf(lo[i]) and np.isinf(hi[i]):
                lo[i], hi[i] = -1.0, 1.0
            elif np.isinf(lo[i]):
                lo[i] = hi[i] - 2.0
            elif np.isinf(hi[i]):
                hi[i] = lo[i] + 2.0
        width = hi - lo
        return lo + margin * width, hi - margin * width

    def center(self):
        lo, hi = self.sampling_box(margin=0.0)
        return Point(self, (lo + hi) / 2)

    def sample_points(self, n, seed=0, margin=0.1):
        """Quasi-random points (scrambled Halton sequence) inside the chart."""
        lo, hi = self.sampling_box(margin)
        sampler = qmc.Halton(d=self.dim, scramble=True, seed=seed)
        unit = sampler.random(n)
        coords = qmc.scale(unit, lo, hi)
        return [Point(self, c) for c in coords]

    def point(self, coords):
        return Point(self, coords)

    def to_json(self):
        box = [[None if np.isinf(lo) else float(lo), None if np.isinf(hi) else float(hi)]
               for lo, hi in zip(self.lower, self.upper)]
        return {"coords": list(self.coord_names), "domain_box": box}

    def __eq__(self, other):
        if not isinstance(other, Chart):
            return False
        return (self.coord_names == other.coord_names and np.array_equal(self.lower, other.lower)
                and np.array_equal(self.upper, other.upper))

    def __hash__(self):
        return hash(self.coord_names)

    def __repr__(self):
        return f"Chart({self.coord_names})"


class Point:
    __slots__ = ("chart", "coords")

    def __init__(self, chart, coords):
        coords = np.array(coords, dtype=float)
        if coords.shape != (chart.dim,):
            raise DimensionError(f"Point has {coords.size} coordinates, chart has dimension {chart.dim}")
        if not chart.contains(coords):
            raise DomainError(f"Point {coords.tolist()} lies outside the chart domain")
        coords.setflags(write=False)
        self.chart = chart
        self.coords = coords

    def to_json(self):
        return {name: float(c) for name, c in zip(self.chart.coord_names, self.coords)}

    def __repr__(self):
        return f"Point({self.coords.tolist()})"


def _check_chart(field, p):
    if p.chart != field.chart:
        raise DomainError(f"Point on chart {p.chart} but field lives on chart {field.chart}")


class ScalarField:
    def __init__(self, chart, jet_fn, name=None):
        """Scalar field given by a callback ``(coords, order) -> scalar Jet``."""
        self.chart = chart
        self._jet_fn = jet_fn
        self.name = name

    def jet(self, coords, order=3):
        return self._jet_fn(np.asarray(coords, dtype=float), order)

    def jet_at(self, p, order=3):
        _check_chart(self, p)
        return self.jet(p.coords, order)

    def value(self, coords):
        return float(self.jet(coords, 0).value)

    @staticmethod
    def from_expression(chart, text, name=None):
        expr = Expression(text, chart.coord_names)
        return ScalarField(chart, expr.jet, name=name or expr.text)

    @staticmethod
    def constant(chart, c, name=None):
        c = float(c)
        return ScalarField(chart, lambda coords, order: Jet.constant(c, len(coords), order),
                           name=name or str(c))

    def __neg__(self):
        return ScalarField(self.chart, lambda coords, order: -self._jet_fn(coords, order),
                           name=None if self.name is None else f"-({self.name})")

    def __add__(self, other):
        if isinstance(other, ScalarField):
            return ScalarField(self.chart, lambda coords, order: self._jet_fn(coords, order) +
                               other._jet_fn(coords, order))
        return ScalarField(self.chart, lambda coords, order: self._jet_fn(coords, order) + float(other))

    def apply(self, fn):
        """New field fn(self) with fn one of the jet functions (jets.exp, jets.log, ...)."""
        return ScalarField(self.chart, lambda coords, order: fn(self._jet_fn(coords, order)))


class MetricField:
    def __init__(self, chart, jet_fn, signature_hint=None, name=None, metadata=None):
        """Coordinate metric.

        :param chart: Chart on which the metric is defined
        :param jet_fn: Callback ``(coords, order) -> Jet`` with a (d,d) value
        :param signature_hint: (r, s) = (number of negative, number of positive eigenvalues)
        :param metadata: Free-form structural information (e.g. the recurrent field of a family)
        """
        self.chart = chart
        self._jet_fn = jet_fn
        if signature_hint is not None:
            r, s = (int(v) for v in signature_hint)
            if r < 0 or s < 0 or r + s != chart.dim:
                raise SpecError(f"Signature {signature_hint} incompatible with dimension {chart.dim}")
            signature_hint = (r, s)
        self.signature_hint = signature_hint
        self.name = name
        self.metadata = {} if metadata is None else dict(metadata)

    @property
    def dim(self):
        return self.chart.dim

    def jet(self, coords, order=3):
        return self._jet_fn(np.asarray(coords, dtype=float), order)

    def value(self, coords):
        return self.jet(coords, 0).value

    @staticmethod
    def from_components(chart, components, signature_hint=None, name=None, metadata=None):
        """Build from per-component scalar jet callbacks.

        :param components: Dict (i, j) -> callback ``(coords, order) -> scalar Jet``, i <= j.
            Missing components are zero.
        """
        d = chart.dim
        items = []
        for (i, j), fn in components.items():
            if not (0 <= i < d and 0 <= j < d):
                raise DimensionError(f"Component ({i},{j}) outside dimension {d}")
            if i > j:
                i, j = j, i
            items.append((i, j, fn))

        def jet_fn(coords, order):
            result = Jet.zeros((d, d), d, order)
            for i, j, fn in items:
                value = fn(coords, order)
                result[i, j] = value
                if i != j:
                    result[j, i] = value
            return result

        return MetricField(chart, jet_fn, signature_hint, name, metadata)

    @staticmethod
    def from_expressions(chart, expressions, signature_hint=None, name=None, metadata=None):
        """Build from component expressions, ``{(i, j): "text"}`` with i <= j."""
        components = {}
        for (i, j), text in expressions.items():
            expr = text if isinstance(text, Expression) else Expression(text, chart.coord_names)
            components[(i, j)] = expr.jet
        return MetricField.from_components(chart, components, signature_hint, name, metadata)

    @staticmethod
    def constant(chart, matrix, signature_hint=None, name=None, metadata=None):
        matrix = np.array(matrix, dtype=float)
        if matrix.shape != (chart.dim, chart.dim):
            raise DimensionError(f"Constant metric has shape {matrix.shape}, expected {(chart.dim, chart.dim)}")
        return MetricField(chart, lambda coords, order: Jet.constant(matrix, chart.dim, order),
                           signature_hint, name, metadata)

    def __repr__(self):
        return f"MetricField({self.name or 'unnamed'}, dim={self.dim})"


def signature(matrix, tol=1e-10):
    """Sign count (negative, positive, zero) of a symmetric matrix."""
    eig = np.linalg.eigvalsh(np.asarray(matrix, dtype=float))
    scale = max(max_abs(eig), 1e-300)
    neg = int(np.sum(eig < -tol * scale))
    pos = int(np.sum(eig > tol * scale))
    return neg, pos, len(eig) - neg - pos


def check_value(g, value, coords, tolerances=None):
    """Check symmetry, nondegeneracy and signature of a metric value."""
    tolerances = Tolerances.wrap(tolerances)
    d = g.dim
    if not np.all(np.isfinite(value)):
        raise DegenerateMetric(f"Metric {g.name} is not finite at {np.asarray(coords).tolist()}")
    scale = max_abs(value)
    if max_abs(value - value.T) > tolerances.symmetry * (scale + 1e-30):
        raise DegenerateMetric(f"Metric {g.name} is not symmetric at {np.asarray(coords).tolist()}")
    det = np.linalg.det(value)
    if abs(det) <= tolerances.degeneracy * scale ** d:
        raise DegenerateMetric(f"Metric {g.name} is degenerate at {np.asarray(coords).tolist()} (det={det:.3e})")
    if g.signature_hint is not None:
        neg, pos, _ = signature(value)
        if (neg, pos) != g.signature_hint:
            raise DegenerateMetric(f"Metric {g.name} has signature {(neg, pos)} at {np.asarray(coords).tolist()}, "
                                   f"expected {g.signature_hint}")


def eval_metric(g, p, tolerances=None):
    """Metric components at a point, validated."""
    _check_chart(g, p)
    value = np.array(g.value(p.coords), dtype=float)
    check_value(g, value, p.coords, tolerances)
    return value


def metric_jet(g, p, order=3):
    """Exact jet of the metric components at a point."""
    _check_chart(g, p)
    return g.jet(p.coords, order)


def conformal_rescale(g, phi, name=None):
    """Metric e^{2 phi} g with jets composed through the product and chain rule."""
    if phi.chart != g.chart:
        raise DomainError("Conformal factor and metric live on different charts")

    def jet_fn(coords, order):
        return g.jet(coords, order) * jets.exp(2 * phi.jet(coords, order))

    metadata = dict(g.metadata)
    metadata.pop("recurrent", None)
    return MetricField(g.chart, jet_fn, g.signature_hint,
                       name=name or f"exp(2*{phi.name})*{g.name}", metadata=metadata)


def lower_index(g, p, vector):
    return eval_metric(g, p) @ np.asarray(vector, dtype=float)


def raise_index(g, p, covector):
    return np.linalg.solve(eval_metric(g, p), np.asarray(covector, dtype=float))


def check_metric(g, points=None, n=100, seed=0, tolerances=None):
    """Symmetry, nondegeneracy and signature constancy at sampled points.

    :return: Report dictionary with the verdict and the worst values found
    """
    if points is None:
        points = g.chart.sample_points(n, seed=seed)
    signatures = set()
    min_det_ratio = np.inf
    failures = []
    for p in points:
        try:
            value = eval_metric(g, p, tolerances)
        except DegenerateMetric as exc:
            failures.append(str(exc))
            continue
        neg, pos, _ = signature(value)
        signatures.add((neg, pos))
        min_det_ratio = min(min_det_ratio, abs(np.linalg.det(value)) / max_abs(value) ** g.dim)
    verdict = len(failures) == 0 and len(signatures) == 1
    return {
        "verdict": verdict,
        "points": len(points),
        "signatures": sorted(list(s) for s in signatures),
        "min_det_ratio": None if np.isinf(min_det_ratio) else float(min_det_ratio),
        "failures": failures[:5],
    }


def finite_difference_jet(g, p, step=1e-4):
    """Richardson-extrapolated central differences of the lower-order jets.

    The first derivatives are differences of the metric values, the second
    derivatives differences of the exact first derivatives, and so on. Used as
    an oracle for the closed-form and jet-arithmetic derivatives.

    :return: List [d1, d2, d3] with the same layout as :class:`Jet`
    """
    d = g.dim
    x0 = np.asarray(p.coords, dtype=float)
    results = []
    for order in range(3):
        def f(x):
            jet = g.jet(x, order)
            return jet.value if order == 0 else jet.derivatives()[order - 1]

        base = f(x0)
        out = np.zeros(base.shape + (d,))
        for m in range(d):
            e = np.zeros(d)
            e[m] = 1.0

            def central(h):
                return (f(x0 + h * e) - f(x0 - h * e)) / (2 * h)

            out[..., m] = (4 * central(step / 2) - central(step)) / 3
        results.append(out)
    return results
