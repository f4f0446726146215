# -*- coding: UTF-8 -*-
"""
tractorholonomy.curves
~~~~~~~~~~~~~~~~~~~~~~

Curves in a chart, parametrised over [0, 1].

Composite curves are made of smooth pieces on consecutive parameter
sub-intervals; transport integrates them piece by piece so that the
integrator never steps over a corner.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from .exceptions import DomainError, SpecError
from .util import DDType


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class CurveKind(DDType):
    SEGMENT = "segment"
    RECTANGLE_LOOP = "rectangle_loop"
    SMOOTH_LOOP = "smooth_loop"
    COMPOSITE = "composite"


class CurveSpec:
    def __init__(self, chart, map_fn=None, velocity_fn=None, kind=CurveKind.SEGMENT, pieces=None,
                 breaks=None, name=None):
        """Curve t in [0, 1] -> coordinates.

        Either give ``map_fn`` and ``velocity_fn`` for a smooth curve, or a
        list of smooth ``pieces`` (with optional parameter ``breaks``) for a
        composite curve.
        """
        self.chart = chart
        self.kind = CurveKind.wrap(kind)
        self.name = name
        if pieces is not None:
            self.pieces = list(pieces)
            if len(self.pieces) == 0:
                raise SpecError("A composite curve needs at least one piece")
            if breaks is None:
                breaks = np.linspace(0, 1, len(self.pieces) + 1)
            self.breaks = np.asarray(breaks, dtype=float)
            if len(self.breaks) != len(self.pieces) + 1:
                raise SpecError("Number of breaks does not match the number of pieces")
            self._map = None
            self._velocity = None
        else:
            if map_fn is None or velocity_fn is None:
                raise SpecError("A smooth curve needs a map and a velocity")
            self.pieces = None
            self.breaks = np.array([0.0, 1.0])
            self._map = map_fn
            self._velocity = velocity_fn

    @property
    def is_composite(self):
        return self.pieces is not None

    def _locate(self, t):
        k = int(np.searchsorted(self.breaks, t, side="right")) - 1
        k = min(max(k, 0), len(self.pieces) - 1)
        t0, t1 = self.breaks[k], self.breaks[k + 1]
        return k, (t - t0) / (t1 - t0), t1 - t0

    def point(self, t):
        if not self.is_composite:
            return np.asarray(self._map(t), dtype=float)
        k, s, _ = self._locate(t)
        return self.pieces[k].point(s)

    def velocity(self, t):
        if not self.is_composite:
            return np.asarray(self._velocity(t), dtype=float)
        k, s, width = self._locate(t)
        return self.pieces[k].velocity(s) / width

    def start(self):
        return self.point(0.0)

    def end(self):
        return self.pieces[-1].end() if self.is_composite else self.point(1.0)

    @property
    def is_loop(self):
        return bool(np.array_equal(self.start(), self.end()))

    def smooth_pieces(self):
        """Flattened list of (smooth curve, t0, t1)."""
        if not self.is_composite:
            return [(self, 0.0, 1.0)]
        result = []
        for k, piece in enumerate(self.pieces):
            t0, t1 = self.breaks[k], self.breaks[k + 1]
            for sub, s0, s1 in piece.smooth_pieces():
                result.append((sub, t0 + s0 * (t1 - t0), t0 + s1 * (t1 - t0)))
        return result

    def check_domain(self, samples=33):
        """Raise DomainError when sampled points leave the chart."""
        for sub, _, _ in self.smooth_pieces():
            for t in np.linspace(0, 1, samples):
                if not self.chart.contains(sub.point(t)):
                    raise DomainError(f"Curve {self.name} leaves the chart at {sub.point(t).tolist()}")

    def reversed(self):
        if self.is_composite:
            pieces = [piece.reversed() for piece in reversed(self.pieces)]
            breaks = 1.0 - self.breaks[::-1]
            return CurveSpec(self.chart, kind=self.kind, pieces=pieces, breaks=breaks,
                             name=None if self.name is None else self.name + "^-1")
        return CurveSpec(self.chart, lambda t: self._map(1.0 - t), lambda t: -self._velocity(1.0 - t),
                         kind=self.kind, name=None if self.name is None else self.name + "^-1")

    def restrict(self, t0, t1):
        """The curve on [t0, t1], reparametrised over [0, 1]."""
        if not 0.0 <= t0 < t1 <= 1.0:
            raise SpecError(f"Invalid restriction interval [{t0}, {t1}]")
        if not self.is_composite:
            width = t1 - t0
            return CurveSpec(self.chart, lambda s: self._map(t0 + width * s),
                             lambda s: width * np.asarray(self._velocity(t0 + width * s)),
                             kind=CurveKind.SEGMENT)
        pieces, breaks = [], [0.0]
        for sub, a, b in self.smooth_pieces():
            lo, hi = max(a, t0), min(b, t1)
            if hi <= lo:
                continue
            pieces.append(sub.restrict((lo - a) / (b - a), (hi - a) / (b - a)))
            breaks.append((hi - t0) / (t1 - t0))
        return CurveSpec(self.chart, kind=CurveKind.COMPOSITE, pieces=pieces, breaks=breaks)

    def to_json(self):
        return {"kind": self.kind.value, "name": self.name, "start": self.start().tolist(),
                "end": self.end().tolist()}

    # --- Constructors ---

    @staticmethod
    def segment(chart, start, end, name=None):
        start = np.array(start, dtype=float)
        end = np.array(end, dtype=float)
        delta = end - start
        # (1-t)*start + t*end hits both end points exactly
        return CurveSpec(chart, lambda t: (1.0 - t) * start + t * end, lambda t: delta.copy(),
                         kind=CurveKind.SEGMENT, name=name)

    @staticmethod
    def rectangle(chart, base, i, j, eps_i, eps_j=None, name=None):
        """Coordinate rectangle in the (i, j) plane, counter-clockwise from base."""
        if i == j:
            raise SpecError("A rectangle needs two distinct coordinate directions")
        eps_j = eps_i if eps_j is None else eps_j
        base = np.array(base, dtype=float)
        corners = [base.copy() for _ in range(4)]
        corners[1][i] += eps_i
        corners[2][i] += eps_i
        corners[2][j] += eps_j
        corners[3][j] += eps_j
        pieces = [CurveSpec.segment(chart, corners[k], corners[(k + 1) % 4]) for k in range(4)]
        return CurveSpec(chart, kind=CurveKind.RECTANGLE_LOOP, pieces=pieces,
                         name=name or f"rect({i},{j},{eps_i:g})")

    @staticmethod
    def smooth_loop(chart, base, coefficients, name=None):
        """Trigonometric polynomial loop
        base + sum_k a_k (cos(2 pi k t) - 1) + b_k sin(2 pi k t).

        :param coefficients: Array of shape (K, 2, d) with rows (a_k, b_k)
        """
        base = np.array(base, dtype=float)
        coefficients = np.asarray(coefficients, dtype=float)
        ks = 2 * np.pi * np.arange(1, coefficients.shape[0] + 1)
        a, b = coefficients[:, 0, :], coefficients[:, 1, :]

        def map_fn(t):
            s = t % 1.0
            return base + (np.cos(ks * s) - 1) @ a + np.sin(ks * s) @ b

        def velocity_fn(t):
            s = t % 1.0
            return (-ks * np.sin(ks * s)) @ a + (ks * np.cos(ks * s)) @ b

        return CurveSpec(chart, map_fn, velocity_fn, kind=CurveKind.SMOOTH_LOOP, name=name)

    @staticmethod
    def lasso(chart, base, target, i, j, eps, name=None):
        """Path out to target, small rectangle there, same path back."""
        out = CurveSpec.segment(chart, base, target)
        loop = CurveSpec.rectangle(chart, target, i, j, eps)
        return CurveSpec(chart, kind=CurveKind.COMPOSITE, pieces=[out, loop, out.reversed()],
                         name=name or f"lasso({i},{j},{eps:g})")

    @staticmethod
    def composite(chart, pieces, name=None):
        return CurveSpec(chart, kind=CurveKind.COMPOSITE, pieces=pieces, name=name)
