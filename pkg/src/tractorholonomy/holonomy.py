# -*- coding: UTF-8 -*-
"""
tractorholonomy.holonomy
~~~~~~~~~~~~~~~~~~~~~~~~

Numerical holonomy algebras from loop ensembles.

The holonomy algebra at a base point is spanned by the curvature values at
the points of the manifold, pulled back to the base point along paths
(Ambrose-Singer). Every loop of a :class:`LoopFamily` is integrated once; at
``nodes_per_loop`` parameters along it, the curvature endomorphisms of all
coordinate planes are conjugated with the partial transport and collected.
The rank of the stacked samples is a numerical lower bound of the dimension
of the holonomy algebra.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging
from multiprocessing.pool import ThreadPool

import numpy as np
from scipy import linalg

from .curvature import CurvatureBundle, curvature_bundle
from .curves import CurveSpec, CurveKind
from .integrate import IntegratorSettings
from .transport import transport
from .tractor import curvature_matrix_from_bundle
from .exceptions import SpecError, NoRecurrentField, TqdmException
from .util import Mode, max_abs

try:
    from tqdm import tqdm
except ImportError:
    tqdm = None


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")

verdict_stable = "numerical lower bound dim = {dim}, stable under refinement"
verdict_unstable = "numerical lower bound dim = {dim}, not stable under refinement (refined dim = {refined})"
verdict_unrefined = "numerical lower bound dim = {dim}, refinement not run"


class HolonomySettings:
    def __init__(self, loops=32, rectangle_scales=(0.4, 0.2, 0.1), lassos=8, nodes_per_loop=9,
                 harmonics=2, smooth_amplitude=0.2, svd_threshold=1e-6, zero_threshold=1e-9,
                 close_commutators=False, include_loop_logs=False, refine=True, parallel=True,
                 processes=None, seed=0, show_progress=False, integrator=None):
        """Settings for loop ensembles and rank decisions.

        :param loops: Number of random smooth loops (trigonometric polynomials)
        :param rectangle_scales: Side lengths of the coordinate rectangles, relative
            to the width of the chart box, one rectangle per scale and coordinate plane
        :param lassos: Number of lasso loops (segment out, small rectangle, segment back)
        :param nodes_per_loop: Curvature is sampled at this many parameters along every loop
        :param svd_threshold: Singular values below this fraction of the largest are dropped
        :param zero_threshold: Absolute threshold below which all samples count as zero
        :param close_commutators: Close the span under commutators
        :param include_loop_logs: Add log(P) of loops with holonomy close to the identity
        :param refine: Check the rank against the loops a doubled ensemble adds,
            transported with halved integrator tolerances
        :param parallel: Integrate loops in a thread pool
        :param seed: Seed of the loop ensemble
        :param show_progress: Show progress using the tqdm library
        """
        self.loops = loops
        self.rectangle_scales = tuple(rectangle_scales)
        self.lassos = lassos
        self.nodes_per_loop = nodes_per_loop
        self.harmonics = harmonics
        self.smooth_amplitude = smooth_amplitude
        self.svd_threshold = svd_threshold
        self.zero_threshold = zero_threshold
        self.close_commutators = close_commutators
        self.include_loop_logs = include_loop_logs
        self.refine = refine
        self.parallel = parallel
        self.processes = processes
        self.seed = seed
        self.show_progress = show_progress
        self.integrator = IntegratorSettings.wrap(integrator)

    @staticmethod
    def wrap(settings):
        if settings is None:
            return HolonomySettings()
        if isinstance(settings, HolonomySettings):
            return settings
        return HolonomySettings(**settings)

    def kwargs(self):
        return {"loops": self.loops, "rectangle_scales": self.rectangle_scales, "lassos": self.lassos,
                "nodes_per_loop": self.nodes_per_loop, "harmonics": self.harmonics,
                "smooth_amplitude": self.smooth_amplitude, "svd_threshold": self.svd_threshold,
                "zero_threshold": self.zero_threshold, "close_commutators": self.close_commutators,
                "include_loop_logs": self.include_loop_logs, "refine": self.refine,
                "parallel": self.parallel, "processes": self.processes, "seed": self.seed,
                "show_progress": self.show_progress, "integrator": self.integrator}

    def refined(self):
        """Doubled ensemble and halved integrator tolerances."""
        kwargs = self.kwargs()
        kwargs["loops"] = 2 * self.loops
        kwargs["lassos"] = 2 * self.lassos
        kwargs["integrator"] = self.integrator.refined()
        kwargs["refine"] = False
        return HolonomySettings(**kwargs)

    def to_json(self):
        result = self.kwargs()
        result["rectangle_scales"] = list(self.rectangle_scales)
        result["integrator"] = self.integrator.kwargs()
        return result


class LoopFamily:
    def __init__(self, base, loops):
        """Loops based at one point.

        :param base: Base point
        :param loops: List of (loop_id, CurveSpec, info) with integer ids
        """
        self.base = base
        self.loops = sorted(loops, key=lambda item: item[0])
        for loop_id, curve, _ in self.loops:
            if not (np.array_equal(curve.start(), base.coords) and curve.is_loop):
                raise SpecError(f"Loop {loop_id} is not based at {base.coords.tolist()}")

    def __len__(self):
        return len(self.loops)

    def __iter__(self):
        return iter(self.loops)

    def inventory(self):
        counts = {}
        for _, curve, info in self.loops:
            counts[info["type"]] = counts.get(info["type"], 0) + 1
        return counts

    @staticmethod
    def default(chart, base, settings=None, extends=None):
        """Rectangles at several scales in every coordinate plane, seeded random
        smooth loops and lassos.

        Smooth loop k and lasso k only depend on the seed and k, so a larger
        ensemble starts with the loops of a smaller one.

        :param extends: Settings of a smaller ensemble; only the smooth loops and
            lassos beyond it are built, without rectangles
        """
        settings = HolonomySettings.wrap(settings)
        first_smooth = 0 if extends is None else extends.loops
        first_lasso = 0 if extends is None else extends.lassos
        lo, hi = chart.sampling_box(margin=0.02)
        width = hi - lo
        x0 = np.asarray(base.coords, dtype=float)
        d = chart.dim
        loops = []

        def direction(i, length):
            return length if x0[i] + length < hi[i] else -length

        for i in range(d if extends is None else 0):
            for j in range(i + 1, d):
                for scale in settings.rectangle_scales:
                    ei = direction(i, scale * width[i])
                    ej = direction(j, scale * width[j])
                    curve = CurveSpec.rectangle(chart, x0, i, j, ei, ej)
                    loops.append((len(loops), curve, {"type": "rectangle", "plane": [i, j],
                                                      "area": float(ei * ej)}))
        for k in range(first_smooth, settings.loops):
            rng = np.random.default_rng([settings.seed, 0, k])
            coefficients = rng.normal(size=(settings.harmonics, 2, d)) * settings.smooth_amplitude * width / 2
            curve = None
            for _ in range(12):
                candidate = CurveSpec.smooth_loop(chart, x0, coefficients, name=f"smooth{k}")
                ts = np.linspace(0, 1, 65)
                if all(np.all(candidate.point(t) > lo) and np.all(candidate.point(t) < hi) for t in ts):
                    curve = candidate
                    break
                coefficients = coefficients / 2
            if curve is None:
                logger.debug(f"Smooth loop {k} does not fit in the chart, skipped")
                continue
            loops.append((len(loops), curve, {"type": "smooth"}))
        if settings.lassos > first_lasso:
            targets = chart.sample_points(settings.lassos, seed=settings.seed, margin=0.15)
            for k in range(first_lasso, settings.lassos):
                target = targets[k]
                rng = np.random.default_rng([settings.seed, 1, k])
                i, j = sorted(rng.choice(d, size=2, replace=False).tolist())
                ei = 0.1 * width[i] if target.coords[i] + 0.1 * width[i] < hi[i] else -0.1 * width[i]
                ej = 0.1 * width[j] if target.coords[j] + 0.1 * width[j] < hi[j] else -0.1 * width[j]
                out = CurveSpec.segment(chart, x0, target.coords)
                rect = CurveSpec.rectangle(chart, target.coords, i, j, ei, ej)
                curve = CurveSpec.composite(chart, [out, rect, out.reversed()], name=f"lasso{k}")
                loops.append((len(loops), curve, {"type": "lasso", "plane": [i, j]}))
        return LoopFamily(base, loops)


def curvature_samples_at(g, coords, mode):
    """Curvature endomorphisms of all coordinate planes at a point."""
    d = g.dim
    if mode == Mode.TANGENT:
        bundle = CurvatureBundle(coords, g.jet(coords, 2), order=2)
        return [bundle.riemann_endo[:, :, i, j] for i in range(d) for j in range(i + 1, d)]
    bundle = CurvatureBundle(coords, g.jet(coords, 3), order=3)
    eye = np.eye(d)
    return [curvature_matrix_from_bundle(bundle, eye[i], eye[j]) for i in range(d) for j in range(i + 1, d)]


def _loop_job(args):
    g, loop_id, curve, info, mode, settings = args
    ts = np.linspace(0.0, 1.0, settings.nodes_per_loop)
    result = transport(g, curve, mode, t_eval=ts, settings=settings.integrator)
    samples = []
    for t, m in zip(ts, result.node_matrices):
        m_inv = np.linalg.inv(m)
        for f in curvature_samples_at(g, curve.point(t), mode):
            samples.append(m_inv @ f @ m)
    log_sample = None
    if settings.include_loop_logs and max_abs(result.matrix - np.eye(len(result.matrix))) < 0.5:
        log_sample = np.real(linalg.logm(result.matrix))
    logger.debug(f"Loop {loop_id} ({info['type']}): {result.steps} steps, error {result.error_estimate:.2e}")
    return loop_id, samples, log_sample, {"id": loop_id, "type": info["type"], "steps": result.steps,
                                          "error_estimate": result.error_estimate}


class SampleSet:
    def __init__(self, samples, loop_logs, inventory, mode):
        self.samples = samples
        self.loop_logs = loop_logs
        self.inventory = inventory
        self.mode = mode

    def all(self):
        return self.samples + self.loop_logs

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)


def ambrose_singer_samples(g, base, loops, mode=Mode.TRACTOR, settings=None):
    """Curvature samples pulled back to the base point along every loop.

    :return: SampleSet, ordered by loop id
    """
    mode = Mode.wrap(mode)
    settings = HolonomySettings.wrap(settings)
    jobs = [(g, loop_id, curve, info, mode, settings) for loop_id, curve, info in loops]
    if settings.show_progress and tqdm is None:
        raise TqdmException("show_progress cannot be true if tqdm is not available")
    logger.info(f"Integrating {len(jobs)} loops ({mode.value} mode)")
    if settings.parallel and len(jobs) > 1:
        with ThreadPool(settings.processes) as pool:
            it = pool.imap(_loop_job, jobs)
            if settings.show_progress:
                it = tqdm(it, total=len(jobs))
            results = list(it)
    else:
        it = jobs if not settings.show_progress else tqdm(jobs)
        results = [_loop_job(job) for job in it]
    results.sort(key=lambda r: r[0])
    samples, logs, inventory = [], [], []
    for _, loop_samples, log_sample, info in results:
        samples.extend(loop_samples)
        if log_sample is not None:
            logs.append(log_sample)
        inventory.append(info)
    return SampleSet(samples, logs, inventory, mode)


class AlgebraSpan:
    def __init__(self, generators, basis, singular_values, threshold, dim, closure_rounds=0):
        """Span of a set of matrices with a Frobenius-orthonormal basis.

        :param singular_values: Singular values of the stacked generators
        :param threshold: Absolute cut-off that was used for the rank decision
        """
        self.generators = generators
        self.basis = basis
        self.singular_values = singular_values
        self.threshold = threshold
        self.dim = dim
        self.closure_rounds = closure_rounds
        self.verdict = None
        self.stable = None
        self.refined_dim = None
        self.inventory = None

    @property
    def residual_spectrum(self):
        return self.singular_values[self.dim:]

    @property
    def size(self):
        if self.basis:
            return self.basis[0].shape[0]
        if self.generators:
            return self.generators[0].shape[0]
        return 0

    def project(self, m):
        m = np.asarray(m, dtype=float)
        result = np.zeros_like(m)
        for b in self.basis:
            result += np.sum(b * m) * b
        return result

    def contains(self, m, tol=1e-6):
        m = np.asarray(m, dtype=float)
        norm = np.linalg.norm(m)
        if norm == 0:
            return True
        return bool(np.linalg.norm(m - self.project(m)) <= tol * norm)

    def is_abelian(self, tol=1e-7):
        for a in range(len(self.basis)):
            for b in range(a + 1, len(self.basis)):
                c = self.basis[a] @ self.basis[b] - self.basis[b] @ self.basis[a]
                if np.linalg.norm(c) > tol:
                    return False
        return True

    def gap_ratio(self):
        """Ratio of the smallest kept to the largest dropped singular value."""
        if self.dim == 0 or self.dim >= len(self.singular_values):
            return None
        dropped = self.singular_values[self.dim]
        return float("inf") if dropped == 0 else float(self.singular_values[self.dim - 1] / dropped)

    def to_json(self, include_basis=True):
        result = {"dim": self.dim, "threshold": self.threshold,
                  "singular_values": [float(s) for s in self.singular_values[:max(self.dim + 8, 16)]],
                  "residual_spectrum_max": float(self.residual_spectrum[0]) if len(self.residual_spectrum) else 0.0,
                  "generators": len(self.generators), "closure_rounds": self.closure_rounds,
                  "gap_ratio": self.gap_ratio(), "verdict": self.verdict, "stable": self.stable,
                  "refined_dim": self.refined_dim}
        if include_basis:
            result["basis"] = [np.round(b, 12).tolist() for b in self.basis]
        if self.inventory is not None:
            result["loops"] = self.inventory
        return result


def _rank_basis(matrices, svd_threshold, zero_threshold):
    if len(matrices) == 0:
        return [], np.zeros(0), zero_threshold, 0
    shape = matrices[0].shape
    stack = np.array([np.asarray(m, dtype=float).ravel() for m in matrices])
    _, s, vt = linalg.svd(stack, full_matrices=False)
    if s[0] <= zero_threshold:
        return [], s, zero_threshold, 0
    threshold = svd_threshold * s[0]
    dim = int(np.sum(s > threshold))
    basis = [vt[k].reshape(shape) for k in range(dim)]
    return basis, s, threshold, dim


def span_algebra(samples, svd_threshold=1e-6, close=False, zero_threshold=1e-9, max_rounds=10):
    """Numerical span of matrices, optionally closed under commutators."""
    generators = [np.asarray(m, dtype=float) for m in samples]
    basis, s, threshold, dim = _rank_basis(generators, svd_threshold, zero_threshold)
    rounds = 0
    while close and rounds < max_rounds and dim > 1:
        commutators = [basis[a] @ basis[b] - basis[b] @ basis[a]
                       for a in range(dim) for b in range(a + 1, dim)]
        new_basis, new_s, new_threshold, new_dim = _rank_basis(basis + commutators, svd_threshold, zero_threshold)
        rounds += 1
        if new_dim == dim:
            break
        basis, s, threshold, dim = new_basis, new_s, new_threshold, new_dim
    span = AlgebraSpan(generators, basis, s, threshold, dim, rounds)
    ratio = span.gap_ratio()
    if ratio is not None and ratio < 100:
        logger.warning(f"Borderline singular value gap (ratio {ratio:.1f}) at dim {dim}")
    return span


def _inventory(loops, sample_set):
    return {"loops": len(loops), "types": loops.inventory(),
            "max_error_estimate": max((info["error_estimate"] for info in sample_set.inventory), default=0.0),
            "total_steps": sum(info["steps"] for info in sample_set.inventory)}


def holonomy_algebra(g, base, mode=Mode.TRACTOR, settings=None):
    """Sample, span and (optionally) check stability under refinement.

    The refinement keeps the samples of the first ensemble and adds the loops
    of the doubled ensemble, transported with halved integrator tolerances.
    """
    mode = Mode.wrap(mode)
    settings = HolonomySettings.wrap(settings)
    loops = LoopFamily.default(g.chart, base, settings)
    sample_set = ambrose_singer_samples(g, base, loops, mode, settings)
    span = span_algebra(sample_set.all(), settings.svd_threshold, settings.close_commutators,
                        settings.zero_threshold)
    span.inventory = _inventory(loops, sample_set)
    logger.info(f"Holonomy ({mode.value}) at {base.coords.tolist()}: dim {span.dim}")
    if settings.refine:
        refined_settings = settings.refined()
        extra = LoopFamily.default(g.chart, base, refined_settings, extends=settings)
        extra_set = ambrose_singer_samples(g, base, extra, mode, refined_settings)
        refined = span_algebra(sample_set.all() + extra_set.all(), settings.svd_threshold,
                               settings.close_commutators, settings.zero_threshold)
        span.inventory["refinement"] = _inventory(extra, extra_set)
        span.refined_dim = refined.dim
        span.stable = refined.dim == span.dim
        if span.stable:
            span.verdict = verdict_stable.format(dim=span.dim)
        else:
            span.verdict = verdict_unstable.format(dim=span.dim, refined=refined.dim)
            logger.warning(span.verdict)
    else:
        span.verdict = verdict_unrefined.format(dim=span.dim)
    return span


def screen_holonomy(g, recurrent, base, loops=None, settings=None):
    """Projection of the tangent holonomy onto the so(n) block of the adapted frame."""
    if recurrent is None:
        raise NoRecurrentField(f"Metric {g.name} has no distinguished recurrent lightlike field")
    settings = HolonomySettings.wrap(settings)
    if loops is None:
        loops = LoopFamily.default(g.chart, base, settings)
    frame = recurrent.adapted_frame(base.coords)
    frame_inv = np.linalg.inv(frame)
    n = g.dim - 2
    sample_set = ambrose_singer_samples(g, base, loops, Mode.TANGENT, settings)
    blocks, off_block = [], 0.0
    for a in sample_set.all():
        adapted = frame_inv @ a @ frame
        blocks.append(adapted[1:n + 1, 1:n + 1])
        # the holonomy preserves R.X: first column below the first entry vanishes
        off_block = max(off_block, max_abs(adapted[1:, 0]))
    span = span_algebra(blocks, settings.svd_threshold, settings.close_commutators, settings.zero_threshold)
    span.inventory = {"loops": len(loops), "types": loops.inventory(), "x_invariance_residual": off_block}
    return span


class SmallLoopResult:
    def __init__(self, scales, errors, orders, reference):
        self.scales = scales
        self.errors = errors
        self.orders = orders
        self.reference = reference

    def to_json(self):
        return {"scales": list(self.scales), "errors": self.errors, "orders": self.orders}


def small_loop_curvature(g, p, i, j, scales=(0.2, 0.1, 0.05), mode=Mode.TRACTOR, settings=None):
    """Compare log(P)/eps^2 of rectangles centred at p with -F(d_i, d_j).

    The rectangles are based at the corner p - eps/2 (e_i + e_j); the reference
    curvature at p is pulled back to that corner along the straight segment.
    """
    mode = Mode.wrap(mode)
    settings = IntegratorSettings.wrap(settings)
    d = g.dim
    eye = np.eye(d)
    b = curvature_bundle(g, p, order=3 if mode == Mode.TRACTOR else 2)
    if mode == Mode.TANGENT:
        f = b.riemann_endo[:, :, i, j]
    else:
        f = curvature_matrix_from_bundle(b, eye[i], eye[j])
    errors, reference = [], None
    for eps in scales:
        corner = np.asarray(p.coords) - eps / 2 * (eye[i] + eye[j])
        loop = CurveSpec.rectangle(g.chart, corner, i, j, eps)
        hol = transport(g, loop, mode, settings=settings).matrix
        seg = transport(g, CurveSpec.segment(g.chart, corner, p.coords), mode, settings=settings).matrix
        reference = np.linalg.inv(seg) @ f @ seg
        estimate = np.real(linalg.logm(hol)) / eps ** 2
        errors.append(float(np.linalg.norm(estimate + reference)))
    orders = [float(np.log2(errors[k] / errors[k + 1])) if errors[k + 1] > 0 else float("inf")
              for k in range(len(errors) - 1)]
    return SmallLoopResult(list(scales), errors, orders, reference)


def loop_inversion_residual(g, curve, mode=Mode.TRACTOR, settings=None):
    """max |P(reversed) P(curve) - I| together with the combined error estimate."""
    forward = transport(g, curve, mode, settings=settings)
    backward = transport(g, curve.reversed(), mode, settings=settings)
    residual = max_abs(backward.matrix @ forward.matrix - np.eye(len(forward.matrix)))
    return residual, forward.error_estimate + backward.error_estimate
