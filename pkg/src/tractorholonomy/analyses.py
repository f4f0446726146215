# -*- coding: UTF-8 -*-
"""
tractorholonomy.analyses
~~~~~~~~~~~~~~~~~~~~~~~~

The analyses a run configuration can ask for.

Every analysis takes a :class:`RunContext` and its options and returns a
pair ``(verdicts, details)``: ``verdicts`` is a flat dict that an
``expect`` table is compared with, ``details`` holds the residuals and
thresholds behind them.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from .config import Analysis
from .curvature import (curvature_bundle, is_einstein, is_c_space, schouten_transformation_residual,
                        weyl_covariance_residual)
from .exceptions import ConfigError, HypothesisFailed, NotPrWave, SearchInconclusive
from .geometry import ScalarField
from .holonomy import LoopFamily, holonomy_algebra, screen_holonomy
from .lie import (IndefiniteForm, berger_check, so_algebra, plane_wave_model_algebra, plane_wave_pattern_mask,
                  pattern_residual, witt_basis, trichotomy, ambient_model_algebra, iso_l_algebra,
                  iso_l_counterexample, wedge, stabilizer_check, invariant_subspaces, invariance_residual,
                  Subspace)
from .spacetimes.spec import Family, wave_families, ambient_families
from .spacetimes import recognizers
from .spacetimes import ambient
from .spacetimes.planewave import plane_wave_parallel_tractors
from .tractor import tractor_gram, tractor_bianchi_defect
from .transport import transport_tractor
from .util import Mode, max_abs, tensor_scale


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class RunContext:
    def __init__(self, config):
        """Shared state of one run: the built spacetime and cached holonomy spans."""
        self.config = config
        self.tolerances = config.tolerances
        self.seed = config.seed
        self._spacetime = None
        self._spans = {}

    @property
    def spacetime(self):
        if self._spacetime is None:
            self._spacetime = self.config.spec.validate()
        return self._spacetime

    def points(self, n=None):
        n = self.config.sample_points if n is None else n
        return self.spacetime.chart.sample_points(n, seed=self.seed)

    def holonomy_settings(self):
        return self.config.holonomy_settings()

    def span(self, mode):
        """Holonomy span at the base point, computed once per mode."""
        mode = Mode.wrap(mode)
        if mode not in self._spans:
            st = self.spacetime
            self._spans[mode] = holonomy_algebra(st.metric, st.base_point, mode, self.holonomy_settings())
        return self._spans[mode]


# --- Applicability ---

def check_analysis(analysis, spec):
    """Raise ConfigError when an analysis cannot run on a spec."""
    family = spec.family
    if analysis == Analysis.PLANE_WAVE_SECTIONS and family not in (Family.PLANE_WAVE, Family.CAHEN_WALLACH):
        raise ConfigError(f"{analysis.value} needs a plane_wave or cahen_wallach spec, got {family.value}")
    if analysis == Analysis.SCREEN_HOLONOMY and family not in wave_families + (Family.RIEMANNIAN_BLOCK_PRODUCT,):
        raise ConfigError(f"{analysis.value} needs a spec with a recurrent lightlike field, got {family.value}")
    if analysis == Analysis.AMBIENT_COMPARE and family not in ambient_families:
        raise ConfigError(f"{analysis.value} needs an ambient or cone spec, got {family.value}")


def check_applicable(config):
    if config.spec is None:
        return
    for analysis in config.analyses:
        check_analysis(analysis, config.spec)


# --- Curvature ---

def _conformal_factor(chart):
    names = chart.coord_names
    return ScalarField.from_expression(chart, f"0.1*{names[0]} + 0.05*{names[1]}^2")


# identity residual -> tensor it is relative to
_identity_tensors = {"riemann_antisymmetry_12": "riemann", "riemann_antisymmetry_34": "riemann",
                     "riemann_pair_symmetry": "riemann", "riemann_first_bianchi": "riemann",
                     "ricci_symmetry": "ricci", "weyl_trace": "weyl", "cotton_antisymmetry": "cotton",
                     "cotton_divergence": "cotton"}


def _identities_hold(identities, maxima, threshold, flat_threshold):
    """Relative residuals of vanishing tensors are ratios of round-off and are skipped."""
    for key, value in identities.items():
        tensor = _identity_tensors.get(key)
        if tensor is not None and maxima[tensor] <= flat_threshold:
            continue
        if value > threshold:
            return False
    return True


def _cotton_divergence(g, p):
    """|(d-3) C - div W| relative to the curvature scale, at least 1."""
    b = curvature_bundle(g, p, order=3)
    return max_abs((g.dim - 3) * b.cotton - b.divergence_weyl) / max(tensor_scale(b.riemann4), 1.0)


def curvature_analysis(ctx, options):
    st = ctx.spacetime
    g = st.metric
    d = g.dim
    points = ctx.points()
    order = 3 if d >= 3 else 2
    maxima = {"riemann": 0.0, "ricci": 0.0, "scalar": 0.0, "weyl": 0.0, "cotton": 0.0}
    identities = {}
    for p in points:
        b = curvature_bundle(g, p, order=order, tolerances=ctx.tolerances)
        maxima["riemann"] = max(maxima["riemann"], max_abs(b.riemann4))
        maxima["ricci"] = max(maxima["ricci"], max_abs(b.ricci))
        maxima["scalar"] = max(maxima["scalar"], abs(b.scalar))
        if b.schouten is not None:
            maxima["weyl"] = max(maxima["weyl"], max_abs(b.weyl4))
        if order >= 3 and b.cotton is not None:
            maxima["cotton"] = max(maxima["cotton"], max_abs(b.cotton))
        for key, value in b.identity_residuals().items():
            identities[key] = max(identities.get(key, 0.0), value)
    identity_threshold = ctx.tolerances.identity
    flat_threshold = 1e-10
    details = {"points": len(points), "maxima": maxima,
               "identity_residuals": identities, "identity_threshold": identity_threshold,
               "flat_threshold": flat_threshold,
               "einstein": is_einstein(g, points=points, tolerances=ctx.tolerances),
               "base_point": curvature_bundle(g, st.base_point, order=order).to_json()}
    verdicts = {"flat": bool(maxima["riemann"] <= flat_threshold),
                "einstein": details["einstein"]["verdict"],
                "identities": _identities_hold(identities, maxima, identity_threshold, flat_threshold),
                "max_riemann": maxima["riemann"], "max_scalar": maxima["scalar"]}
    if d >= 3:
        details["c_space"] = is_c_space(g, points=points, tolerances=ctx.tolerances)
        verdicts["c_space"] = details["c_space"]["verdict"]
    laws = {}
    if d >= 3 and options.get("conformal_laws", True):
        phi = _conformal_factor(g.chart)
        n_laws = min(len(points), int(options.get("law_points", 10)))
        laws["conformal_factor"] = phi.name
        laws["schouten_transformation"] = {
            "residual": max(schouten_transformation_residual(g, phi, p) for p in points[:n_laws]),
            "threshold": ctx.tolerances.identity}
        if d >= 4:
            if maxima["weyl"] > flat_threshold:
                laws["weyl_covariance"] = {
                    "residual": max(weyl_covariance_residual(g, phi, p) for p in points[:n_laws]),
                    "threshold": ctx.tolerances.weyl_covariance}
            if maxima["riemann"] > flat_threshold:
                laws["cotton_divergence"] = {
                    "residual": max(_cotton_divergence(g, p) for p in points[:n_laws]),
                    "threshold": ctx.tolerances.cotton_divergence}
                rng = np.random.default_rng(ctx.seed)
                worst = 0.0
                for p in points[:n_laws]:
                    triples = [(rng.normal(), rng.normal(size=d), rng.normal()) for _ in range(3)]
                    defect = tractor_bianchi_defect(g, p, triples).vector()
                    scale = max(tensor_scale(curvature_bundle(g, p, order=2).riemann4), 1.0)
                    worst = max(worst, max_abs(defect) / scale)
                laws["tractor_bianchi"] = {"residual": worst, "threshold": ctx.tolerances.identity}
        for law in laws.values():
            if isinstance(law, dict):
                law["verdict"] = bool(law["residual"] <= law["threshold"])
        verdicts["conformal_laws"] = bool(all(law["verdict"] for law in laws.values() if isinstance(law, dict)))
    details["conformal_laws"] = laws
    return verdicts, details


# --- Recognizers ---

def recognize_analysis(ctx, options):
    st = ctx.spacetime
    g = st.metric
    points = ctx.points()
    report = recognizers.verify_family(st, points=points, tolerances=ctx.tolerances)
    verdicts = {"verified": report["verdict"]}
    for key, check in report["checks"].items():
        verdicts[f"check_{key}"] = check["verdict"]
    details = {"verify_family": report}
    if st.recurrent is not None:
        battery = recognizers.pp_equivalence_battery(g, st.recurrent, points=points, tolerances=ctx.tolerances)
        iso = [recognizers.ricci_isotropy(g, p, st.recurrent, ctx.tolerances) for p in points]
        details["pp_equivalence_battery"] = battery
        details["ricci_isotropy"] = {"residual": max(max(r["ric_screen"], r["ric_x"]) for r in iso),
                                     "threshold": max(r["threshold"] for r in iso),
                                     "scalar_max": max(r["scalar"] for r in iso),
                                     "verdict": all(r["verdict"] for r in iso),
                                     "scalar_zero": all(r["scalar_zero"] for r in iso)}
        verdicts["battery_consistent"] = battery["consistent"]
        verdicts["pp"] = battery["verdict"]
        verdicts["ricci_isotropic"] = details["ricci_isotropy"]["verdict"]
        verdicts["scalar_zero"] = details["ricci_isotropy"]["scalar_zero"]
        if st.spec.family in (Family.PP_WAVE, Family.PR_WAVE) and options.get("pr_is_pp", True):
            try:
                result = recognizers.pr_is_pp_when_isotropic(g, st.recurrent, points=points[:8],
                                                             tolerances=ctx.tolerances,
                                                             settings=ctx.holonomy_settings().integrator)
                details["pr_is_pp"] = result
                verdicts["pr_is_pp"] = result["verdict"]
            except NotPrWave as exc:
                details["pr_is_pp"] = exc.to_json()
                verdicts["pr_is_pp"] = "not a pr-wave"
    return verdicts, details


# --- Holonomy ---

def _span_verdicts(span):
    return {"dim": span.dim, "stable": span.stable}


def tractor_holonomy_analysis(ctx, options):
    st = ctx.spacetime
    span = ctx.span(Mode.TRACTOR)
    verdicts = _span_verdicts(span)
    details = {"span": span.to_json(include_basis=options.get("include_basis", True)),
               "base_point": st.base_point.coords.tolist()}
    if st.spec.family in (Family.PLANE_WAVE, Family.CAHEN_WALLACH) and span.dim > 0:
        sections, frame = _plane_wave_frame(ctx)
        conjugated = [np.linalg.solve(frame, b) @ frame for b in span.basis]
        n = int(st.spec.params["n"])
        residual = pattern_residual(conjugated, plane_wave_pattern_mask(n))
        t = sections.tractor_vectors(st.base_point.coords[-1], st.dim)
        fixed = max(max_abs(b @ t) for b in span.basis) / max_abs(t)
        threshold = ctx.tolerances.transport
        details["plane_wave_pattern"] = {"residual": residual, "threshold": threshold,
                                         "verdict": bool(residual <= threshold),
                                         "model_dim": 2 * n + 1}
        details["sections_annihilated"] = {"residual": fixed, "threshold": threshold,
                                           "verdict": bool(fixed <= threshold)}
        verdicts["pattern"] = details["plane_wave_pattern"]["verdict"]
        verdicts["sections_fixed"] = details["sections_annihilated"]["verdict"]
    return verdicts, details


def tangent_holonomy_analysis(ctx, options):
    span = ctx.span(Mode.TANGENT)
    return _span_verdicts(span), {"span": span.to_json(include_basis=options.get("include_basis", True)),
                                  "base_point": ctx.spacetime.base_point.coords.tolist()}


def screen_holonomy_analysis(ctx, options):
    st = ctx.spacetime
    span = screen_holonomy(st.metric, st.recurrent, st.base_point, settings=ctx.holonomy_settings())
    threshold = ctx.tolerances.transport
    x_residual = span.inventory["x_invariance_residual"]
    verdicts = {"dim": span.dim, "x_invariant": bool(x_residual <= threshold)}
    return verdicts, {"span": span.to_json(), "x_invariance_threshold": threshold}


# --- Ambient metrics ---

def ambient_compare_analysis(ctx, options):
    st = ctx.spacetime
    family = st.spec.family
    base = st.metric.metadata["base"]
    points = ctx.points()
    christoffel = ambient.ambient_christoffel_residual(st, n=int(options.get("christoffel_points", 50)),
                                                       seed=ctx.seed)
    curvature = ambient.ambient_curvature_residual(st, points=points)
    flat_threshold = 1e-10
    verdicts = {"christoffel": christoffel["verdict"], "curvature": curvature["verdict"],
                "flat": bool(curvature["max_curvature"] <= flat_threshold)}
    details = {"christoffel": christoffel, "curvature": curvature, "flat_threshold": flat_threshold}
    if options.get("holonomy", True):
        span = ctx.span(Mode.TANGENT)
        verdicts["dim"] = span.dim
        verdicts["stable"] = span.stable
        details["span"] = span.to_json(include_basis=False)
        if family == Family.AMBIENT_RICCI_FLAT:
            base_span = holonomy_algebra(base.metric, base.base_point, Mode.TANGENT, ctx.holonomy_settings())
            generators = base_span.basis if base_span.dim > 0 else [np.zeros((base.dim, base.dim))]
            model = ambient_model_algebra(generators)
            verdicts["model_dim"] = len(model)
            verdicts["matches_model"] = bool(len(model) == span.dim)
            details["base_span"] = base_span.to_json(include_basis=False)
    if family == Family.AMBIENT_EINSTEIN:
        check = ambient.parallel_field_check(st, tolerances=ctx.tolerances,
                                             settings=ctx.holonomy_settings().integrator)
        details["parallel_field"] = check
        verdicts["parallel_field"] = check["verdict"]
        verdicts["causal_tag"] = check["causal_tag"]
    if (family == Family.AMBIENT_RICCI_FLAT and "plane_wave_a" in base.metric.metadata
            and "block_indices" not in base.metric.metadata):
        samples = ambient.ambient_higher_derivative_samples(st, tolerances=ctx.tolerances)
        samples.pop("samples")
        details["higher_derivatives"] = samples
        verdicts["higher_derivatives"] = samples["verdict"]
    return verdicts, details


# --- Lie structure ---

def berger_analysis(ctx, options):
    algebra = options.get("algebra", "tractor_holonomy")
    if algebra == "plane_wave_model":
        n = int(options.get("n", 2))
        generators = plane_wave_model_algebra(n)
        e_dim = n + 4
    elif algebra == "so":
        r, s = options.get("signature", [0, 4])
        form = IndefiniteForm(np.diag([-1.0] * int(r) + [1.0] * int(s)))
        generators = so_algebra(form)
        e_dim = form.dim
    elif algebra in ("tractor_holonomy", "tangent_holonomy"):
        mode = Mode.TRACTOR if algebra == "tractor_holonomy" else Mode.TANGENT
        span = ctx.span(mode)
        e_dim = span.size
        generators = span.basis if span.dim > 0 else [np.zeros((e_dim, e_dim))]
    else:
        raise ConfigError(f"Unknown algebra for berger: {algebra}")
    result = berger_check(generators, e_dim=e_dim, tol=ctx.tolerances.berger)
    result["algebra"] = algebra
    verdicts = {"berger": result["berger"], "dim_g": result["dim_g"],
                "dim_g_underline": result["dim_g_underline"], "dim_k": result["dim_k"]}
    return verdicts, result


def classify_invariants_analysis(ctx, options):
    st = ctx.spacetime
    span = ctx.span(Mode.TRACTOR)
    form = IndefiniteForm(tractor_gram(st.metric, st.base_point))
    details = {"span_dim": span.dim}
    if span.dim == 0:
        details["trichotomy"] = {"notes": ["holonomy span is zero, every subspace is invariant"]}
        verdicts = {"cases": ["trivial"], "trivial": True}
    else:
        result = trichotomy(span.basis, form, seed=ctx.seed, tolerances=ctx.tolerances)
        details["trichotomy"] = result
        verdicts = {"cases": result["cases"], "trivial": False,
                    "conformally_einstein": "conformally_einstein" in result["cases"],
                    "decomposable": "decomposable" in result["cases"],
                    "recurrent_isotropic": "recurrent_isotropic" in result["cases"]}
    if st.recurrent is not None:
        try:
            check = recognizers.invariant_tractor_subbundle_check(st.metric, st.recurrent, points=ctx.points(),
                                                                  tolerances=ctx.tolerances)
            details["subbundle"] = check
            verdicts["subbundle_invariant"] = check["verdict"]
            verdicts["subbundle_classification"] = check["classification"]
        except HypothesisFailed as exc:
            details["subbundle"] = exc.to_json()
            verdicts["subbundle_invariant"] = "hypothesis failed"
    return verdicts, details


def counterexample_iso_l_analysis(ctx, options):
    n = int(options.get("n", 2))
    a1 = int(options.get("a1", 1))
    a2 = int(options.get("a2", 1))
    b = options.get("b")
    result = iso_l_counterexample(n, a1, a2, b=b, exact=True)
    form = IndefiniteForm.anti_diagonal(n)
    alpha = wedge(result["covectors"], exact=True)
    stabilizer = stabilizer_check(iso_l_algebra(n, exact=True), alpha, tol=ctx.tolerances.stabilizer)
    generators = iso_l_algebra(n)
    plane = np.zeros((n + 4, 2))
    plane[0, 0] = plane[1, 1] = 1.0
    details = {"n": n, "a1": a1, "a2": a2, "b": b, "value": result["value"],
               "expected_value": -2 * a1 * a2 * int(np.prod(b if b is not None else [1] * n)),
               "element": result["element"], "in_algebra": result["in_algebra"],
               "stabilizer": stabilizer, "form": form.to_json(),
               "l_invariance_residual": invariance_residual(generators, plane)}
    found = False
    try:
        subspaces = invariant_subspaces(generators, 2, form, seed=ctx.seed, tolerances=ctx.tolerances)
    except SearchInconclusive as exc:
        subspaces = exc.partial
        details["search_note"] = str(exc)
    for subspace in subspaces:
        if subspace.angle(Subspace(plane)) < 1e-8:
            found = True
            details["l_found"] = subspace.to_json()
    verdicts = {"value": result["value"], "in_algebra": result["in_algebra"],
                "stabilizer": stabilizer["verdict"], "l_found": found,
                "l_invariance_residual": details["l_invariance_residual"]}
    return verdicts, details


# --- Plane waves ---

def _plane_wave_frame(ctx):
    """Parallel sections and the Witt basis (T1, T2, E, Z2, Z1) they span at the base point."""
    st = ctx.spacetime
    g = st.metric
    z_index = g.dim - 1
    sections = plane_wave_parallel_tractors(st.spec.params["a"], int(st.spec.params["n"]),
                                            z_interval=(g.chart.lower[z_index], g.chart.upper[z_index]),
                                            z0=float(st.base_point.coords[z_index]))
    t = sections.tractor_vectors(st.base_point.coords[z_index], g.dim)
    frame = witt_basis([t[:, 0], t[:, 1]], tractor_gram(g, st.base_point))
    return sections, frame


def plane_wave_sections_analysis(ctx, options):
    st = ctx.spacetime
    g = st.metric
    z_index = g.dim - 1
    settings = ctx.holonomy_settings()
    sections = plane_wave_parallel_tractors(st.spec.params["a"], int(st.spec.params["n"]),
                                            z_interval=(g.chart.lower[z_index], g.chart.upper[z_index]),
                                            z0=options.get("z0"), nodes=int(options.get("nodes", 129)))
    base = st.base_point
    t = sections.tractor_vectors(base.coords[z_index], g.dim)
    gram = tractor_gram(g, base)
    isotropy = max_abs(t.T @ gram @ t) / max(max_abs(t) ** 2, 1e-30)
    loops = LoopFamily.default(g.chart, base, settings)
    defect = 0.0
    for _, curve, _ in loops:
        m = transport_tractor(g, curve, settings=settings.integrator).matrix
        defect = max(defect, max_abs(m @ t - t) / max_abs(t))
    threshold = ctx.tolerances.transport
    closed_form_threshold = 1e-9
    details = {"sections": sections.to_json(), "isotropy_residual": isotropy,
               "isotropy_threshold": ctx.tolerances.isotropy,
               "loop_defect": defect, "loop_threshold": threshold, "loops": len(loops),
               "closed_form_threshold": closed_form_threshold}
    verdicts = {"isotropic": bool(isotropy <= ctx.tolerances.isotropy),
                "fixed_by_loops": bool(defect <= threshold),
                "wronskian_constant": bool(sections.wronskian_drift <= threshold),
                "zeros": [len(z) for z in sections.zeros]}
    if sections.closed_form_error is not None:
        verdicts["closed_form"] = bool(sections.closed_form_error <= closed_form_threshold)
    return verdicts, details


analyses = {
    Analysis.CURVATURE: curvature_analysis,
    Analysis.RECOGNIZE: recognize_analysis,
    Analysis.TRACTOR_HOLONOMY: tractor_holonomy_analysis,
    Analysis.TANGENT_HOLONOMY: tangent_holonomy_analysis,
    Analysis.SCREEN_HOLONOMY: screen_holonomy_analysis,
    Analysis.AMBIENT_COMPARE: ambient_compare_analysis,
    Analysis.BERGER: berger_analysis,
    Analysis.PLANE_WAVE_SECTIONS: plane_wave_sections_analysis,
    Analysis.CLASSIFY_INVARIANTS: classify_invariants_analysis,
    Analysis.COUNTEREXAMPLE_ISO_L: counterexample_iso_l_analysis,
}


def run_analysis(ctx, analysis):
    analysis = Analysis.wrap(analysis)
    logger.info(f"Running {analysis.value}")
    verdicts, details = analyses[analysis](ctx, ctx.config.options_for(analysis))
    logger.info(f"Finished {analysis.value}: {verdicts}")
    return verdicts, details
