# -*- coding: UTF-8 -*-
"""
tractorholonomy.spacetimes.recognizers
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Curvature conditions for metrics with a recurrent lightlike vector field.

All conditions are evaluated in the adapted frame (X, E_1..E_n, Z) with
h(X, Z) = 1, h(Z, Z) = 0, h(E_i, E_j) = delta_ij and h(E_i, Z) = 0. Every
recognizer returns a report ``{residuals, thresholds, verdict}``.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np
from scipy.interpolate import CubicSpline

from ..curvature import CurvatureBundle, curvature_bundle, nabla_riemann, is_einstein, sectional_curvature
from ..curves import CurveSpec
from ..tractor import omega_from_bundle, gram_matrix
from ..transport import transport_tangent
from ..lie import IndefiniteForm, Subspace
from ..exceptions import NoRecurrentField, NotPrWave, HypothesisFailed
from ..util import Tolerances, max_abs, tensor_scale


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class RecurrentStructure:
    def __init__(self, g, x_index=0, z_index=None, parallel=False, name="d/dx"):
        """Coordinate vector field X = d/dx_index that is recurrent for g.

        :param z_index: Coordinate with h(d_x, d_z) = 1, default the last one
        :param parallel: The family guarantees that X is parallel
        """
        self.g = g
        self.x_index = x_index
        self.z_index = g.dim - 1 if z_index is None else z_index
        self.screen = [i for i in range(g.dim) if i not in (self.x_index, self.z_index)]
        self.parallel = parallel
        self.name = name

    @property
    def n(self):
        return len(self.screen)

    def vector(self, coords=None):
        x = np.zeros(self.g.dim)
        x[self.x_index] = 1.0
        return x

    def adapted_frame(self, coords):
        """Columns (X, E_1..E_n, Z).

        E_i are Gram-Schmidt orthonormalised screen coordinate vectors, Z is
        d_z made orthogonal to E and lightlike.
        """
        h = np.asarray(self.g.value(coords), dtype=float)
        d = self.g.dim
        eye = np.eye(d)
        es = []
        for i in self.screen:
            e = eye[i].copy()
            for f in es:
                e -= (f @ h @ e) * f
            norm2 = e @ h @ e
            if norm2 <= 0:
                raise HypothesisFailed(f"Screen block is not positive definite at {np.asarray(coords).tolist()}")
            es.append(e / np.sqrt(norm2))
        z = eye[self.z_index].copy()
        for f in es:
            z -= (f @ h @ z) * f
        x = self.vector()
        z = z - 0.5 * (z @ h @ z) * x
        return np.column_stack([x] + es + [z])

    def frame_residual(self, coords):
        f = self.adapted_frame(coords)
        h = np.asarray(self.g.value(coords), dtype=float)
        return max_abs(f.T @ h @ f - frame_gram(self.n))

    def theta(self, coords, bundle=None):
        """theta_b = Gamma^x_{b x}, so that nabla X = theta (x) X when X is recurrent."""
        if bundle is None:
            bundle = CurvatureBundle(coords, self.g.jet(coords, 1), order=1)
        return bundle.christoffel[self.x_index, :, self.x_index].copy()

    def recurrence_residual(self, coords, bundle=None):
        """Relative max |nabla X - theta (x) X|."""
        if bundle is None:
            bundle = CurvatureBundle(coords, self.g.jet(coords, 1), order=1)
        nabla_x = bundle.christoffel[:, :, self.x_index]
        expected = np.outer(self.vector(), self.theta(coords, bundle))
        return max_abs(nabla_x - expected) / tensor_scale(bundle.christoffel, 1.0)

    def dtheta(self, coords, bundle=None):
        """d theta[b, c] = d_b theta_c - d_c theta_b."""
        if bundle is None:
            bundle = CurvatureBundle(coords, self.g.jet(coords, 2), order=2)
        x = self.x_index
        dt = bundle.dchristoffel[x, :, x, :]  # [c, b] = d_b theta_c
        return dt.T - dt

    def to_json(self):
        return {"vector": self.name, "x_index": self.x_index, "z_index": self.z_index,
                "parallel": self.parallel}


def frame_gram(n):
    gram = np.zeros((n + 2, n + 2))
    gram[0, -1] = gram[-1, 0] = 1.0
    gram[1:n + 1, 1:n + 1] = np.eye(n)
    return gram


def _recurrent(g, recurrent):
    if recurrent is None:
        recurrent = g.metadata.get("recurrent")
    if recurrent is None:
        raise NoRecurrentField(f"Metric {g.name} has no distinguished recurrent lightlike field")
    return recurrent


def _frame_tensors(g, p, recurrent, order=2):
    b = curvature_bundle(g, p, order=order)
    f = recurrent.adapted_frame(p.coords)
    r4 = np.einsum('abcd,ai,bj,ck,dl->ijkl', b.riemann4, f, f, f, f)
    ric = f.T @ b.ricci @ f
    return b, f, r4, ric


def _xi(n):
    xi = np.zeros(n + 2)
    xi[-1] = 1.0
    return xi


def _report(residual, threshold, **extra):
    result = {"residual": float(residual), "threshold": float(threshold), "verdict": bool(residual <= threshold)}
    result.update(extra)
    return result


def _trace_tensor(r4, gram_inv):
    """tr_(3,5)(4,6) (R x R)"""
    return np.einsum('ijab,ac,bd,cdkl->ijkl', r4, gram_inv, gram_inv, r4)


def pp_trace_condition(g, p, recurrent=None, tolerances=None):
    recurrent = _recurrent(g, recurrent)
    tolerances = Tolerances.wrap(tolerances)
    _, _, r4, _ = _frame_tensors(g, p, recurrent)
    scale = tensor_scale(r4)
    trace = _trace_tensor(r4, frame_gram(recurrent.n))
    return _report(max_abs(trace), tolerances.recognizer * scale ** 2)


def _skew_tensor(r4, xi):
    """Lambda_(1,2,3) (xi x R)"""
    return (np.einsum('u,vwkl->uvwkl', xi, r4) + np.einsum('v,wukl->uvwkl', xi, r4)
            + np.einsum('w,uvkl->uvwkl', xi, r4))


def pr_condition(g, p, recurrent=None, tolerances=None):
    """R(Y1, Y2) = 0 on the orthogonal complement of X, and the equivalent skew condition."""
    recurrent = _recurrent(g, recurrent)
    tolerances = Tolerances.wrap(tolerances)
    _, _, r4, _ = _frame_tensors(g, p, recurrent)
    n = recurrent.n
    scale = tensor_scale(r4)
    threshold = tolerances.recognizer * scale
    perp = slice(0, n + 1)
    simple = max_abs(r4[perp, perp, :, :])
    endomorphism = max_abs(r4[:, :, perp, perp])
    skew = max_abs(_skew_tensor(r4, _xi(n)))
    simple_ok = max(simple, endomorphism) <= threshold
    skew_ok = skew <= threshold
    return {"simple_residual": simple, "endomorphism_residual": endomorphism, "skew_residual": skew,
            "threshold": threshold, "verdict": bool(simple_ok and skew_ok),
            "consistent": bool(simple_ok == skew_ok)}


def ricci_isotropy(g, p, recurrent=None, tolerances=None):
    """Ricci-isotropy <Ric(U), Ric(V)> = 0 versus Ric(Y, .) = 0 for Y orthogonal to X."""
    recurrent = _recurrent(g, recurrent)
    tolerances = Tolerances.wrap(tolerances)
    b, f, _, ric = _frame_tensors(g, p, recurrent)
    n = recurrent.n
    scale = tensor_scale(ric, b.riemann4)
    threshold = tolerances.isotropy * scale
    gram = ric @ frame_gram(n) @ ric
    screen = max_abs(ric[1:n + 1, :])
    along_x = max_abs(ric[0, :])
    x_perp = max_abs(ric[0, :n + 1])
    by_kernel = max(screen, along_x) <= threshold
    by_gram = max_abs(gram) <= tolerances.isotropy * scale ** 2
    return {"ric_screen": screen, "ric_x": along_x, "ric_x_perp": x_perp, "scalar": abs(b.scalar),
            "gram_residual": max_abs(gram), "threshold": threshold,
            "verdict": bool(by_kernel and by_gram), "consistent": bool(by_kernel == by_gram),
            "scalar_zero": bool(abs(b.scalar) <= threshold)}


def _default_points(g, points, n, seed):
    if points is None:
        points = g.chart.sample_points(n, seed=seed)
    return points


def default_curve(g, margin=0.2):
    lo, hi = g.chart.sampling_box(margin)
    return CurveSpec.segment(g.chart, lo, hi, name="diagonal")


def pr_is_pp_when_isotropic(g, recurrent=None, points=None, n=8, seed=0, curve=None, nodes=33,
                            tolerances=None, settings=None):
    """Certify that a Ricci-isotropic pr-wave admits a parallel rescaling of X.

    :return: Report with verdict True, False or "not applicable" and the
        rescaling factor exp(-int theta) sampled along a curve
    """
    recurrent = _recurrent(g, recurrent)
    tolerances = Tolerances.wrap(tolerances)
    points = _default_points(g, points, n, seed)
    pr_reports = [pr_condition(g, p, recurrent, tolerances) for p in points]
    if not all(r["verdict"] for r in pr_reports):
        worst = max(r["simple_residual"] for r in pr_reports)
        raise NotPrWave(f"Metric {g.name} is not a pr-wave (simple residual {worst:.3e})")
    iso = [ricci_isotropy(g, p, recurrent, tolerances) for p in points]
    if not all(r["verdict"] for r in iso):
        return {"verdict": "not applicable", "reason": "Ricci tensor is not isotropic",
                "isotropy_residual": max(max(r["ric_screen"], r["ric_x"]) for r in iso)}
    closed = 0.0
    for p in points:
        b = curvature_bundle(g, p, order=2)
        closed = max(closed, max_abs(recurrent.dtheta(p.coords, b)) / tensor_scale(b.dchristoffel, 1.0))
    if curve is None:
        curve = default_curve(g)
    ts = np.linspace(0.0, 1.0, nodes)
    theta = np.array([recurrent.theta(curve.point(t)) @ curve.velocity(t) for t in ts])
    factors = np.exp(-CubicSpline(ts, theta).antiderivative()(ts))
    transported = transport_tangent(g, curve, t_eval=ts, settings=settings)
    x = recurrent.vector()
    defect = max(max_abs(m @ x - c * x) for m, c in zip(transported.node_matrices, factors))
    threshold = tolerances.identity
    logger.debug(f"pr -> pp: closedness {closed:.2e}, rescaled transport defect {defect:.2e}")
    return {"verdict": bool(closed <= threshold and defect <= tolerances.transport),
            "closedness_residual": closed, "threshold": threshold,
            "parallel_defect": defect, "transport_threshold": tolerances.transport,
            "factor_min": float(np.min(factors)), "factor_max": float(np.max(factors)),
            "factors": factors.tolist(), "curve": curve.to_json()}


def invariant_tractor_subbundle_check(g, recurrent=None, points=None, n=8, seed=0, tolerances=None):
    """Check that E[1] + R.X, i.e. the tractors (sigma, tau X, 0), is preserved by D.

    For every sampled point and coordinate direction U, the components of
    omega(U) applied to (1, 0, 0) and (0, X, 0) outside that pattern are
    collected.
    """
    tolerances = Tolerances.wrap(tolerances)
    try:
        recurrent = _recurrent(g, recurrent)
    except NoRecurrentField as exc:
        raise HypothesisFailed(str(exc)) from exc
    points = _default_points(g, points, n, seed)
    iso = [ricci_isotropy(g, p, recurrent, tolerances) for p in points]
    if not all(r["verdict"] for r in iso):
        raise HypothesisFailed(f"Ricci tensor of {g.name} is not isotropic")
    d = g.dim
    rows = [k for k in range(d + 2) if k not in (0, 1 + recurrent.x_index)]
    h = np.zeros((d + 2, 2))
    h[0, 0] = 1.0
    h[1 + recurrent.x_index, 1] = 1.0
    residual = 0.0
    classification = None
    for p in points:
        b = curvature_bundle(g, p, order=2)
        for u in np.eye(d):
            om = omega_from_bundle(b, u)
            out = om @ h
            residual = max(residual, max_abs(out[rows]) / tensor_scale(om))
        if classification is None:
            classification = Subspace(h, IndefiniteForm(gram_matrix(b.metric))).classification
    threshold = tolerances.subbundle
    return {"residual": residual, "threshold": threshold, "verdict": bool(residual <= threshold),
            "classification": classification.value, "points": len(points)}


def _reconstruction(r4, n):
    """Least squares fit R = Lambda_(1,2)(3,4)(xi x r x xi) with r symmetric and r(X, .) = 0."""
    m = n + 2
    xi = _xi(n)
    columns, labels = [], []
    for b in range(1, m):
        for c in range(b, m):
            r = np.zeros((m, m))
            r[b, c] = r[c, b] = 1.0
            t = np.einsum('a,bc,d->abcd', xi, r, xi)
            t = t - t.transpose(1, 0, 2, 3)
            t = t - t.transpose(0, 1, 3, 2)
            columns.append(t.ravel())
            labels.append((b, c))
    a = np.column_stack(columns)
    coef, *_ = np.linalg.lstsq(a, r4.ravel(), rcond=None)
    return max_abs(a @ coef - r4.ravel())


def _quartic(r4, n):
    """Least squares rho in tr_(1,5)(4,8) (R x R) = rho xi x xi x xi x xi."""
    gi = frame_gram(n)
    q = np.einsum('abcd,ae,dh,efgh->bcfg', r4, gi, gi, r4)
    xi = _xi(n)
    target = np.einsum('a,b,c,d->abcd', xi, xi, xi, xi).ravel()
    rho = float(target @ q.ravel() / (target @ target))
    return rho, max_abs(q.ravel() - rho * target)


def pp_equivalence_battery(g, recurrent=None, points=None, n=8, seed=0, tolerances=None):
    """Evaluate the equivalent pp-wave characterisations at sampled points.

    The simple and skew conditions agree for every recurrent X. When X is
    parallel the reconstruction, quartic trace and trace conditions agree with
    them as well.
    """
    recurrent = _recurrent(g, recurrent)
    tolerances = Tolerances.wrap(tolerances)
    points = _default_points(g, points, n, seed)
    rows = []
    consistent = True
    for p in points:
        _, _, r4, _ = _frame_tensors(g, p, recurrent)
        k = recurrent.n
        scale = tensor_scale(r4)
        tol1 = tolerances.recognizer * scale
        tol2 = tolerances.recognizer * scale ** 2
        perp = slice(0, k + 1)
        simple = max_abs(r4[perp, perp, :, :])
        skew = max_abs(_skew_tensor(r4, _xi(k)))
        recon = _reconstruction(r4, k)
        rho, quartic = _quartic(r4, k)
        trace = max_abs(_trace_tensor(r4, frame_gram(k)))
        verdicts = {"simple": simple <= tol1, "skew": skew <= tol1, "reconstruction": recon <= tol1,
                    "quartic": quartic <= tol2, "trace": trace <= tol2}
        agree = verdicts["simple"] == verdicts["skew"]
        if recurrent.parallel:
            agree = agree and len(set(verdicts.values())) == 1
        consistent = consistent and agree
        rows.append({"point": p.coords.tolist(), "simple": simple, "skew": skew, "reconstruction": recon,
                     "quartic": quartic, "rho": rho, "trace": trace,
                     "verdicts": {key: bool(v) for key, v in verdicts.items()}, "consistent": bool(agree)})
    return {"points": rows, "consistent": bool(consistent), "parallel": recurrent.parallel,
            "verdict": bool(consistent and all(all(r["verdicts"].values()) for r in rows))}


# --- Advertised structure ---

def _plane_wave_checks(g, points, tolerances):
    a_fn = g.metadata["plane_wave_a"]
    recurrent = g.metadata["recurrent"]
    ys = g.metadata.get("plane_wave_screen", recurrent.screen)
    n = len(ys)
    z_i = recurrent.z_index
    curv, ricci = 0.0, 0.0
    scale = 1e-30
    for p in points:
        b = curvature_bundle(g, p, order=2)
        a = a_fn(p.coords[z_i])
        for i in range(n):
            for j in range(n):
                curv = max(curv, abs(b.riemann4[ys[i], z_i, z_i, ys[j]] + a[i, j]))
        expected = np.zeros((g.dim, g.dim))
        expected[z_i, z_i] = -np.trace(a)
        ricci = max(ricci, max_abs(b.ricci - expected))
        scale = max(scale, tensor_scale(a, b.riemann4))
    checks = {"plane_wave_curvature": _report(curv, tolerances.recognizer * scale)}
    if "block_indices" not in g.metadata:
        checks["plane_wave_ricci"] = _report(ricci, tolerances.recognizer * scale)
    return checks


def verify_family(spacetime, points=None, n=10, seed=0, tolerances=None):
    """Verify the structure a family advertises at sampled points.

    :return: Dict with one report per check and an overall verdict
    """
    from .spec import Family
    from . import ambient
    tolerances = Tolerances.wrap(tolerances)
    g = spacetime.metric
    family = spacetime.spec.family
    points = _default_points(g, points, n, seed)
    checks = {}
    recurrent = spacetime.recurrent
    if family == Family.FLAT:
        worst = max(max_abs(curvature_bundle(g, p, order=2).riemann4) for p in points)
        checks["flat"] = _report(worst, 1e-10)
    if recurrent is not None:
        frame = max(recurrent.frame_residual(p.coords) for p in points)
        checks["adapted_frame"] = _report(frame, 1e-10)
        rec = max(recurrent.recurrence_residual(p.coords) for p in points)
        checks["recurrent"] = _report(rec, tolerances.identity)
        if recurrent.parallel:
            theta = max(max_abs(recurrent.theta(p.coords)) for p in points)
            checks["parallel"] = _report(theta, tolerances.identity)
        if family in (Family.PP_WAVE, Family.PLANE_WAVE, Family.CAHEN_WALLACH):
            trace = [pp_trace_condition(g, p, recurrent, tolerances) for p in points]
            checks["pp_trace"] = {"residual": max(r["residual"] for r in trace),
                                  "threshold": max(r["threshold"] for r in trace),
                                  "verdict": all(r["verdict"] for r in trace)}
        if family in (Family.PP_WAVE, Family.PR_WAVE, Family.PLANE_WAVE, Family.CAHEN_WALLACH):
            prs = [pr_condition(g, p, recurrent, tolerances) for p in points]
            checks["pr"] = {"residual": max(r["simple_residual"] for r in prs),
                            "threshold": max(r["threshold"] for r in prs),
                            "verdict": all(r["verdict"] for r in prs)}
    if "plane_wave_a" in g.metadata:
        checks.update(_plane_wave_checks(g, points, tolerances))
    if family == Family.CAHEN_WALLACH:
        worst = 0.0
        for p in points:
            b = curvature_bundle(g, p, order=3)
            worst = max(worst, max_abs(nabla_riemann(g, p)) / tensor_scale(b.riemann4))
        checks["locally_symmetric"] = _report(worst, tolerances.identity)
    if family == Family.EINSTEIN_MODEL:
        report = is_einstein(g, points=points, tolerances=tolerances)
        expected = g.metadata["einstein_scalar"]
        drift = max(abs(report["scalar_min"] - expected), abs(report["scalar_max"] - expected))
        checks["einstein"] = _report(report["max_deviation"], report["threshold"])
        checks["scalar"] = _report(drift, tolerances.einstein * max(abs(expected), 1.0), expected=expected)
    if family == Family.RIEMANNIAN_BLOCK_PRODUCT:
        i, j = g.metadata["block_indices"]
        expected = g.metadata["block_curvature"]
        eye = np.eye(g.dim)
        worst = max(abs(sectional_curvature(g, p, eye[i], eye[j]) - expected) for p in points)
        checks["block_curvature"] = _report(worst, tolerances.identity, expected=expected)
    if family in (Family.AMBIENT_EINSTEIN, Family.AMBIENT_RICCI_FLAT, Family.CONE):
        checks["christoffel"] = ambient.ambient_christoffel_residual(spacetime, points=points)
        checks["curvature"] = ambient.ambient_curvature_residual(spacetime, points=points)
        if family == Family.AMBIENT_EINSTEIN:
            checks["parallel_field"] = ambient.parallel_field_check(spacetime, tolerances=tolerances)
    return {"family": family.value, "checks": checks,
            "verdict": bool(all(c["verdict"] for c in checks.values()))}
