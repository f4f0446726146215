# -*- coding: UTF-8 -*-
"""
tractorholonomy.lie
~~~~~~~~~~~~~~~~~~~

Linear algebra on holonomy spans: indefinite forms, joint kernels, invariant
subspaces, the action on exterior forms, Berger algebras and the model
algebras the numerical spans are compared with.

Matrices act on column vectors. Forms are antisymmetric arrays with
``alpha(v1, ..., vk) = alpha[i1, ..., ik] v1[i1] ... vk[ik]``.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging
import itertools
from fractions import Fraction

import numpy as np
from scipy import linalg
import sympy

from .exceptions import DimensionError, SearchInconclusive, TooLarge, SpecError
from .tractor import causal_tag
from .util import DDType, Tolerances, max_abs


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


class Classification(DDType):
    NONDEGENERATE = "nondegenerate"
    DEGENERATE = "degenerate"
    TOTALLY_ISOTROPIC = "totally_isotropic"


class IndefiniteForm:
    def __init__(self, gram, tol=1e-10):
        """Nondegenerate symmetric bilinear form.

        :param gram: Symmetric (m, m) matrix
        """
        gram = np.array(gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise DimensionError(f"Gram matrix should be square, got shape {gram.shape}")
        if max_abs(gram - gram.T) > tol * (max_abs(gram) + 1e-30):
            raise SpecError("Gram matrix is not symmetric")
        eig = np.linalg.eigvalsh(gram)
        if np.min(np.abs(eig)) <= tol * np.max(np.abs(eig)):
            raise SpecError("Gram matrix is degenerate")
        self.gram = gram
        self.signature = (int(np.sum(eig < 0)), int(np.sum(eig > 0)))

    @property
    def dim(self):
        return self.gram.shape[0]

    def inner(self, u, v):
        return float(np.asarray(u) @ self.gram @ np.asarray(v))

    def restrict(self, basis):
        basis = np.asarray(basis, dtype=float)
        return basis.T @ self.gram @ basis

    def is_compatible(self, a, tol=1e-8):
        """a is in so(gram): a^T G + G a = 0."""
        a = np.asarray(a, dtype=float)
        return max_abs(a.T @ self.gram + self.gram @ a) <= tol * (max_abs(a) * max_abs(self.gram) + 1e-30)

    @staticmethod
    def from_gram(gram):
        return IndefiniteForm(gram)

    @staticmethod
    def anti_diagonal(n):
        """Index-(2, n+2) form on (x1, x2, y1..yn, z1, z2): x1 pairs with z2,
        x2 pairs with z1 and the y block is the identity."""
        m = n + 4
        gram = np.zeros((m, m))
        gram[0, m - 1] = gram[m - 1, 0] = 1.0
        gram[1, m - 2] = gram[m - 2, 1] = 1.0
        gram[2:n + 2, 2:n + 2] = np.eye(n)
        return IndefiniteForm(gram)

    def to_json(self):
        return {"gram": self.gram.tolist(), "signature": list(self.signature)}


class Subspace:
    def __init__(self, basis, form=None, tol=1e-8):
        """Subspace with a Euclidean-orthonormal column basis.

        :param basis: (m, k) matrix with linearly independent columns
        """
        basis = np.asarray(basis, dtype=float)
        if basis.ndim == 1:
            basis = basis[:, None]
        s = linalg.svdvals(basis) if basis.size else np.zeros(0)
        if basis.shape[1] > 0 and s[-1] <= tol * max(s[0], 1.0):
            raise SpecError("Subspace basis is not linearly independent")
        self.basis = linalg.orth(basis) if basis.shape[1] > 0 else basis
        self.form = form
        self.classification = None
        self.causal_tag = None
        self.invariance_residual = None
        self.annihilator = None
        if form is not None:
            self.classification, self.causal_tag = classify_subspace(self, form)

    @property
    def dim(self):
        return self.basis.shape[1]

    def contains(self, v, tol=1e-8):
        v = np.asarray(v, dtype=float)
        return bool(np.linalg.norm(v - self.basis @ (self.basis.T @ v)) <= tol * max(np.linalg.norm(v), 1e-30))

    def angle(self, other):
        """Largest principal angle."""
        return float(np.max(linalg.subspace_angles(self.basis, other.basis)))

    def to_json(self):
        result = {"dim": self.dim, "basis": np.round(self.basis, 12).tolist(),
                  "classification": None if self.classification is None else self.classification.value,
                  "causal_tag": None if self.causal_tag is None else self.causal_tag.value,
                  "invariance_residual": self.invariance_residual}
        if self.annihilator is not None:
            result["annihilator_dim"] = int(self.annihilator.shape[1])
        return result

    def __repr__(self):
        return f"Subspace(dim={self.dim}, {self.classification})"


def classify_subspace(subspace, form, tol=1e-8, causal_tol=1e-9):
    """Classification from the restricted Gram matrix; 1-dim subspaces also get a causal tag."""
    basis = subspace.basis if isinstance(subspace, Subspace) else linalg.orth(np.asarray(subspace, dtype=float))
    restricted = form.restrict(basis)
    scale = max_abs(form.gram)
    eig = np.linalg.eigvalsh((restricted + restricted.T) / 2)
    if np.all(np.abs(eig) <= tol * scale):
        classification = Classification.TOTALLY_ISOTROPIC
    elif np.any(np.abs(eig) <= tol * scale):
        classification = Classification.DEGENERATE
    else:
        classification = Classification.NONDEGENERATE
    tag = None
    if basis.shape[1] == 1:
        tag = causal_tag(float(restricted[0, 0]) / scale, causal_tol)
    return classification, tag


# --- Kernels and spans ---


def joint_kernel(generators, tol=1e-7):
    """Orthonormal basis (columns) of the common kernel of all generators."""
    generators = [np.asarray(a, dtype=float) for a in generators]
    if len(generators) == 0:
        raise SpecError("joint_kernel needs at least one generator")
    stack = np.vstack(generators)
    m = stack.shape[1]
    if max_abs(stack) == 0:
        return np.eye(m)
    return linalg.null_space(stack, rcond=tol)


def orthonormal_span(matrices, tol=1e-7):
    """Frobenius-orthonormal basis of the span of matrices."""
    matrices = [np.asarray(a, dtype=float) for a in matrices]
    if len(matrices) == 0:
        return []
    shape = matrices[0].shape
    stack = np.array([a.ravel() for a in matrices])
    _, s, vt = linalg.svd(stack, full_matrices=False)
    if s[0] == 0:
        return []
    rank = int(np.sum(s > tol * s[0]))
    return [vt[k].reshape(shape) for k in range(rank)]


def exact_rank(matrices):
    """Rank of the span of matrices in exact rational arithmetic."""
    rows = [[sympy.Rational(str(x)) if not isinstance(x, Fraction) else sympy.Rational(x.numerator, x.denominator)
             for x in np.asarray(a, dtype=object).ravel()] for a in matrices]
    if len(rows) == 0:
        return 0
    return int(sympy.Matrix(rows).rank())


def to_exact(a):
    """Object array of Fractions."""
    a = np.asarray(a)
    result = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        if isinstance(x, Fraction):
            result[idx] = x
        elif isinstance(x, (int, np.integer)):
            result[idx] = Fraction(int(x))
        else:
            result[idx] = Fraction(float(x))
    return result


def pattern_residual(matrices, allowed_mask):
    """Largest entry outside the allowed pattern, relative to the largest entry, over all matrices."""
    allowed_mask = np.asarray(allowed_mask, dtype=bool)
    residual = 0.0
    for a in matrices:
        a = np.asarray(a, dtype=float)
        scale = max_abs(a)
        if scale == 0:
            continue
        residual = max(residual, max_abs(a[~allowed_mask]) / scale)
    return residual


def invariance_residual(generators, basis):
    """max_i |A_i V - V V^T A_i V| / |A_i| for an orthonormal basis V."""
    residual = 0.0
    for a in generators:
        a = np.asarray(a, dtype=float)
        norm = np.linalg.norm(a, 2)
        if norm == 0:
            continue
        av = a @ basis
        residual = max(residual, float(np.linalg.norm(av - basis @ (basis.T @ av), 2) / norm))
    return residual


# --- Invariant subspaces ---


def _cluster_eigenvalues(values, tol):
    clusters = []
    for value in sorted(values, key=lambda z: (z.real, z.imag)):
        for cluster in clusters:
            if abs(cluster[0] - value) <= tol:
                cluster[1].append(value)
                break
        else:
            clusters.append([value, [value]])
    return [(np.mean(members), len(members)) for _, members in clusters]


def _null_space_abs(a, atol):
    u, s, vt = linalg.svd(a)
    rank = int(np.sum(s > atol))
    return vt[rank:].T


def _kernel_chain(poly, power, tol, scale):
    chain, previous = [], 0
    current = np.eye(len(poly))
    for j in range(1, power + 1):
        current = current @ poly
        kernel = _null_space_abs(current, tol * scale ** j)
        if kernel.shape[1] > previous:
            chain.append(kernel)
            previous = kernel.shape[1]
    return chain


def _eigen_chains(a0, tol=1e-7, cluster_tol=1e-4):
    """Real generalized eigenspaces of a0 as kernel chains of (a0 - lambda)^j
    (or of the real quadratic factor for complex pairs)."""
    m = len(a0)
    scale = max(np.linalg.norm(a0, 2), 1e-300)
    chains = []
    for mu, mult in _cluster_eigenvalues(linalg.eigvals(a0), cluster_tol * scale):
        if abs(mu.imag) <= cluster_tol * scale:
            poly = a0 - mu.real * np.eye(m)
            poly_scale = scale
        elif mu.imag > 0:
            poly = a0 @ a0 - 2 * mu.real * a0 + abs(mu) ** 2 * np.eye(m)
            poly_scale = scale ** 2
        else:
            continue
        chains.append(_kernel_chain(poly, mult, tol, poly_scale))
    return chains


def _joint_kernel_chain(generators, tol):
    """J1 = joint kernel, J(k+1) = {v : A_i v in Jk for all i}."""
    m = generators[0].shape[0]
    chain = []
    current = joint_kernel(generators, tol)
    while 0 < current.shape[1] < m:
        chain.append(current)
        projector = np.eye(m) - current @ current.T
        nxt = linalg.null_space(np.vstack([projector @ a for a in generators]), rcond=tol)
        if nxt.shape[1] <= current.shape[1]:
            break
        current = nxt
    return chain


def invariant_subspaces(generators, k, form=None, seed=0, isotropic=False, max_candidates=512,
                        tolerances=None):
    """Search k-dimensional subspaces invariant under all generators.

    Candidates are sums of members of the kernel chains of the generalized
    eigenspaces of a random combination of the generators, together with
    the chain of iterated joint kernels. Candidates are filtered on the
    invariance residual and deduplicated by principal angles.

    :param k: Target dimension, 1 <= k <= 3
    :param isotropic: Keep only totally isotropic subspaces (needs form)
    :return: List of Subspace, each with its invariance residual and annihilator
    :raises SearchInconclusive: For the zero algebra, or when the candidate cap is hit
    """
    tolerances = Tolerances.wrap(tolerances)
    if not 1 <= k <= 3:
        raise DimensionError(f"Target dimension should be 1, 2 or 3, got {k}")
    generators = [np.asarray(a, dtype=float) for a in generators]
    if len(generators) == 0:
        raise SpecError("invariant_subspaces needs at least one generator")
    m = generators[0].shape[0]
    if all(max_abs(a) == 0 for a in generators):
        raise SearchInconclusive("every subspace invariant", partial=[])
    rng = np.random.default_rng(seed)
    coefficients = rng.normal(size=len(generators))
    a0 = sum(c * a / max(np.linalg.norm(a), 1e-300) for c, a in zip(coefficients, generators))
    if max_abs(a0) == 0:
        raise SearchInconclusive("generic element vanishes", partial=[])

    chains = _eigen_chains(a0)
    candidates = []
    truncated = False

    def combine(idx, dims_left, parts):
        nonlocal truncated
        if len(candidates) >= max_candidates:
            truncated = True
            return
        if dims_left == 0:
            candidates.append(np.hstack(parts))
            return
        if idx == len(chains):
            return
        combine(idx + 1, dims_left, parts)
        for member in chains[idx]:
            if member.shape[1] <= dims_left:
                combine(idx + 1, dims_left - member.shape[1], parts + [member])

    combine(0, k, [])
    for member in _joint_kernel_chain(generators, tolerances.joint_kernel):
        if member.shape[1] == k:
            candidates.append(member)

    found = []
    for basis in candidates:
        if np.linalg.matrix_rank(basis) < k:
            continue
        basis = linalg.orth(basis)
        residual = invariance_residual(generators, basis)
        if residual >= tolerances.invariance:
            continue
        if any(np.max(linalg.subspace_angles(basis, other.basis)) < 1e-6 for other in found):
            continue
        subspace = Subspace(basis, form)
        subspace.invariance_residual = residual
        if form is not None:
            subspace.annihilator = linalg.null_space(basis.T @ form.gram)
        if isotropic and (form is None or subspace.classification != Classification.TOTALLY_ISOTROPIC):
            continue
        found.append(subspace)
    logger.debug(f"Invariant subspace search (k={k}): {len(candidates)} candidates, {len(found)} invariant")
    if truncated:
        logger.warning(f"Invariant subspace search hit the cap of {max_candidates} candidates")
        raise SearchInconclusive(f"candidate cap of {max_candidates} reached", partial=found)
    return found


def trichotomy(generators, form, seed=0, tolerances=None):
    """Sort the low-dimensional invariant subspaces of a tractor holonomy into
    the three cases: an invariant line (conformally Einstein), a nondegenerate
    invariant subspace of dimension > 1 (decomposable), or a 2-dimensional
    totally isotropic invariant subspace."""
    result = {"einstein_lines": [], "nondegenerate": [], "totally_isotropic_planes": [], "notes": []}
    for k in (1, 2, 3):
        try:
            found = invariant_subspaces(generators, k, form, seed=seed, tolerances=tolerances)
        except SearchInconclusive as exc:
            result["notes"].append(f"k={k}: {exc}")
            found = exc.partial
        for subspace in found:
            if k == 1:
                result["einstein_lines"].append(subspace.to_json())
            elif subspace.classification == Classification.NONDEGENERATE:
                result["nondegenerate"].append(subspace.to_json())
            elif k == 2 and subspace.classification == Classification.TOTALLY_ISOTROPIC:
                result["totally_isotropic_planes"].append(subspace.to_json())
    cases = []
    if result["einstein_lines"]:
        cases.append("conformally_einstein")
    if result["nondegenerate"]:
        cases.append("decomposable")
    if result["totally_isotropic_planes"]:
        cases.append("recurrent_isotropic")
    result["cases"] = cases
    return result


# --- Exterior forms ---


def _as_common(a, alpha):
    if a.dtype == object or alpha.dtype == object:
        return to_exact(a), to_exact(alpha)
    return a.astype(float), alpha.astype(float)


def form_action(a, alpha):
    """(A . alpha)(v1..vk) = -sum_j alpha(v1, .., A vj, .., vk)."""
    a = np.asarray(a)
    alpha = np.asarray(alpha)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {a.shape}")
    if alpha.ndim == 0:
        return np.zeros_like(alpha)
    if any(s != a.shape[0] for s in alpha.shape):
        raise DimensionError(f"Form of shape {alpha.shape} does not match a {a.shape[0]}-dim matrix")
    a, alpha = _as_common(a, alpha)
    result = None
    for j in range(alpha.ndim):
        term = np.moveaxis(np.tensordot(alpha, a, axes=([j], [0])), -1, j)
        result = term if result is None else result + term
    return -result


def wedge(covectors, exact=False):
    """alpha = c1 ^ ... ^ ck with alpha(v1..vk) = det[ci(vj)]."""
    covectors = [np.asarray(c) for c in covectors]
    if exact:
        covectors = [to_exact(c) for c in covectors]
    k = len(covectors)
    m = covectors[0].shape[0]
    alpha = np.zeros((m,) * k, dtype=object if exact else float)
    if exact:
        alpha[...] = Fraction(0)
    for perm in itertools.permutations(range(k)):
        sign = _permutation_sign(perm)
        term = covectors[perm[0]]
        for idx in perm[1:]:
            term = np.multiply.outer(term, covectors[idx])
        alpha = alpha + sign * term
    return alpha


def _permutation_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def evaluate_form(alpha, vectors):
    result = alpha
    for v in vectors:
        result = np.tensordot(v, result, axes=([0], [0]))
    return result


def decomposable_action_value(a, covectors, vectors, exact=True):
    """(A . (c1 ^ .. ^ ck))(v1..vk) through determinants, without building the form."""
    def det(rows):
        if exact:
            m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])
            value = m.det()
            return Fraction(int(value.p), int(value.q))
        return float(np.linalg.det(np.array(rows, dtype=float)))

    convert = to_exact if exact else (lambda x: np.asarray(x, dtype=float))
    a = convert(a)
    covectors = [convert(c) for c in covectors]
    vectors = [convert(v) for v in vectors]
    total = Fraction(0) if exact else 0.0
    for j in range(len(vectors)):
        replaced = list(vectors)
        replaced[j] = a.dot(vectors[j])
        total += det([[c.dot(v) for v in replaced] for c in covectors])
    return -total


def stabilizer_check(generators, alpha, tol=1e-8):
    """max_A |A . alpha| with verdict fixed / not fixed at tol * |alpha|."""
    alpha = np.asarray(alpha)
    exact = alpha.dtype == object
    norm_alpha = float(np.sqrt(sum(float(x) ** 2 for x in alpha.ravel()))) if exact else float(np.linalg.norm(alpha))
    residual, worst = 0.0, None
    for idx, a in enumerate(generators):
        action = form_action(a, alpha)
        norm = float(np.sqrt(sum(float(x) ** 2 for x in action.ravel()))) if exact else float(np.linalg.norm(action))
        if norm > residual:
            residual, worst = norm, idx
    threshold = tol * norm_alpha
    fixed = residual <= threshold
    return {"residual": residual, "threshold": threshold, "verdict": "fixed" if fixed else "not fixed",
            "fixed": fixed, "worst_generator": worst}


# --- Berger algebras ---


def berger_check(generators, e_dim=None, tol=1e-7, max_unknowns=20000):
    """Space K(g) of algebraic curvature maps with values in g and the span of their values.

    Unknowns are the coefficients c_ab^k of R(e_a, e_b) = sum_k c_ab^k B_k for
    a < b in a Frobenius-orthonormal basis B_k of g; the equations are the
    first Bianchi identity on all triples a < b < c.
    """
    generators = [np.asarray(a, dtype=float) for a in generators]
    if e_dim is None:
        if len(generators) == 0:
            raise SpecError("berger_check needs generators or e_dim")
        e_dim = generators[0].shape[0]
    basis = orthonormal_span(generators, tol)
    g_dim = len(basis)
    pairs = [(a, b) for a in range(e_dim) for b in range(a + 1, e_dim)]
    unknowns = len(pairs) * g_dim
    if unknowns > max_unknowns:
        raise TooLarge(f"Berger system has {unknowns} unknowns (cap {max_unknowns})")
    result = {"dim_g": g_dim, "e_dim": e_dim, "unknowns": unknowns}
    if g_dim == 0:
        result.update({"dim_k": 0, "dim_g_underline": 0, "berger": True, "projection_residual": 0.0})
        return result
    pair_index = {pair: idx for idx, pair in enumerate(pairs)}

    def column(a, b, k):
        if a < b:
            return pair_index[(a, b)] * g_dim + k, 1.0
        return pair_index[(b, a)] * g_dim + k, -1.0

    rows = []
    for a, b, c in itertools.combinations(range(e_dim), 3):
        for i in range(e_dim):
            row = np.zeros(unknowns)
            for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                for k in range(g_dim):
                    col, sign = column(x, y, k)
                    row[col] += sign * basis[k][i, z]
            rows.append(row)
    if rows:
        kernel = linalg.null_space(np.array(rows), rcond=1e-10)
    else:
        kernel = np.eye(unknowns)
    values = []
    for s in range(kernel.shape[1]):
        coefficients = kernel[:, s].reshape(len(pairs), g_dim)
        for p in range(len(pairs)):
            values.append(sum(coefficients[p, k] * basis[k] for k in range(g_dim)))
    underline = orthonormal_span(values, tol)
    projection_residual = 0.0
    for u in underline:
        projection = sum(np.sum(u * b) * b for b in basis)
        projection_residual = max(projection_residual, max_abs(u - projection))
    result.update({"dim_k": int(kernel.shape[1]), "dim_g_underline": len(underline),
                   "berger": len(underline) == g_dim, "projection_residual": projection_residual})
    logger.info(f"Berger check: dim g = {g_dim}, dim K(g) = {kernel.shape[1]}, dim g_ = {len(underline)}")
    return result


# --- Model algebras ---


def so_algebra(form, exact=False):
    """Basis G^-1 (e_a e_b^T - e_b e_a^T), a < b, of so(form).

    :param exact: Object arrays of Fractions, the Gram matrix is read as rationals
    """
    gram = form.gram if isinstance(form, IndefiniteForm) else np.asarray(form, dtype=float)
    m = gram.shape[0]
    if exact:
        inverse = sympy.Matrix(m, m, [sympy.Rational(str(x)) for x in gram.ravel()]).inv()
        inverse = to_exact([[Fraction(int(x.p), int(x.q)) for x in inverse.row(i)] for i in range(m)])
    else:
        inverse = np.linalg.inv(gram)
    result = []
    for a in range(m):
        for b in range(a + 1, m):
            e = np.zeros((m, m), dtype=int)
            e[a, b], e[b, a] = 1, -1
            result.append(inverse @ to_exact(e) if exact else inverse @ e)
    return result


def _iso_l_element(n, x=None, a_block=None, u=None, v=None, c=0):
    m = n + 4
    j = np.array([[0, 1], [1, 0]])
    x = np.zeros((2, 2), dtype=int) if x is None else np.asarray(x)
    a_block = np.zeros((n, n), dtype=int) if a_block is None else np.asarray(a_block)
    u = np.zeros(n, dtype=int) if u is None else np.asarray(u)
    v = np.zeros(n, dtype=int) if v is None else np.asarray(v)
    result = np.zeros((m, m), dtype=int)
    result[0:2, 0:2] = x
    result[0, 2:n + 2] = u
    result[1, 2:n + 2] = v
    result[0, n + 2] = c
    result[1, n + 3] = -c
    result[2:n + 2, 2:n + 2] = a_block
    result[2:n + 2, n + 2] = -v
    result[2:n + 2, n + 3] = -u
    result[n + 2:, n + 2:] = -j @ x.T @ j
    return result


def iso_l_algebra(n, exact=False):
    """Basis of the stabilizer iso(L) of L = span(x1, x2) in so(2, n+2) for the
    form of :meth:`IndefiniteForm.anti_diagonal`."""
    basis = []
    for a in range(2):
        for b in range(2):
            x = np.zeros((2, 2), dtype=int)
            x[a, b] = 1
            basis.append(_iso_l_element(n, x=x))
    for a in range(n):
        for b in range(a + 1, n):
            block = np.zeros((n, n), dtype=int)
            block[a, b], block[b, a] = 1, -1
            basis.append(_iso_l_element(n, a_block=block))
    eye = np.eye(n, dtype=int)
    for a in range(n):
        basis.append(_iso_l_element(n, u=eye[a]))
        basis.append(_iso_l_element(n, v=eye[a]))
    basis.append(_iso_l_element(n, c=1))
    if exact:
        return [to_exact(b) for b in basis]
    return [b.astype(float) for b in basis]


def iso_l_counterexample(n, a1=1, a2=1, b=None, exact=True):
    """Evaluate (diag(E2, 0, -E2) . alpha)(z1, z2, y1..yn) for
    alpha = a1 <x1,.> ^ a2 <x2,.> ^ b1 <y1,.> ^ .. ^ bn <yn,.>."""
    form = IndefiniteForm.anti_diagonal(n)
    m = n + 4
    eye = np.eye(m, dtype=int)
    gram = form.gram.astype(int)
    b = [1] * n if b is None else list(b)
    coefficients = [a1, a2] + b
    covectors = [coefficients[0] * (gram @ eye[0]), coefficients[1] * (gram @ eye[1])]
    covectors += [coefficients[2 + i] * (gram @ eye[2 + i]) for i in range(n)]
    element = _iso_l_element(n, x=np.eye(2, dtype=int))
    vectors = [eye[n + 2], eye[n + 3]] + [eye[2 + i] for i in range(n)]
    value = decomposable_action_value(element, covectors, vectors, exact=exact)
    return {"value": value, "element": element, "covectors": covectors, "vectors": vectors,
            "in_algebra": form.is_compatible(element)}


def plane_wave_model_algebra(n, exact=False):
    """The (2n+1)-dimensional algebra with rows (0,0,u^T,c,0), (0,0,v^T,0,-c),
    (0,0,0,-v,-u) in a basis (T1, T2, E1..En, Z2, Z1)."""
    eye = np.eye(n, dtype=int)
    basis = [_iso_l_element(n, u=eye[a]) for a in range(n)]
    basis += [_iso_l_element(n, v=eye[a]) for a in range(n)]
    basis.append(_iso_l_element(n, c=1))
    if exact:
        return [to_exact(b) for b in basis]
    return [b.astype(float) for b in basis]


def plane_wave_pattern_mask(n):
    m = n + 4
    mask = np.zeros((m, m), dtype=bool)
    mask[0, 2:n + 3] = True
    mask[1, 2:n + 2] = True
    mask[1, n + 3] = True
    mask[2:n + 2, n + 2:] = True
    return mask


def ambient_model_algebra(hol_generators, k=None, tol=1e-7):
    """Hol x| R^(n-k) in the frame (X, E1..En, Z) with Gram [[0,0,1],[0,I,0],[1,0,0]].

    :param hol_generators: n x n matrices generating the base holonomy
    :param k: Number of parallel vector fields; by default the dimension of
        the joint kernel of the generators
    """
    hol_generators = [np.asarray(a, dtype=float) for a in hol_generators]
    if len(hol_generators) == 0:
        raise SpecError("ambient_model_algebra needs the base holonomy generators (use a zero matrix for flat)")
    n = hol_generators[0].shape[0]
    kernel = joint_kernel(hol_generators, tol)
    if k is not None and k != kernel.shape[1]:
        raise SpecError(f"Given k = {k} differs from the joint kernel dimension {kernel.shape[1]}")
    translations = linalg.null_space(kernel.T) if kernel.shape[1] > 0 else np.eye(n)
    result = []
    for a in orthonormal_span(hol_generators, tol):
        m = np.zeros((n + 2, n + 2))
        m[1:n + 1, 1:n + 1] = a
        result.append(m)
    for w in translations.T:
        m = np.zeros((n + 2, n + 2))
        m[0, 1:n + 1] = w
        m[1:n + 1, n + 1] = -w
        result.append(m)
    return result


def witt_basis(isotropic_vectors, gram):
    """Complete two isotropic, orthogonal vectors T1, T2 to a basis
    (T1, T2, E1..En, Z2, Z1) with <Ta, Zb> = delta_ab, Z isotropic and
    orthogonal to each other, and E orthonormal (up to sign) and orthogonal
    to T and Z.

    :return: (m, m) matrix with the basis vectors as columns
    """
    gram = np.asarray(gram, dtype=float)
    t = np.column_stack([np.asarray(v, dtype=float) for v in isotropic_vectors])
    if t.shape[1] != 2:
        raise DimensionError("witt_basis expects two isotropic vectors")
    if max_abs(t.T @ gram @ t) > 1e-8 * (max_abs(t) ** 2 * max_abs(gram) + 1e-30):
        raise SpecError("Vectors do not span a totally isotropic plane")
    z = np.linalg.pinv(t.T @ gram) @ np.eye(2)
    correction = z.T @ gram @ z
    z = z - 0.5 * t @ correction
    tz = np.column_stack([t, z])
    complement = linalg.null_space(tz.T @ gram)
    restricted = complement.T @ gram @ complement
    eig, vecs = np.linalg.eigh((restricted + restricted.T) / 2)
    e = complement @ vecs @ np.diag(1 / np.sqrt(np.abs(eig)))
    return np.column_stack([t[:, 0], t[:, 1], e, z[:, 1], z[:, 0]])
