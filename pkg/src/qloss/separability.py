"""Separability decisions for the residual mixed states left after qubit loss.

Backbone: the residual state of a pure state after losing one qubit has
rank at most two, and a rank-2 state is separable iff its range contains
product vectors mixing back to the state.  Product vectors of the form
v1 + t v2 in the range are located through the simultaneous vanishing of
all 2x2 minors of every single-qubit reshaping; each minor is a quadratic
in t, so the search reduces to root finding plus residual filtering.
Rank-2 separability is therefore decided exactly, including the degenerate
geometries where a whole continuum of product vectors survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import eig_hermitian, trace_norm
from .states import (
    RANK_TOL,
    DensityOperator,
    PureState,
    kron_factors,
    partial_trace,
    partial_transpose,
)

__all__ = [
    "negativity",
    "max_bipartition_negativity",
    "is_pure_product",
    "ProductDecomposition",
    "rank2_product_decomposition",
    "is_separable_residual",
]

NEGATIVITY_CLAMP = 1e-12
WITNESS_THRESHOLD = 1e-10
PRODUCT_EIG_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8
MINOR_RESIDUAL_TOL = 1e-8
VANISHING_MINOR_TOL = 1e-11
NOISE_MINOR_FRACTION = 1e-12
PARALLEL_TOL = 1e-8
WEIGHT_MARGIN = 1e-9
DEDUPE_TOL = 1e-6


def negativity(rho, subset):
    """(|| rho^(T_subset) ||_1 - 1) / 2, clamped to 0 within 1e-12."""
    value = 0.5 * (trace_norm(partial_transpose(rho, subset)) - 1.0)
    if abs(value) <= NEGATIVITY_CLAMP:
        return 0.0
    return max(value, 0.0)


def max_bipartition_negativity(rho):
    """Largest negativity over all bipartitions of rho's qubits."""
    labels = rho.qubit_labels
    if len(labels) < 2:
        raise ValueError("need at least two qubits to form a bipartition")
    # subsets containing the first label enumerate each bipartition once
    first, rest = labels[0], labels[1:]
    best = 0.0
    for size in range(len(rest)):
        for combo in combinations(rest, size):
            best = max(best, negativity(rho, (first,) + combo))
    return best


def single_cut_negativities(rho):
    """Negativity of every single-qubit vs rest cut, in label order."""
    return [negativity(rho, (label,)) for label in rho.qubit_labels]


def _product_factors(vector, num_qubits, tol=PRODUCT_EIG_TOL):
    """Factor a unit vector into single-qubit states, or None if entangled.

    Spectral test: every single-qubit reduced state must have top eigenvalue
    >= 1 - tol.  On success the factors reproduce the vector up to a global
    phase, which is absorbed into the first factor.
    """
    if num_qubits == 1:
        return [np.array(vector, dtype=complex)]
    tensor = vector.reshape((2,) * num_qubits)
    factors = []
    for axis in range(num_qubits):
        rect = np.moveaxis(tensor, axis, 0).reshape(2, -1)
        values, vectors = np.linalg.eigh(rect @ rect.conj().T)
        if values[-1] < 1.0 - tol:
            return None
        factors.append(vectors[:, -1])
    overlap = np.vdot(kron_factors(factors), vector)
    if abs(overlap) > 0.0:
        factors[0] = factors[0] * (overlap / abs(overlap))
    return factors


def is_pure_product(state, tol=PRODUCT_EIG_TOL):
    """Whether a pure state is a full product; on True also its factors."""
    factors = _product_factors(state.vector, state.num_qubits, tol)
    if factors is None:
        return False, None
    return True, factors


@dataclass(frozen=True)
class ProductDecomposition:
    """rho = weight |a><a| + (1 - weight) |b><b| with a, b full products.

    ``factors_a``/``factors_b`` hold one normalized single-qubit state per
    retained qubit, in label order.  ``continuum`` marks the degenerate
    geometries where infinitely many product vectors lie in the range; the
    stored pair is then one representative decomposition.
    """

    weight: float
    factors_a: list
    factors_b: list
    continuum: bool

    def product_a(self):
        return kron_factors(self.factors_a)

    def product_b(self):
        return kron_factors(self.factors_b)

    def reconstruct(self):
        a = self.product_a()
        b = self.product_b()
        return self.weight * np.outer(a, a.conj()) + (1.0 - self.weight) * np.outer(b, b.conj())


def _minor_coefficients(v1, v2, num_qubits, axis):
    """Quadratic coefficients of all 2x2 minors of one qubit's reshaping.

    With M(t) = M1 + t M2 the 2 x K reshaping of v1 + t v2 (qubit ``axis``
    first), the minor over column pair (i, j) is c2 t^2 + c1 t + c0.
    Returns (c2, c1, c0, M1, M2) with the coefficient arrays flat over all
    column pairs i < j.
    """
    m1 = np.moveaxis(v1.reshape((2,) * num_qubits), axis, 0).reshape(2, -1)
    m2 = np.moveaxis(v2.reshape((2,) * num_qubits), axis, 0).reshape(2, -1)
    i, j = np.triu_indices(m1.shape[1], k=1)

    def det(a, b):
        return a[0, i] * b[1, j] - a[1, i] * b[0, j]

    c2 = det(m2, m2)
    c1 = det(m1, m2) + det(m2, m1)
    c0 = det(m1, m1)
    return c2, c1, c0, m1, m2


def rank2_product_decomposition(rho):
    """Decompose a rank-2 state into two product projectors, or None.

    Returns a ProductDecomposition when rho is separable (with
    ``continuum=True`` when the range holds infinitely many product
    vectors) and None when rho is entangled.  Raises when the numerical
    rank is not 2 (third eigenvalue above 1e-10).
    """
    values, vectors = eig_hermitian(rho.matrix)
    rank_ok = values[-2] > RANK_TOL and (values.size < 3 or values[-3] <= RANK_TOL)
    if not rank_ok:
        raise ValueError(f"state does not have numerical rank 2 (eigenvalues {values})")
    num_qubits = rho.num_qubits
    v1 = vectors[:, -1]
    v2 = vectors[:, -2]
    if num_qubits == 1:
        # every single-qubit state is separable; spectral pair as representative
        return ProductDecomposition(float(values[-1]), [v1], [v2], True)

    candidates = []
    coefficient_data = []
    for axis in range(num_qubits):
        c2, c1, c0, m1, m2 = _minor_coefficients(v1, v2, num_qubits, axis)
        scale = np.sqrt(np.abs(c2) ** 2 + np.abs(c1) ** 2 + np.abs(c0) ** 2)
        peak = float(np.max(scale))
        if peak <= VANISHING_MINOR_TOL:
            return _decompose_degenerate_axis(rho, axis, m1, m2)
        # minors whose coefficients are rounding noise next to the axis peak
        # carry no root information (symmetric states zero them structurally)
        informative = scale > NOISE_MINOR_FRACTION * peak
        coefficient_data.append((c2, c1, c0, scale, informative))
        # roots of the best-conditioned quadratics seed the candidate set
        for index in np.argsort(scale)[::-1][:5]:
            triple = [c2[index], c1[index], c0[index]]
            candidates.extend(complex(r) for r in np.roots(triple))

    accepted = []
    for t in candidates:
        if any(abs(t - s) <= DEDUPE_TOL * max(1.0, abs(s)) for s in accepted):
            continue
        bound = max(1.0, abs(t)) ** 2
        ok = True
        for c2, c1, c0, scale, informative in coefficient_data:
            residual = np.abs(c2 * t * t + c1 * t + c0)
            if np.any(residual[informative] > MINOR_RESIDUAL_TOL * scale[informative] * bound):
                ok = False
                break
        if ok:
            accepted.append(t)

    product_vectors = []
    for t in accepted:
        w = v1 + t * v2
        w = w / np.linalg.norm(w)
        factors = _product_factors(w, num_qubits)
        if factors is not None:
            product_vectors.append((w, factors))
    # t -> infinity is v2 itself
    factors_v2 = _product_factors(v2, num_qubits)
    if factors_v2 is not None:
        product_vectors.append((v2, factors_v2))

    for (wa, fa), (wb, fb) in combinations(product_vectors, 2):
        pa = np.outer(wa, wa.conj())
        pb = np.outer(wb, wb.conj())
        dp = pa - pb
        denominator = float(np.vdot(dp, dp).real)
        if denominator <= 1e-24:
            continue
        weight = float(np.vdot(dp, rho.matrix - pb).real) / denominator
        if not WEIGHT_MARGIN < weight < 1.0 - WEIGHT_MARGIN:
            continue
        residual = float(np.linalg.norm(rho.matrix - weight * pa - (1.0 - weight) * pb))
        if residual <= RECONSTRUCTION_TOL:
            return ProductDecomposition(weight, fa, fb, False)
    return None


def _decompose_degenerate_axis(rho, axis, m1, m2):
    """Handle a qubit whose minors vanish identically in t.

    Every range vector is then rank one across this qubit | rest: either
    the qubit factor is common to the whole range (divide it out, recurse)
    or the rest factor is common (a continuum of product vectors when that
    rest factor is itself a product, no product vectors at all otherwise).
    """
    u1 = np.linalg.svd(m1)[0]
    u2 = np.linalg.svd(m2)[0]
    label = rho.qubit_labels[axis]
    if abs(np.vdot(u1[:, 0], u2[:, 0])) >= 1.0 - PARALLEL_TOL:
        common = u1[:, 0]
        inner = rank2_product_decomposition(partial_trace(rho, (label,)))
        if inner is None:
            return None
        factors_a = list(inner.factors_a)
        factors_b = list(inner.factors_b)
        factors_a.insert(axis, common)
        factors_b.insert(axis, common)
        return ProductDecomposition(inner.weight, factors_a, factors_b, inner.continuum)
    # common rest factor: rows of m1 are multiples of one rest vector, so the
    # top right-singular row IS that vector (m1[a, b] = qubit[a] * rest[b])
    rest = np.linalg.svd(m1)[2][0]
    rest_factors = _product_factors(rest / np.linalg.norm(rest), rho.num_qubits - 1)
    if rest_factors is None:
        return None  # (qubit) x (entangled rest): no product vectors in the range
    others = tuple(l for l in rho.qubit_labels if l != label)
    marginal = partial_trace(rho, others)
    q_values, q_vectors = eig_hermitian(marginal.matrix)
    factors_a = list(rest_factors)
    factors_b = list(rest_factors)
    factors_a.insert(axis, q_vectors[:, -1])
    factors_b.insert(axis, q_vectors[:, -2])
    return ProductDecomposition(float(q_values[-1]), factors_a, factors_b, True)


def is_separable_residual(rho, symmetric_hint=False):
    """Three-valued separability decision: separable / entangled / undecided.

    Exact for rank <= 2 states (any size), for 2-qubit states (PPT), and,
    with ``symmetric_hint``, for symmetric 3-qubit states (negativity-zero
    criterion).  Beyond those regimes a positive single-vs-rest negativity
    certifies entanglement and everything else is reported as undecided.
    """
    values = rho.eigenvalues()
    rank = int(np.sum(values > RANK_TOL))
    num_qubits = rho.num_qubits
    if num_qubits == 1:
        return "separable"
    if rank <= 1:
        vector = eig_hermitian(rho.matrix)[1][:, -1]
        product = _product_factors(vector, num_qubits) is not None
        return "separable" if product else "entangled"
    if rank == 2:
        return "separable" if rank2_product_decomposition(rho) is not None else "entangled"
    if num_qubits == 2:
        minimum = float(np.linalg.eigvalsh(partial_transpose(rho, rho.qubit_labels[:1]))[0])
        return "entangled" if minimum < -WITNESS_THRESHOLD else "separable"
    if symmetric_hint and num_qubits == 3:
        worst = max(single_cut_negativities(rho))
        return "entangled" if worst > WITNESS_THRESHOLD else "separable"
    if any(value > WITNESS_THRESHOLD for value in single_cut_negativities(rho)):
        return "entangled"
    return "undecided"
