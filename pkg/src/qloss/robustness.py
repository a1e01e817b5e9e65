"""Fragility of entanglement against single-qubit loss, and its structure.

A pure entangled state is fragile with respect to qubit k when its residual
state after tracing k out is separable, robust when the residual stays
entangled.  Fragile states carry a rigid structure: they are superpositions
of exactly two full product states whose factors are orthogonal on every
fragile qubit.  This module extracts that two-term form, builds the
invertible local operation carrying full-set-fragile states onto the GHZ
state, and specializes both to permutation-symmetric states, where
fragility is equivalent to the Majorana points forming a regular polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import eig_hermitian
from .separability import (
    _product_factors,
    is_pure_product,
    is_separable_residual,
    rank2_product_decomposition,
)
from .states import (
    RANK_TOL,
    PureState,
    apply_local_matrices,
    kron_factors,
    partial_trace,
    schmidt_decompose,
    symmetric_to_pure,
)

__all__ = [
    "CanonicalForm",
    "FragilityReport",
    "LocalOperation",
    "SymmetricFragileForm",
    "fragile_wrt_qubit",
    "analyze_fragility",
    "ghz_class_operation",
    "symmetric_fragile_form",
    "regular_polygon_test",
]

MIN_QUBITS = 3
ORTHOGONALITY_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-8
INVERTIBILITY_TOL = 1e-12
PLANE_TOL = 1e-7
RADIUS_TOL = 1e-7
ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class CanonicalForm:
    """Two-product-term form sqrt(p) (x)|e_i> + sqrt(1-p) (x)|e'_i>.

    ``orthogonal_set`` lists the 1-based qubits where <e_i|e'_i> vanishes
    within 1e-9; those are exactly the qubits whose loss the reconstructed
    state survives as a separable residual.
    """

    weight: float
    e_states: list
    e_prime_states: list
    orthogonal_set: tuple

    @property
    def num_qubits(self):
        return len(self.e_states)

    def overlaps(self):
        """Per-qubit overlaps <e_i|e'_i>."""
        return np.array([np.vdot(e, ep) for e, ep in zip(self.e_states, self.e_prime_states)])

    def reconstruct(self):
        p = self.weight
        vector = math.sqrt(p) * kron_factors(self.e_states) \
            + math.sqrt(1.0 - p) * kron_factors(self.e_prime_states)
        return PureState.normalized(vector)


@dataclass(frozen=True)
class FragilityReport:
    """Per-qubit loss verdicts plus the extracted structure, if any."""

    num_qubits: int
    fragile: dict
    fragile_set: tuple
    canonical_form: CanonicalForm | None
    ghz_class: bool


@dataclass(frozen=True)
class LocalOperation:
    """One invertible 2x2 matrix per qubit, applied as a tensor product."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(np.asarray(f, dtype=complex) for f in self.factors)
        for index, factor in enumerate(factors):
            if factor.shape != (2, 2):
                raise ValueError(f"factor {index + 1} has shape {factor.shape}, expected (2, 2)")
            if abs(np.linalg.det(factor)) <= INVERTIBILITY_TOL:
                raise ValueError(f"factor {index + 1} is numerically singular")
        object.__setattr__(self, "factors", factors)

    @property
    def num_qubits(self):
        return len(self.factors)

    def apply(self, state):
        """Image vector of ``state`` (not normalized in general)."""
        return apply_local_matrices(state, self.factors)

    def apply_normalized(self, state):
        return PureState.normalized(self.apply(state))


class SymmetricFragileForm(NamedTuple):
    """a |e..e> + b |e_perp..e_perp| with a, b real positive, a^2 + b^2 = 1."""

    a: float
    b: float
    state: np.ndarray
    orthogonal_state: np.ndarray


def _require_entangled(state):
    if state.num_qubits < MIN_QUBITS:
        raise ValueError(f"fragility analysis requires N >= 3, got N = {state.num_qubits}")
    product, _ = is_pure_product(state)
    if product:
        raise ValueError("fragility undefined for separable states")


def fragile_wrt_qubit(state, qubit):
    """Whether losing ``qubit`` leaves a separable residual.

    Exact: the residual of a pure state over a single-qubit cut has rank at
    most two, where separability is decidable.
    """
    _require_entangled(state)
    if not 1 <= qubit <= state.num_qubits:
        raise ValueError(f"qubit {qubit} outside 1..{state.num_qubits}")
    return is_separable_residual(partial_trace(state, (qubit,))) == "separable"


def analyze_fragility(state):
    """Classify every qubit as fragile/robust and extract the two-term form.

    When the fragile set is nonempty the state is (up to global phase)
    sqrt(p) (x)|e_i> + sqrt(1-p) (x)|e'_i> with orthogonal factor pairs on
    (at least) every fragile qubit; the form is recovered from the product
    decomposition of one fragile residual plus the Schmidt vectors of the
    matching cut.  ``ghz_class`` is set when every qubit is fragile.
    """
    _require_entangled(state)
    num_qubits = state.num_qubits
    fragile = {}
    decompositions = {}
    for label in range(1, num_qubits + 1):
        residual = partial_trace(state, (label,))
        values = residual.eigenvalues()
        rank = int(np.sum(values > RANK_TOL))
        if rank <= 1:
            # the state factorizes across this cut; the (entangled) remainder
            # is the residual, so a product residual cannot occur here
            vector = eig_hermitian(residual.matrix)[1][:, -1]
            fragile[label] = _product_factors(vector, residual.num_qubits) is not None
        elif rank == 2:
            decomposition = rank2_product_decomposition(residual)
            decompositions[label] = decomposition
            fragile[label] = decomposition is not None
        else:
            fragile[label] = False  # rank >= 3 residuals are never separable here
    fragile_set = tuple(label for label in range(1, num_qubits + 1) if fragile[label])
    form = None
    if fragile_set:
        anchor = fragile_set[0]
        form = _extract_canonical_form(state, anchor, decompositions[anchor])
    return FragilityReport(
        num_qubits=num_qubits,
        fragile=fragile,
        fragile_set=fragile_set,
        canonical_form=form,
        ghz_class=len(fragile_set) == num_qubits,
    )


def _extract_canonical_form(state, anchor, decomposition):
    """Recombine a residual product decomposition with the anchor's Schmidt data.

    The Schmidt rows of the cut anchor | rest span the same rank-2 row space
    as the weighted products, so the 2x2 change of basis between them is the
    unitary that dresses the Schmidt vectors of the anchor qubit into the
    two factors |e_anchor>, |e'_anchor>.  Solving against the product pair
    (rather than picking eigenvectors) keeps the construction well defined
    when the Schmidt spectrum is degenerate.
    """
    p = decomposition.weight
    product_a = decomposition.product_a()
    product_b = decomposition.product_b()
    schmidt = schmidt_decompose(state, (anchor,))
    rows_schmidt = np.vstack([
        schmidt.coefficients[0] * schmidt.rest_vectors[0],
        schmidt.coefficients[1] * schmidt.rest_vectors[1],
    ])
    rows_products = np.vstack([
        math.sqrt(p) * product_a,
        math.sqrt(1.0 - p) * product_b,
    ])
    gram = rows_products @ rows_products.conj().T
    mixing = rows_schmidt @ rows_products.conj().T @ np.linalg.inv(gram)
    u_polar, _, vh_polar = np.linalg.svd(mixing)
    mixing = u_polar @ vh_polar
    a1, a2 = schmidt.cut_vectors[0], schmidt.cut_vectors[1]
    e_anchor = mixing[0, 0] * a1 + mixing[1, 0] * a2
    e_prime_anchor = mixing[0, 1] * a1 + mixing[1, 1] * a2
    e_states = list(decomposition.factors_a)
    e_prime_states = list(decomposition.factors_b)
    e_states.insert(anchor - 1, e_anchor)
    e_prime_states.insert(anchor - 1, e_prime_anchor)
    overlaps = [abs(np.vdot(e, ep)) for e, ep in zip(e_states, e_prime_states)]
    orthogonal_set = tuple(
        label for label, overlap in enumerate(overlaps, start=1) if overlap <= ORTHOGONALITY_TOL
    )
    form = CanonicalForm(p, e_states, e_prime_states, orthogonal_set)
    rebuilt = form.reconstruct().vector
    overlap = np.vdot(rebuilt, state.vector)
    if abs(overlap) == 0.0:
        raise ArithmeticError("canonical reconstruction is orthogonal to the input")
    residual = float(np.linalg.norm(state.vector - (overlap / abs(overlap)) * rebuilt))
    if residual > RECONSTRUCTION_TOL:
        raise ArithmeticError(f"canonical reconstruction failed (residual {residual:.3e})")
    return form


def ghz_class_operation(state, report=None):
    """Invertible local operation mapping a fully fragile state onto GHZ_N.

    Returns None when the state is not fragile with respect to every qubit
    (then no such two-term orthogonal form exists).  When returned, applying
    the operation to ``state`` yields the GHZ state up to global phase.
    """
    if report is None:
        report = analyze_fragility(state)
    if not report.ghz_class or report.canonical_form is None:
        return None
    form = report.canonical_form
    a = math.sqrt(form.weight)
    b = math.sqrt(1.0 - form.weight)
    scale = np.diag([
        (math.sqrt(2.0) * a) ** (-1.0 / report.num_qubits),
        (math.sqrt(2.0) * b) ** (-1.0 / report.num_qubits),
    ])
    factors = []
    for e, e_prime in zip(form.e_states, form.e_prime_states):
        rotate = np.vstack([e.conj(), e_prime.conj()])  # maps e -> |0>, e' -> |1>
        factors.append(scale @ rotate)
    return LocalOperation(tuple(factors))


def symmetric_fragile_form(symmetric):
    """Collapse a fully fragile symmetric state onto a |e..e> + b |e_perp..e_perp>.

    Returns None when the expanded state is not fragile with respect to
    every qubit.  All factor phases are absorbed so that a and b come out
    real positive and the pair reconstructs the state exactly (no leftover
    global phase).
    """
    state = symmetric_to_pure(symmetric)
    report = analyze_fragility(state)
    if not report.ghz_class or report.canonical_form is None:
        return None
    form = report.canonical_form
    num_qubits = report.num_qubits
    # per-qubit factors of a symmetric two-term form agree up to phase
    e = form.e_states[0]
    e_prime = form.e_prime_states[0]
    phase_e = complex(np.prod([np.vdot(e, f) for f in form.e_states]))
    phase_e_prime = complex(np.prod([np.vdot(e_prime, f) for f in form.e_prime_states]))
    rebuilt = math.sqrt(form.weight) * phase_e * kron_factors([e] * num_qubits) \
        + math.sqrt(1.0 - form.weight) * phase_e_prime * kron_factors([e_prime] * num_qubits)
    overlap = np.vdot(rebuilt, state.vector)
    if abs(overlap) == 0.0:
        raise ArithmeticError("symmetric form reconstruction is orthogonal to the input")
    global_phase = overlap / abs(overlap)
    a_complex = global_phase * math.sqrt(form.weight) * phase_e
    b_complex = global_phase * math.sqrt(1.0 - form.weight) * phase_e_prime
    e_new = e * np.exp(1j * np.angle(a_complex) / num_qubits)
    e_prime_new = e_prime * np.exp(1j * np.angle(b_complex) / num_qubits)
    a = abs(a_complex)
    b = abs(b_complex)
    final = a * kron_factors([e_new] * num_qubits) + b * kron_factors([e_prime_new] * num_qubits)
    residual = float(np.linalg.norm(state.vector - final))
    if residual > RECONSTRUCTION_TOL:
        raise ArithmeticError(f"symmetric form reconstruction failed (residual {residual:.3e})")
    return SymmetricFragileForm(a, b, e_new, e_prime_new)


def regular_polygon_test(points):
    """Whether N Majorana points sit at the vertices of a regular N-gon.

    Requires all N points distinct (multiplicity one each); fits a plane by
    least squares, then checks coplanarity, equal radii about the in-plane
    centroid, and equal consecutive angular gaps of 2 pi / N.
    """
    num_qubits = points.num_qubits
    if num_qubits < 3:
        return False
    if any(multiplicity != 1 for multiplicity in points.multiplicities):
        return False
    coords = np.asarray(points.points, dtype=float)
    centered = coords - coords.mean(axis=0)
    _, _, vh = np.linalg.svd(centered, full_matrices=False)
    normal = vh[2]
    if float(np.max(np.abs(centered @ normal))) > PLANE_TOL:
        return False
    xs = centered @ vh[0]
    ys = centered @ vh[1]
    radii = np.hypot(xs, ys)
    mean_radius = float(radii.mean())
    if mean_radius <= RADIUS_TOL:
        return False
    if float(np.max(np.abs(radii - mean_radius))) > RADIUS_TOL:
        return False
    angles = np.sort(np.arctan2(ys, xs))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
    return bool(np.max(np.abs(gaps - 2.0 * np.pi / num_qubits)) <= ANGLE_TOL)
