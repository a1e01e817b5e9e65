"""Closed forms for two families of symmetric states and their loss behavior.

Four-qubit family: psi_mu = (|D_4^(0)> + mu |D_4^(2)> + |D_4^(4)>) / sqrt(2 + |mu|^2)
over a fundamental parameter domain in the complex mu plane, with the
predicted region of two-loss fragility Im(mu) >= sqrt((sqrt(6) - Re mu) Re mu).

Tilted Dicke family: the symmetrized superposition of N - k |0> factors and
k copies of (u|0> + |1>), whose two-qubit reduced state has an exact 4x4
closed form in the coefficients f(u, j, j') below; its partial-transpose
determinant stays strictly negative for all u >= 0, certifying that the
family is robust against losing any N - 2 qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .separability import max_bipartition_negativity, negativity
from .states import (
    DensityOperator,
    PureState,
    SymmetricState,
    _hamming_weights,
    partial_trace,
    partial_transpose,
    symmetric_to_pure,
)

__all__ = [
    "FRAGILITY_THRESHOLD",
    "mu_state",
    "in_mu_domain",
    "predicted_two_loss_fragile",
    "negativity_after_loss",
    "FamilyPoint",
    "family_normalization",
    "family_state",
    "pair_entry_coeff",
    "reduced_pair_state",
    "pair_pt_determinant",
    "pair_negativity",
]

# negativities at or below this count as vanishing in fragility verdicts
# (sweep resolution dominates the achievable sharpness)
FRAGILITY_THRESHOLD = 1e-9

SQRT6 = math.sqrt(6.0)
REAL_AXIS_BOUND = math.sqrt(2.0 / 3.0)
DISC_CENTER = math.sqrt(2.0 / 3.0)
DISC_RADIUS = math.sqrt(8.0 / 3.0)
EXEMPT_POINT = complex(0.0, math.sqrt(2.0))


def mu_state(mu):
    """The four-qubit symmetric state with Dicke coefficients (1, 0, mu, 0, 1)."""
    mu = complex(mu)
    coefficients = np.array([1.0, 0.0, mu, 0.0, 1.0], dtype=complex)
    return SymmetricState(coefficients / math.sqrt(2.0 + abs(mu) ** 2), check_norm=False)


def in_mu_domain(mu):
    """Membership in the fundamental mu domain.

    Literal predicate: Re mu >= 0; on the real axis mu < sqrt(2/3); off the
    real axis Im mu >= 0 and |mu - sqrt(2/3)| < sqrt(8/3), with the single
    point mu = sqrt(2) i exempted from the half-plane/disc clause.
    """
    mu = complex(mu)
    if mu.real < 0.0:
        return False
    if mu.imag == 0.0:
        return mu.real < REAL_AXIS_BOUND
    if mu == EXEMPT_POINT:
        return True
    return mu.imag >= 0.0 and abs(mu - DISC_CENTER) < DISC_RADIUS


def predicted_two_loss_fragile(mu):
    """Predicted two-loss fragility: Im mu >= sqrt((sqrt(6) - Re mu) Re mu).

    Only defined on the fundamental domain; the radicand is clamped at zero
    outside Re mu in [0, sqrt(6)] (never reached from inside the domain).
    """
    mu = complex(mu)
    if not in_mu_domain(mu):
        raise ValueError(f"mu = {mu} is outside the fundamental domain")
    radicand = (SQRT6 - mu.real) * mu.real
    return mu.imag >= math.sqrt(max(radicand, 0.0))


def negativity_after_loss(mu, lost):
    """Largest residual bipartition negativity after losing ``lost`` qubits.

    ``lost`` is 1 or 2; the last qubits are traced (immaterial by symmetry).
    Zero negativity is equivalent to separability for these residual sizes.
    """
    if lost not in (1, 2):
        raise ValueError(f"loss count must be 1 or 2, got {lost}")
    state = symmetric_to_pure(mu_state(mu))
    residual = partial_trace(state, tuple(range(5 - lost, 5)))
    return max_bipartition_negativity(residual)


@dataclass(frozen=True)
class FamilyPoint:
    """Parameters (N, k, u) of one member of the tilted Dicke family."""

    num_qubits: int
    excitations: int
    u: float

    def __post_init__(self):
        if self.num_qubits < 3:
            raise ValueError(f"family requires N >= 3, got N = {self.num_qubits}")
        if not 1 <= self.excitations <= self.num_qubits - 1:
            raise ValueError(
                f"excitation count {self.excitations} outside 1..{self.num_qubits - 1}"
            )
        if not (np.isfinite(self.u) and self.u >= 0.0):
            raise ValueError(f"u must be a nonnegative real, got {self.u}")


def family_normalization(point):
    """Normalization constant A(N, k, u) = [sum_i C(k,i)^2 / C(N,i) u^(2(k-i))]^-1."""
    n, k, u = point.num_qubits, point.excitations, point.u
    total = sum(
        math.comb(k, i) ** 2 / math.comb(n, i) * u ** (2 * (k - i)) for i in range(k + 1)
    )
    return 1.0 / total


def family_state(point):
    """Symmetrized product of N - k |0> factors with k copies of u|0> + |1>.

    Amplitude closed form: a basis state of Hamming weight w <= k receives
    C(N-w, k-w) u^(k-w) (ways to place the remaining tilted factors on zero
    bits), scaled by sqrt(A)/C(N,k); the constructor's norm check doubles
    as a live validation of the normalization identity.
    """
    n, k, u = point.num_qubits, point.excitations, point.u
    by_weight = np.zeros(n + 1)
    for w in range(k + 1):
        by_weight[w] = math.comb(n - w, k - w) * u ** (k - w)
    vector = by_weight[_hamming_weights(n)].astype(complex)
    vector *= math.sqrt(family_normalization(point)) / math.comb(n, k)
    return PureState(vector)


def _binom0(n, r):
    # C(n, r) with the convention that r < 0 or r > n gives 0
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


def pair_entry_coeff(point, j, jp):
    """Coefficient f(u, j, j') of the two-qubit reduced state's closed form.

    f = 1/C(N,k)^2 sum_i C(N-i-j, k-i-j) C(N-i-j', k-i-j') C(N-2, i)
        u^(2(k-i)-j-j'), binomials vanishing outside 0 <= r <= n.  Whenever
    the exponent would go negative the binomial prefactor vanishes under
    that convention; a nonzero coefficient there would be a contradiction
    and raises.
    """
    if j not in (0, 1, 2) or jp not in (0, 1, 2):
        raise ValueError(f"pair excitation indices must be in 0..2, got ({j}, {jp})")
    n, k, u = point.num_qubits, point.excitations, point.u
    total = 0.0
    for i in range(k + 1):
        coefficient = (
            _binom0(n - i - j, k - i - j)
            * _binom0(n - i - jp, k - i - jp)
            * _binom0(n - 2, i)
        )
        if coefficient == 0:
            continue
        exponent = 2 * (k - i) - j - jp
        if exponent < 0:
            raise AssertionError(
                "nonzero coefficient with a negative u power; the binomial "
                "convention should make this impossible"
            )
        total += coefficient * u ** exponent
    return total / math.comb(n, k) ** 2


def reduced_pair_state(point):
    """Exact two-qubit reduced state of the family member, labels (1, 2).

    Entry (r, c) is A * f(weight(r), weight(c)) over the two-bit indices;
    the constructor's trace check doubles as a live validation of the
    closed form against the normalization.
    """
    a = family_normalization(point)
    weights = (0, 1, 1, 2)
    f = {(j, jp): pair_entry_coeff(point, j, jp) for j in range(3) for jp in range(3)}
    matrix = np.array(
        [[a * f[(weights[r], weights[c])] for c in range(4)] for r in range(4)],
        dtype=complex,
    )
    return DensityOperator(matrix, (1, 2))


def pair_pt_determinant(point):
    """Determinant of the pair state's partial transpose (first qubit).

    Strictly negative across the family.  For k = 1 every entry with a pair
    excitation index of 2 vanishes and the determinant collapses to
    -(A f(1,1))^4 = -(A / N^2)^4, independent of u, since f(1,1) = 1/N^2
    exactly at k = 1.
    """
    return float(np.linalg.det(partial_transpose(reduced_pair_state(point), (1,))).real)


def pair_negativity(point):
    """Negativity of the two-qubit reduced state (positive = robust pair)."""
    return negativity(reduced_pair_state(point), (1,))
