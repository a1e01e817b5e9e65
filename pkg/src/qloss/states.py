"""N-qubit state containers and the partial operations used throughout.

Conventions (normative for the package):

* Qubit labels are 1-based.  Qubit 1 is the most significant bit of the
  computational-basis index, so ``state.tensor()`` (shape ``(2,)*N``)
  exposes qubit j on axis j - 1.
* A symmetric state is stored by its N+1 coefficients over the Dicke
  states |D_N^(k)>, the equal-amplitude superpositions of all basis
  states of Hamming weight k normalized by 1/sqrt(C(N,k)).
* Majorana correspondence: a symmetric state with Dicke coefficients d_k
  is identified with the roots of

      sum_k (-1)^k sqrt(C(N,k)) d_k z^(N-k),

  each root z placed on the Bloch sphere by inverse stereographic
  projection from the south pole,

      (x, y, z_B) = (2 Re z, 2 Im z, 1 - |z|^2) / (1 + |z|^2),

  with vanishing leading coefficients contributing points at the south
  pole itself.  The convention is fixed here so that point sets, file
  outputs, and tests are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import HERMITICITY_TOL, poly_roots

__all__ = [
    "PureState",
    "DensityOperator",
    "SymmetricState",
    "MajoranaPoints",
    "SchmidtDecomposition",
    "SymmetryError",
    "schmidt_decompose",
    "partial_trace",
    "partial_transpose",
    "dicke_state",
    "ghz_state",
    "symmetric_to_pure",
    "pure_to_symmetric",
    "symmetric_to_majorana",
    "majorana_to_symmetric",
    "permute_qubits",
    "apply_local_matrices",
    "kron_factors",
    "state_fidelity",
    "haar_random_state",
    "random_symmetric_state",
    "random_qubit_state",
    "orthogonal_qubit_state",
    "random_local_unitary",
]

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-9
CLUSTER_TOL = 1e-6
UNIT_POINT_TOL = 1e-9


def _binomials(num_qubits):
    return np.array([math.comb(num_qubits, k) for k in range(num_qubits + 1)], dtype=float)


def _hamming_weights(num_qubits):
    return np.array([i.bit_count() for i in range(2 ** num_qubits)], dtype=np.intp)


class PureState:
    """Immutable normalized pure state of ``num_qubits`` qubits."""

    __slots__ = ("vector", "num_qubits")

    def __init__(self, vector, *, check_norm=True):
        vector = np.array(vector, dtype=complex).reshape(-1)
        size = vector.size
        if size < 2 or size & (size - 1):
            raise ValueError(f"amplitude count must be a power of two >= 2, got {size}")
        if not np.all(np.isfinite(vector.real)) or not np.all(np.isfinite(vector.imag)):
            raise ValueError("amplitudes must be finite")
        if check_norm:
            norm = float(np.linalg.norm(vector))
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized (norm {norm:.17g})")
        vector.setflags(write=False)
        self.vector = vector
        self.num_qubits = size.bit_length() - 1

    @classmethod
    def normalized(cls, vector):
        """Build a state from an unnormalized amplitude vector."""
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(vector / norm, check_norm=False)

    @property
    def qubit_labels(self):
        return tuple(range(1, self.num_qubits + 1))

    def tensor(self):
        """The amplitude vector reshaped to ``(2,)*N`` (qubit j on axis j-1)."""
        return self.vector.reshape((2,) * self.num_qubits)

    def __repr__(self):
        return f"PureState(num_qubits={self.num_qubits})"


class DensityOperator:
    """Hermitian trace-one operator over an ordered subset of labeled qubits."""

    __slots__ = ("matrix", "qubit_labels")

    def __init__(self, matrix, qubit_labels, *, check=True):
        matrix = np.array(matrix, dtype=complex)
        labels = tuple(int(x) for x in qubit_labels)
        if len(set(labels)) != len(labels) or not labels:
            raise ValueError(f"qubit labels must be nonempty and distinct, got {labels}")
        dim = 2 ** len(labels)
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match {len(labels)} qubits")
        if check:
            deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
            if deviation > HERMITICITY_TOL:
                raise ValueError(f"matrix is not Hermitian (deviation {deviation:.3e})")
            trace = complex(np.trace(matrix))
            if abs(trace - 1.0) > TRACE_TOL:
                raise ValueError(f"matrix trace {trace:.17g} is not 1")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.qubit_labels = labels

    @property
    def num_qubits(self):
        return len(self.qubit_labels)

    def eigenvalues(self):
        """Real eigenvalues, ascending."""
        return np.linalg.eigvalsh(self.matrix)

    def numerical_rank(self, tol=RANK_TOL):
        return int(np.sum(self.eigenvalues() > tol))

    def __repr__(self):
        return f"DensityOperator(qubit_labels={self.qubit_labels})"


class SymmetricState:
    """Permutation-symmetric state stored by its N+1 Dicke coefficients."""

    __slots__ = ("dicke_coefficients", "num_qubits")

    def __init__(self, dicke_coefficients, *, check_norm=True):
        coefficients = np.array(dicke_coefficients, dtype=complex).reshape(-1)
        if coefficients.size < 2:
            raise ValueError("need at least two Dicke coefficients (one qubit)")
        if check_norm:
            norm = float(np.linalg.norm(coefficients))
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized (norm {norm:.17g})")
        coefficients.setflags(write=False)
        self.dicke_coefficients = coefficients
        self.num_qubits = coefficients.size - 1

    def __repr__(self):
        return f"SymmetricState(num_qubits={self.num_qubits})"


class MajoranaPoints:
    """Multiset of unit Bloch vectors with multiplicities summing to N."""

    __slots__ = ("points", "multiplicities", "num_qubits")

    def __init__(self, points, multiplicities):
        points = np.array(points, dtype=float).reshape(-1, 3)
        multiplicities = tuple(int(m) for m in multiplicities)
        if len(multiplicities) != points.shape[0]:
            raise ValueError("one multiplicity per point required")
        if any(m < 1 for m in multiplicities):
            raise ValueError("multiplicities must be >= 1")
        norms = np.linalg.norm(points, axis=1)
        if points.shape[0] and np.max(np.abs(norms - 1.0)) > UNIT_POINT_TOL:
            raise ValueError("points must lie on the unit sphere")
        points.setflags(write=False)
        self.points = points
        self.multiplicities = multiplicities
        self.num_qubits = sum(multiplicities)

    def __repr__(self):
        return f"MajoranaPoints(num_qubits={self.num_qubits}, distinct={len(self.multiplicities)})"


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt data of a pure state across the bipartition cut | rest.

    ``coefficients`` are nonincreasing and nonnegative with squares summing
    to one; ``cut_vectors``/``rest_vectors`` are the matching orthonormal
    states of the two sides.
    """

    coefficients: np.ndarray
    cut_vectors: list
    rest_vectors: list
    cut: tuple
    rest: tuple

    def rank(self, tol=RANK_TOL):
        return int(np.sum(self.coefficients ** 2 > tol))

    def reconstruct(self):
        """Reassemble the state in the original qubit order."""
        num_qubits = len(self.cut) + len(self.rest)
        dim_cut = 2 ** len(self.cut)
        dim_rest = 2 ** len(self.rest)
        matrix = np.zeros((dim_cut, dim_rest), dtype=complex)
        for c, u, v in zip(self.coefficients, self.cut_vectors, self.rest_vectors):
            matrix += c * np.outer(u, v)
        order = [l - 1 for l in self.cut] + [l - 1 for l in self.rest]
        tensor = matrix.reshape((2,) * num_qubits).transpose(np.argsort(order))
        return PureState(tensor.reshape(-1))


class SymmetryError(ValueError):
    """Raised when permutation symmetry is required but absent."""

    def __init__(self, message, worst_residual, swap_pair):
        super().__init__(message)
        self.worst_residual = worst_residual
        self.swap_pair = swap_pair


def _validate_subset(subset, labels, what):
    subset = tuple(sorted(set(int(x) for x in subset)))
    if not subset:
        raise ValueError(f"{what} must be nonempty")
    if any(x not in labels for x in subset):
        raise ValueError(f"{what} {subset} is not a subset of qubit labels {labels}")
    if len(subset) == len(labels):
        raise ValueError(f"{what} must be a strict subset of qubit labels {labels}")
    return subset


def kron_factors(factors):
    """Kronecker product of single-qubit (or larger) vectors, left to right."""
    out = np.asarray(factors[0], dtype=complex)
    for factor in factors[1:]:
        out = np.kron(out, factor)
    return out


def dicke_state(num_qubits, excitations):
    """Equal-amplitude superposition of all weight-``excitations`` basis states."""
    if not 0 <= excitations <= num_qubits:
        raise ValueError(f"excitation count {excitations} outside 0..{num_qubits}")
    coefficients = np.zeros(num_qubits + 1, dtype=complex)
    coefficients[excitations] = 1.0
    return symmetric_to_pure(SymmetricState(coefficients))


def ghz_state(num_qubits):
    vector = np.zeros(2 ** num_qubits, dtype=complex)
    vector[0] = vector[-1] = 1.0 / math.sqrt(2.0)
    return PureState(vector, check_norm=False)


def symmetric_to_pure(state):
    """Expand Dicke coefficients into the full 2^N amplitude vector."""
    num_qubits = state.num_qubits
    weights = _hamming_weights(num_qubits)
    scale = np.sqrt(_binomials(num_qubits))
    vector = state.dicke_coefficients[weights] / scale[weights]
    return PureState(vector, check_norm=False)


def pure_to_symmetric(state, tolerance=SYMMETRY_TOL):
    """Project a permutation-symmetric pure state onto Dicke coefficients.

    Raises SymmetryError (carrying the worst adjacent-transposition residual
    and the offending qubit pair) when the input is not symmetric within
    ``tolerance``.
    """
    num_qubits = state.num_qubits
    tensor = state.tensor()
    worst = 0.0
    worst_pair = None
    for j in range(num_qubits - 1):
        residual = float(np.linalg.norm(np.swapaxes(tensor, j, j + 1) - tensor))
        if residual > worst:
            worst = residual
            worst_pair = (j + 1, j + 2)
    if worst > tolerance:
        raise SymmetryError(
            f"state is not permutation symmetric: worst adjacent-swap residual "
            f"{worst:.3e} at qubit pair {worst_pair}",
            worst,
            worst_pair,
        )
    weights = _hamming_weights(num_qubits)
    sums = np.zeros(num_qubits + 1, dtype=complex)
    np.add.at(sums, weights, state.vector)
    coefficients = sums / np.sqrt(_binomials(num_qubits))
    return SymmetricState(coefficients)


def permute_qubits(state, permutation):
    """Relabel qubits: result qubit j carries input qubit ``permutation[j-1]``."""
    axes = [int(p) - 1 for p in permutation]
    if sorted(axes) != list(range(state.num_qubits)):
        raise ValueError(f"{permutation} is not a permutation of {state.qubit_labels}")
    return PureState(state.tensor().transpose(axes).reshape(-1), check_norm=False)


def apply_local_matrices(state, matrices):
    """Apply one 2x2 matrix per qubit; returns the (possibly unnormalized) image vector."""
    if len(matrices) != state.num_qubits:
        raise ValueError("need exactly one 2x2 matrix per qubit")
    tensor = state.tensor()
    for axis, matrix in enumerate(matrices):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ValueError(f"factor {axis + 1} has shape {matrix.shape}, expected (2, 2)")
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(-1)


def partial_trace(state, traced):
    """Trace out the qubits in ``traced`` (1-based labels), keeping the rest.

    Accepts a PureState (labels 1..N) or a DensityOperator (its own labels).
    The result keeps the complement labels in their original order.
    """
    if isinstance(state, PureState):
        labels = state.qubit_labels
        traced = _validate_subset(traced, labels, "traced subset")
        keep = [l for l in labels if l not in traced]
        axes = [l - 1 for l in keep] + [l - 1 for l in traced]
        rect = state.tensor().transpose(axes).reshape(2 ** len(keep), -1)
        return DensityOperator(rect @ rect.conj().T, keep)
    if isinstance(state, DensityOperator):
        traced = _validate_subset(traced, state.qubit_labels, "traced subset")
        current = list(state.qubit_labels)
        matrix = state.matrix
        for label in traced:
            pos = current.index(label)
            matrix = _trace_out_position(matrix, len(current), pos)
            current.pop(pos)
        return DensityOperator(matrix, current)
    raise TypeError(f"cannot take a partial trace of {type(state).__name__}")


def _trace_out_position(matrix, num_qubits, position):
    tensor = matrix.reshape((2,) * (2 * num_qubits))
    tensor = np.moveaxis(tensor, (position, num_qubits + position),
                         (2 * num_qubits - 2, 2 * num_qubits - 1))
    dim = 2 ** (num_qubits - 1)
    return np.einsum("abkk->ab", tensor.reshape(dim, dim, 2, 2))


def partial_transpose(rho, subset):
    """Transpose the row/column indices of the qubits in ``subset``.

    Returns a bare matrix: the result is Hermitian and trace one but in
    general not positive semidefinite.
    """
    subset = _validate_subset(subset, rho.qubit_labels, "transposed subset")
    m = rho.num_qubits
    axes = list(range(2 * m))
    for label in subset:
        pos = rho.qubit_labels.index(label)
        axes[pos], axes[m + pos] = axes[m + pos], axes[pos]
    return rho.matrix.reshape((2,) * (2 * m)).transpose(axes).reshape(rho.matrix.shape)


def schmidt_decompose(state, cut):
    """Schmidt decomposition of ``state`` across ``cut`` | complement."""
    labels = state.qubit_labels
    cut = _validate_subset(cut, labels, "cut")
    rest = tuple(l for l in labels if l not in cut)
    axes = [l - 1 for l in cut] + [l - 1 for l in rest]
    rect = state.tensor().transpose(axes).reshape(2 ** len(cut), 2 ** len(rest))
    u, s, vh = np.linalg.svd(rect, full_matrices=False)
    return SchmidtDecomposition(
        coefficients=s,
        cut_vectors=[u[:, i] for i in range(s.size)],
        rest_vectors=[vh[i, :] for i in range(s.size)],
        cut=cut,
        rest=rest,
    )


def _bloch_from_root(root):
    denominator = 1.0 + abs(root) ** 2
    return np.array([2.0 * root.real, 2.0 * root.imag, 1.0 - abs(root) ** 2]) / denominator


def symmetric_to_majorana(state):
    """Point representation of a symmetric state (see module docstring)."""
    num_qubits = state.num_qubits
    k = np.arange(num_qubits + 1)
    coefficients = ((-1.0) ** k) * np.sqrt(_binomials(num_qubits)) * state.dicke_coefficients
    roots, at_infinity = poly_roots(coefficients, num_qubits)
    south = np.array([0.0, 0.0, -1.0])
    raw_points = [south] * at_infinity + [_bloch_from_root(z) for z in roots]
    clusters = []  # [normalized centroid, count]
    for point in raw_points:
        for cluster in clusters:
            if np.linalg.norm(point - cluster[0]) <= CLUSTER_TOL:
                total = cluster[0] * cluster[1] + point
                cluster[1] += 1
                cluster[0] = total / np.linalg.norm(total)
                break
        else:
            clusters.append([point.copy(), 1])
    return MajoranaPoints([c[0] for c in clusters], [c[1] for c in clusters])


def majorana_to_symmetric(points):
    """Symmetrized product state of the single-qubit states at the points."""
    num_qubits = points.num_qubits
    polynomial = np.array([1.0 + 0.0j])
    for point, multiplicity in zip(points.points, points.multiplicities):
        x, y, z = point
        alpha = math.sqrt(max((1.0 + z) / 2.0, 0.0))
        beta_magnitude = math.sqrt(max((1.0 - z) / 2.0, 0.0))
        transverse = complex(x, y)
        phase = transverse / abs(transverse) if abs(transverse) > 1e-300 else 1.0
        factor = np.array([alpha, beta_magnitude * phase], dtype=complex)
        for _ in range(multiplicity):
            polynomial = np.convolve(polynomial, factor)
    coefficients = polynomial / np.sqrt(_binomials(num_qubits))
    norm = float(np.linalg.norm(coefficients))
    if norm == 0.0:
        raise ValueError("points produced the zero state")
    return SymmetricState(coefficients / norm, check_norm=False)


def state_fidelity(first, second):
    """|<first|second>|^2 for two pure states of equal size."""
    if first.num_qubits != second.num_qubits:
        raise ValueError("states act on different qubit counts")
    return float(abs(np.vdot(first.vector, second.vector)) ** 2)


def haar_random_state(num_qubits, rng):
    """Uniformly random pure state (normalized complex Gaussian amplitudes)."""
    dim = 2 ** num_qubits
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(vector / np.linalg.norm(vector), check_norm=False)


def random_symmetric_state(num_qubits, rng):
    coefficients = rng.standard_normal(num_qubits + 1) + 1j * rng.standard_normal(num_qubits + 1)
    return SymmetricState(coefficients / np.linalg.norm(coefficients), check_norm=False)


def random_qubit_state(rng):
    vector = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return vector / np.linalg.norm(vector)


def orthogonal_qubit_state(state):
    """The (unique up to phase) single-qubit state orthogonal to ``state``."""
    state = np.asarray(state, dtype=complex)
    return np.array([-np.conj(state[1]), np.conj(state[0])])


def random_local_unitary(rng):
    """Haar-random 2x2 unitary (QR of a complex Gaussian with phase fix)."""
    gaussian = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(gaussian)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))[None, :]
