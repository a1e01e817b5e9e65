"""State containers, partial operations, and the point correspondence."""

import math

import numpy as np
import pytest

from qloss.states import (
    DensityOperator,
    MajoranaPoints,
    PureState,
    SymmetricState,
    SymmetryError,
    apply_local_matrices,
    dicke_state,
    ghz_state,
    haar_random_state,
    kron_factors,
    majorana_to_symmetric,
    partial_trace,
    partial_transpose,
    permute_qubits,
    pure_to_symmetric,
    random_local_unitary,
    random_symmetric_state,
    schmidt_decompose,
    state_fidelity,
    symmetric_to_majorana,
    symmetric_to_pure,
)
from oracles import brute_dicke_vector, loop_partial_trace, loop_partial_transpose


# ---------------------------------------------------------------------------
# containers


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState(np.ones(3))  # not a power of two
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 1.0]))  # not normalized
    with pytest.raises(ValueError):
        PureState(np.array([np.nan, 0.0]))
    state = PureState.normalized(np.array([3.0, 4.0]))
    assert np.linalg.norm(state.vector) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        PureState.normalized(np.zeros(4))


def test_density_operator_validation():
    with pytest.raises(ValueError):
        DensityOperator(np.eye(4) / 4.0, (1, 1))  # repeated label
    with pytest.raises(ValueError):
        DensityOperator(np.eye(4) / 2.0, (1, 2))  # trace 2
    skewed = np.eye(4) / 4.0 + 1e-6 * 1j * np.eye(4)
    with pytest.raises(ValueError):
        DensityOperator(skewed, (1, 2))


def test_qubit_one_is_most_significant_bit():
    # |0...01> excites the last qubit only
    vector = np.zeros(8)
    vector[1] = 1.0
    state = PureState(vector)
    expected = kron_factors([np.array([1.0, 0.0])] * 2 + [np.array([0.0, 1.0])])
    assert np.allclose(state.vector, expected)
    # its single-qubit residuals: qubits 1, 2 in |0>, qubit 3 in |1>
    rho3 = partial_trace(state, (1, 2)).matrix
    assert np.allclose(rho3, np.diag([0.0, 1.0]))


# ---------------------------------------------------------------------------
# symmetric states and Dicke expansion


@pytest.mark.parametrize("num_qubits,excitations", [(3, 0), (3, 1), (4, 2), (6, 3), (7, 5)])
def test_dicke_state_matches_enumeration(num_qubits, excitations):
    expected = brute_dicke_vector(num_qubits, excitations)
    assert np.allclose(dicke_state(num_qubits, excitations).vector, expected, atol=1e-12)


def test_ghz_in_dicke_basis():
    symmetric = pure_to_symmetric(ghz_state(5))
    expected = np.zeros(6, dtype=complex)
    expected[0] = expected[5] = 1.0 / math.sqrt(2.0)
    assert np.allclose(symmetric.dicke_coefficients, expected, atol=1e-12)


def test_w_state_dicke_coefficients():
    symmetric = pure_to_symmetric(dicke_state(3, 1))
    assert np.allclose(symmetric.dicke_coefficients, [0.0, 1.0, 0.0, 0.0], atol=1e-12)


def test_symmetric_round_trip(rng):
    for _ in range(20):
        symmetric = random_symmetric_state(int(rng.integers(1, 8)), rng)
        back = pure_to_symmetric(symmetric_to_pure(symmetric))
        assert np.allclose(back.dicke_coefficients, symmetric.dicke_coefficients, atol=1e-12)


def test_pure_to_symmetric_rejects_asymmetric():
    vector = np.zeros(8)
    vector[1] = 1.0  # |001> is not permutation symmetric
    with pytest.raises(SymmetryError) as info:
        pure_to_symmetric(PureState(vector))
    assert info.value.worst_residual > 0.1
    assert info.value.swap_pair is not None


def test_permute_qubits_moves_excitation():
    vector = np.zeros(8)
    vector[1] = 1.0  # qubit 3 excited
    permuted = permute_qubits(PureState(vector), (3, 1, 2))
    expected = np.zeros(8)
    expected[4] = 1.0  # now qubit 1 carries it
    assert np.allclose(permuted.vector, expected)


# ---------------------------------------------------------------------------
# partial trace / transpose against the loop oracles


@pytest.mark.parametrize("num_qubits,traced", [
    (2, (1,)), (3, (2,)), (3, (1, 3)), (4, (2, 4)), (5, (1, 2, 5)),
])
def test_partial_trace_matches_loop_oracle(num_qubits, traced, rng):
    state = haar_random_state(num_qubits, rng)
    expected = loop_partial_trace(state.vector, num_qubits, traced)
    result = partial_trace(state, traced)
    assert np.max(np.abs(result.matrix - expected)) < 1e-12
    assert result.qubit_labels == tuple(q for q in range(1, num_qubits + 1)
                                        if q not in traced)


def test_partial_trace_density_path_matches_pure_path(rng):
    state = haar_random_state(4, rng)
    rho = partial_trace(state, (4,))
    # trace label 2 out of the 3-qubit operator carrying labels (1, 2, 3)
    expected = loop_partial_trace(state.vector, 4, [2, 4])
    assert np.max(np.abs(partial_trace(rho, (2,)).matrix - expected)) < 1e-12


def test_partial_trace_composition(rng):
    state = haar_random_state(5, rng)
    once = partial_trace(partial_trace(state, (2,)), (4,))
    joint = partial_trace(state, (2, 4))
    assert np.max(np.abs(once.matrix - joint.matrix)) < 1e-12
    assert once.qubit_labels == joint.qubit_labels == (1, 3, 5)


def test_partial_trace_preserves_trace_and_positivity(rng):
    state = haar_random_state(5, rng)
    rho = partial_trace(state, (1, 4))
    assert complex(np.trace(rho.matrix)).real == pytest.approx(1.0, abs=1e-12)
    assert rho.eigenvalues()[0] > -1e-12


def test_partial_trace_validates_subsets(rng):
    state = haar_random_state(3, rng)
    with pytest.raises(ValueError):
        partial_trace(state, ())
    with pytest.raises(ValueError):
        partial_trace(state, (4,))
    with pytest.raises(ValueError):
        partial_trace(state, (1, 2, 3))  # no qubits left


def test_symmetric_residuals_equal_for_any_subset(rng):
    symmetric = random_symmetric_state(5, rng)
    state = symmetric_to_pure(symmetric)
    first = partial_trace(state, (1, 2)).matrix
    second = partial_trace(state, (3, 5)).matrix
    assert np.max(np.abs(first - second)) < 1e-12


@pytest.mark.parametrize("num_qubits,subset", [(2, (1,)), (2, (2,)), (3, (2,)), (4, (1, 3))])
def test_partial_transpose_matches_loop_oracle(num_qubits, subset, rng):
    rho = partial_trace(haar_random_state(num_qubits + 1, rng), (num_qubits + 1,))
    expected = loop_partial_transpose(rho.matrix, num_qubits, [q - 1 for q in subset])
    assert np.max(np.abs(partial_transpose(rho, subset) - expected)) < 1e-12


def test_partial_transpose_is_involutive_and_hermitian(rng):
    rho = partial_trace(haar_random_state(4, rng), (4,))
    pt = partial_transpose(rho, (2,))
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-12
    assert complex(np.trace(pt)).real == pytest.approx(1.0, abs=1e-12)
    back = partial_transpose(DensityOperator(pt, rho.qubit_labels, check=False), (2,))
    assert np.max(np.abs(back - rho.matrix)) < 1e-12


# ---------------------------------------------------------------------------
# Schmidt decomposition


def test_schmidt_single_cut_rank_two(rng):
    state = haar_random_state(4, rng)
    schmidt = schmidt_decompose(state, (2,))
    assert schmidt.coefficients.size == 2
    assert np.all(np.diff(schmidt.coefficients) <= 0.0)
    assert np.sum(schmidt.coefficients ** 2) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.vdot(schmidt.cut_vectors[0], schmidt.cut_vectors[1])) < 1e-12
    assert abs(np.vdot(schmidt.rest_vectors[0], schmidt.rest_vectors[1])) < 1e-12


@pytest.mark.parametrize("cut", [(1,), (3,), (1, 3), (2, 4)])
def test_schmidt_reconstructs(cut, rng):
    state = haar_random_state(4, rng)
    rebuilt = schmidt_decompose(state, cut).reconstruct()
    assert state_fidelity(rebuilt, state) == pytest.approx(1.0, abs=1e-12)


def test_schmidt_squares_are_residual_eigenvalues(rng):
    state = haar_random_state(4, rng)
    schmidt = schmidt_decompose(state, (3,))
    eigenvalues = np.sort(partial_trace(state, (1, 2, 4)).eigenvalues())[::-1]
    assert np.allclose(schmidt.coefficients ** 2, eigenvalues, atol=1e-12)


# ---------------------------------------------------------------------------
# local operations


def test_apply_local_matrices_matches_kron(rng):
    state = haar_random_state(3, rng)
    matrices = [random_local_unitary(rng) for _ in range(3)]
    full = np.kron(np.kron(matrices[0], matrices[1]), matrices[2])
    assert np.allclose(apply_local_matrices(state, matrices), full @ state.vector,
                       atol=1e-12)


def test_apply_local_matrices_requires_one_per_qubit(rng):
    state = haar_random_state(3, rng)
    with pytest.raises(ValueError):
        apply_local_matrices(state, [np.eye(2)] * 2)


# ---------------------------------------------------------------------------
# point correspondence


def test_all_zero_state_maps_to_north_pole():
    points = symmetric_to_majorana(pure_to_symmetric(dicke_state(4, 0)))
    assert points.multiplicities == (4,)
    assert np.allclose(points.points[0], [0.0, 0.0, 1.0], atol=1e-9)


def test_single_excitation_splits_north_and_south():
    points = symmetric_to_majorana(pure_to_symmetric(dicke_state(5, 1)))
    by_z = sorted(zip(points.multiplicities, points.points[:, 2].tolist()))
    assert [(1, -1.0), (4, 1.0)] == [(m, round(z)) for m, z in by_z]


def test_ghz_points_form_equatorial_polygon():
    for num_qubits in (3, 4, 6):
        points = symmetric_to_majorana(pure_to_symmetric(ghz_state(num_qubits)))
        assert points.multiplicities == (1,) * num_qubits
        assert np.max(np.abs(points.points[:, 2])) < 1e-9
        radii = np.linalg.norm(points.points[:, :2], axis=1)
        assert np.allclose(radii, 1.0, atol=1e-9)
        angles = np.sort(np.angle(points.points[:, 0] + 1j * points.points[:, 1]))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
        assert np.allclose(gaps, 2.0 * np.pi / num_qubits, atol=1e-8)


def test_north_south_points_rebuild_dicke():
    points = MajoranaPoints([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], [3, 2])
    rebuilt = symmetric_to_pure(majorana_to_symmetric(points))
    fidelity = state_fidelity(rebuilt, dicke_state(5, 2))
    assert fidelity == pytest.approx(1.0, abs=1e-12)


def test_majorana_round_trip_random(rng):
    for _ in range(25):
        symmetric = random_symmetric_state(int(rng.integers(2, 9)), rng)
        rebuilt = majorana_to_symmetric(symmetric_to_majorana(symmetric))
        fidelity = abs(np.vdot(rebuilt.dicke_coefficients,
                               symmetric.dicke_coefficients)) ** 2
        assert fidelity >= 1.0 - 1e-7


def test_point_multiset_round_trip():
    # multiplicities survive the symmetric-state detour
    points = MajoranaPoints(
        [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]], [2, 1, 1]
    )
    again = symmetric_to_majorana(majorana_to_symmetric(points))
    pairing = {tuple(np.round(p, 5)): m
               for p, m in zip(again.points, again.multiplicities)}
    for point, multiplicity in zip(points.points, points.multiplicities):
        assert pairing[tuple(np.round(point, 5))] == multiplicity


def test_majorana_points_validation():
    with pytest.raises(ValueError):
        MajoranaPoints([[0.0, 0.0, 2.0]], [1])  # off the sphere
    with pytest.raises(ValueError):
        MajoranaPoints([[0.0, 0.0, 1.0]], [0])  # multiplicity < 1


def test_haar_random_state_is_seed_deterministic():
    first = haar_random_state(4, np.random.default_rng(7))
    second = haar_random_state(4, np.random.default_rng(7))
    assert np.array_equal(first.vector, second.vector)
