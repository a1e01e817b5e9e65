"""Dense linear-algebra helpers shared across the package.

Thin wrappers around LAPACK-backed numpy routines that pin down the
validation and ordering conventions the rest of the package relies on:
Hermitian eigendecomposition with an explicit hermiticity gate, trace norm
via singular values, and complex polynomial roots with a leading-zero
convention (vanishing leading coefficients count as roots at infinity).
"""

from __future__ import annotations

import numpy as np

__all__ = ["eig_hermitian", "trace_norm", "poly_roots"]

# Largest tolerated entry of M - M^dagger before a matrix is rejected.
HERMITICITY_TOL = 1e-10

# Leading coefficients below this (relative to the largest coefficient)
# are treated as exact zeros of the polynomial.
LEADING_COEFF_TOL = 1e-13


def eig_hermitian(matrix):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues real and
    ascending and ``eigenvectors[:, j]`` the unit eigenvector belonging to
    ``eigenvalues[j]``.  Eigenvectors of (near-)degenerate eigenvalues come
    out orthonormal; no caller may rely on a particular basis inside a
    degenerate cluster.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    deviation = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if deviation > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (deviation {deviation:.3e})")
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    return eigenvalues, eigenvectors


def trace_norm(matrix):
    """Sum of singular values of a square matrix.

    For Hermitian input this equals the sum of absolute eigenvalues.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    return float(np.sum(np.linalg.svd(matrix, compute_uv=False)))


def poly_roots(coefficients, nominal_degree=None):
    """Roots of a complex polynomial given by descending-power coefficients.

    Parameters
    ----------
    coefficients : sequence of complex
        ``coefficients[i]`` multiplies ``z**(n - i)`` where ``n`` is the
        nominal degree.
    nominal_degree : int, optional
        Defaults to ``len(coefficients) - 1``.

    Returns
    -------
    (roots, at_infinity)
        ``roots`` are the finite roots (via companion-matrix eigenvalues);
        ``at_infinity`` counts the vanishing leading coefficients, so that
        ``len(roots) + at_infinity == nominal_degree``.
    """
    coefficients = np.atleast_1d(np.asarray(coefficients, dtype=complex))
    if nominal_degree is None:
        nominal_degree = coefficients.size - 1
    if coefficients.size != nominal_degree + 1:
        raise ValueError("coefficient count does not match the nominal degree")
    scale = float(np.max(np.abs(coefficients)))
    if scale == 0.0:
        raise ValueError("the zero polynomial has no well-defined roots")
    lead = 0
    while abs(coefficients[lead]) <= LEADING_COEFF_TOL * scale:
        lead += 1
    at_infinity = lead
    stripped = coefficients[lead:]
    if stripped.size <= 1:
        return np.zeros(0, dtype=complex), at_infinity
    roots = np.roots(stripped)
    return roots, at_infinity
