from __future__ import annotations

__all__ = ["EigenMethod", "eigh", "eigvalsh", "jacobi_eigh"]

import math
from typing import Literal

import numpy as np
import scipy.linalg

from ._exceptions import EigensolverError, ParameterError

EigenMethod = Literal["lapack", "jacobi"]

JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100


def jacobi_eigh(
    matrix: np.ndarray, tol: float = JACOBI_TOLERANCE, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi eigendecomposition of a dense symmetric matrix.

    Sweeps over every off-diagonal pair (p, q) in row order, annihilating a_pq with a plane rotation, until the
    off-diagonal Frobenius norm drops below ``tol`` (relative to the Frobenius norm of the input when that is larger
    than 1). Returns eigenvalues in ascending order and the matching orthonormal eigenvectors as columns.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        msg = f"Expected a square matrix, got shape {a.shape}"
        raise ParameterError(msg)
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12):
        msg = "Jacobi rotations need a symmetric matrix"
        raise ParameterError(msg)

    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for sweep in range(max_sweeps + 1):
        off_diagonal = math.sqrt(max(float(np.sum(a * a) - np.sum(np.diag(a) ** 2)), 0.0))
        if off_diagonal <= threshold:
            order = np.argsort(np.diag(a), kind="stable")
            return np.diag(a)[order], v[:, order]
        if sweep == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    msg = f"Jacobi eigensolver did not converge after {max_sweeps} sweeps"
    raise EigensolverError(msg, sweeps=max_sweeps)


def eigh(matrix: np.ndarray, method: EigenMethod = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and column eigenvectors of a symmetric matrix."""
    if method == "jacobi":
        return jacobi_eigh(matrix)
    if method != "lapack":
        msg = f"Unknown eigensolver {method!r}"
        raise ParameterError(msg)
    try:
        return scipy.linalg.eigh(matrix)
    except scipy.linalg.LinAlgError as e:
        msg = f"LAPACK eigensolver failed: {e}"
        raise EigensolverError(msg, sweeps=0) from e


def eigvalsh(matrix: np.ndarray, method: EigenMethod = "lapack") -> np.ndarray:
    if method == "jacobi":
        return jacobi_eigh(matrix)[0]
    if method != "lapack":
        msg = f"Unknown eigensolver {method!r}"
        raise ParameterError(msg)
    try:
        return scipy.linalg.eigvalsh(matrix)
    except scipy.linalg.LinAlgError as e:
        msg = f"LAPACK eigensolver failed: {e}"
        raise EigensolverError(msg, sweeps=0) from e
