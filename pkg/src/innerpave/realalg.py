"""Real-matrix helpers: LU inversion with an explicit singularity tolerance
and a certified Perron-root upper bound for nonnegative matrices."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInputError, NumericallySingularError

SINGULARITY_REL_TOL = 1e-12


def real_matrix_inverse(M):
    """Inverse of a real square matrix via LU with partial pivoting.

    Raises NumericallySingularError when any pivot magnitude falls below
    1e-12 times the largest input magnitude; the caller treats that as
    "this midpoint block is not usable", not as a hard failure.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericallySingularError(f"not a square matrix: shape {A.shape}")
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    scale = float(np.max(np.abs(A)))
    tol = SINGULARITY_REL_TOL * scale if scale > 0.0 else 0.0
    aug = np.hstack([A, np.eye(n)])
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(aug[col:, col])))
        pivot = aug[pivot_row, col]
        if abs(pivot) <= tol:
            raise NumericallySingularError(
                f"pivot {pivot:.3e} below tolerance {tol:.3e} at column {col}"
            )
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0.0:
                aug[r] -= aug[r, col] * aug[col]
    return aug[:, n:]


def spectral_radius_nonneg(M, tol=1e-10, max_iter=10_000, stop_below=None, fail_above=None):
    """Upper bound on the Perron root of an entrywise nonnegative matrix.

    Power iteration from the all-ones vector; the returned value is the best
    Collatz-Wielandt bound max_i (Mx)_i / x_i seen over the iterations.
    Every such ratio for strictly positive x bounds rho(M) from above, so the
    result never under-reports the spectral radius; the max row sum (the
    first iterate's ratio) is the fallback when iteration stalls.

    ``stop_below`` / ``fail_above`` let a regularity test return early once
    the upper bound drops below (resp. the lower bound min_i (Mx)_i / x_i
    rises above) a decision threshold; both preserve the upper-bound
    guarantee of the returned value.
    """
    D = np.array(M, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise InvalidInputError(f"not a square matrix: shape {D.shape}")
    if D.size == 0:
        return 0.0
    if np.min(D) < 0.0:
        raise InvalidInputError("negative entry in nonnegative matrix")
    n = D.shape[0]
    x = np.ones(n)
    best = math.inf
    prev = math.inf
    for _ in range(max_iter):
        y = D @ x
        bound = float(np.max(y / x))
        if bound < best:
            best = bound
        if stop_below is not None and best < stop_below:
            return best
        if fail_above is not None and float(np.min(y / x)) >= fail_above:
            return best
        if abs(bound - prev) < tol:
            break
        prev = bound
        ymax = float(np.max(y))
        if ymax == 0.0:
            return 0.0
        # Keep the iterate strictly positive so every ratio stays a bound.
        x = y / ymax
        x[x < 1e-30] = 1e-30
    return best
