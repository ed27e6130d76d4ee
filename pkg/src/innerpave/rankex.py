"""Certified rank profiles of interval matrices.

Three extraction strategies find a square sub-matrix that provably contains
only nonsingular real matrices:

* ``sdd``      -- 0-1 LP selecting diagonal cells whose mignitude strictly
                  dominates the selected off-diagonal magnitudes (regularity
                  by Levy-Desplanques), solved for the matrix and its
                  transpose, keeping the better result;
* ``hmatrix``  -- same LP with magnitudes rescaled by the inverse diagonal
                  mignitudes, certifying an H-matrix instead;
* ``random``   -- randomized search over row/column selections and pairings,
                  certifying candidates by the midpoint-inverse spectral
                  radius test (regular when rho(|mid^-1| * rad) < 1).

A returned profile is always post-verified against the test that names it;
the certified rank is a lower bound on the rank of every real selection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .binlp import BinaryLinearProgram, solve
from .errors import (
    InternalCertificationError,
    InvalidScalingError,
    NumericallySingularError,
    ShapeError,
)
from .interval import Interval, IntervalMatrix
from .realalg import real_matrix_inverse, spectral_radius_nonneg

DEFAULT_MU = 1e-2
DEFAULT_MAX_ITER = 500


@dataclass(frozen=True)
class RankProfile:
    """Result of sub-matrix extraction.

    ``rows[k]`` is paired with ``cols[k]``: the interval sub-matrix
    ``B[s][t] = A[rows[s]][cols[t]]`` has the selected cells on its
    diagonal and passed the regularity test named by ``method``.
    """

    rows: tuple
    cols: tuple
    certified_rank: int
    method: str
    certificate: dict

    def __post_init__(self):
        if len(self.rows) != len(self.cols) or len(self.rows) != self.certified_rank:
            raise ValueError("inconsistent rank profile")
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("duplicate indices in rank profile")


# ---------------------------------------------------------------------------
# Regularity tests
# ---------------------------------------------------------------------------


def comparison_matrix(A):
    """Mignitudes on the diagonal, negated magnitudes elsewhere."""
    if not A.is_square():
        raise ShapeError("comparison matrix requires a square matrix")
    n = A.rows
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            e = A.entries[i][j]
            out[i, j] = e.mig if i == j else -e.mag
    return out


def is_sdd(A):
    """Strict diagonal dominance: <a_ii> > sum of off-diagonal magnitudes."""
    if not A.is_square():
        raise ShapeError("is_sdd requires a square matrix")
    for i in range(A.rows):
        total = 0.0
        for j in range(A.cols):
            if j != i:
                total += A.entries[i][j].mag
        if not A.entries[i][i].mig > total:
            return False
    return True


def is_h_matrix(A, u):
    """H-matrix test for a given positive scaling: <A> u > 0 componentwise.

    With u = ones this is exactly is_sdd.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0):
        raise InvalidScalingError("scaling vector must be strictly positive")
    if u.shape != (A.rows,):
        raise ShapeError("scaling vector length mismatch")
    return bool(np.all(comparison_matrix(A) @ u > 0.0))


def _rohn_radius_bound(mid, rad):
    """Upper bound on rho(|mid^-1| rad), or None when mid is singular."""
    try:
        inv = real_matrix_inverse(mid)
    except NumericallySingularError:
        return None
    D = np.abs(inv) @ rad
    return spectral_radius_nonneg(D, stop_below=1.0, fail_above=1.0)


def is_regular_rohn(A):
    """Midpoint-inverse spectral radius test; True certifies regularity,
    False is inconclusive (never 'singular')."""
    if not A.is_square():
        raise ShapeError("is_regular_rohn requires a square matrix")
    if A.rows == 0:
        return False
    mid = np.array(A.mid_matrix())
    rad = np.array(A.rad_matrix())
    bound = _rohn_radius_bound(mid, rad)
    return bound is not None and bound < 1.0


# ---------------------------------------------------------------------------
# LP construction (SDD and H-matrix variants)
# ---------------------------------------------------------------------------


def _selection_constraints(n, m):
    cons = []
    for j in range(m):  # at most one per column
        row = [0.0] * (n * m)
        for i in range(n):
            row[i * m + j] = 1.0
        cons.append((row, 1.0))
    for i in range(n):  # at most one per row
        row = [0.0] * (n * m)
        for j in range(m):
            row[i * m + j] = 1.0
        cons.append((row, 1.0))
    return cons


def build_sdd_blp(A, M, mu=DEFAULT_MU):
    """0-1 LP whose optimum selects diagonal cells of a strictly dominant
    sub-matrix: x_kl = 1 forces <a_kl> - mu >= sum over other selected rows
    i of |a_il|.

    The big-M of each cell is tightened to the largest value its left-hand
    side can reach, which never changes the feasible binary set but keeps
    the continuous relaxation useful for branch-and-bound.
    """
    n, m = A.rows, A.cols
    mag = np.array(A.mag_matrix())
    mig = np.array(A.mig_matrix())
    cons = _selection_constraints(n, m)
    for k in range(n):
        for l in range(m):
            col_sum = float(np.sum(mag[:, l]) - mag[k, l])
            m_kl = min(float(M), col_sum)
            row = [0.0] * (n * m)
            for i in range(n):
                if i == k:
                    continue
                w = mag[i, l]
                for j in range(m):
                    row[i * m + j] = w
            row[k * m + l] += m_kl - mig[k, l] + mu
            cons.append((row, m_kl))
    return BinaryLinearProgram.make([1.0] * (n * m), cons, grid_shape=(n, m))


def build_hmatrix_blp(A, M, mu=DEFAULT_MU):
    """H-matrix variant: magnitudes are rescaled by the inverse mignitude of
    the contributing row's own diagonal cell and the dominance threshold
    normalizes to 1.  Cells whose entry contains zero cannot be diagonal
    (the scaling would divide by zero) and are forced to 0 instead of
    rejecting the matrix.
    """
    n, m = A.rows, A.cols
    mag = np.array(A.mag_matrix())
    mig = np.array(A.mig_matrix())
    u = np.zeros((n, m))
    alive = mig > 0.0
    u[alive] = 1.0 / mig[alive]
    cons = _selection_constraints(n, m)
    for k in range(n):
        for l in range(m):
            idx = k * m + l
            if not alive[k, l]:
                row = [0.0] * (n * m)
                row[idx] = 1.0
                cons.append((row, 0.0))
                continue
            cap = 0.0
            for i in range(n):
                if i != k:
                    cap += float(np.max(mag[i, l] * u[i]))
            m_kl = min(float(M), cap)
            row = [0.0] * (n * m)
            for i in range(n):
                if i == k:
                    continue
                for j in range(m):
                    row[i * m + j] = mag[i, l] * u[i, j]
            row[idx] += m_kl - 1.0 + mu
            cons.append((row, m_kl))
    return BinaryLinearProgram.make([1.0] * (n * m), cons, grid_shape=(n, m))


# ---------------------------------------------------------------------------
# Extraction strategies
# ---------------------------------------------------------------------------


def _cells_from_assignment(assignment, n, m):
    cells = [(v // m, v % m) for v, x in enumerate(assignment) if x == 1]
    cells.sort()
    return cells


def _greedy_selection(mag, mig, mu, scaled):
    """Deterministic feasible warm start for the extraction LPs."""
    n, m = mag.shape
    order = sorted(
        ((i, j) for i in range(n) for j in range(m) if mig[i, j] > 0.0),
        key=lambda ij: (-mig[ij[0], ij[1]], ij),
    )
    chosen = []
    used_r, used_c = set(), set()
    for (i, j) in order:
        if i in used_r or j in used_c:
            continue
        trial = chosen + [(i, j)]
        if _selection_dominant(mag, mig, mu, trial, scaled):
            chosen.append((i, j))
            used_r.add(i)
            used_c.add(j)
    assignment = [0] * (n * m)
    for (i, j) in chosen:
        assignment[i * m + j] = 1
    return assignment


def _selection_dominant(mag, mig, mu, cells, scaled):
    for (k, l) in cells:
        total = 0.0
        for (i, j) in cells:
            if i == k:
                continue
            total += mag[i, l] / mig[i, j] if scaled else mag[i, l]
        threshold = 1.0 if scaled else mig[k, l]
        if total > threshold - mu:
            return False
    return True


def _verify_sdd_selection(A, rows, cols):
    B = A.submatrix(rows, cols)
    if is_sdd(B):
        return "row"
    if is_sdd(B.transpose()):
        return "column"
    raise InternalCertificationError(
        f"selected sub-matrix failed the SDD post-check (rows={rows}, cols={cols})"
    )


def _verify_h_selection(A, rows, cols):
    B = A.submatrix(rows, cols)
    u = np.array([B.entries[t][t].mig for t in range(B.rows)])
    if np.any(u <= 0.0):
        raise InternalCertificationError("zero mignitude on a selected diagonal")
    u = 1.0 / u
    if is_h_matrix(B, u):
        return "row", u
    if is_h_matrix(B.transpose(), u):
        return "column", u
    raise InternalCertificationError(
        f"selected sub-matrix failed the H-matrix post-check (rows={rows}, cols={cols})"
    )


def _extract_lp(A, mu, scaled):
    """Run one LP family on A and on A^T, keep the larger selection."""
    mag = np.array(A.mag_matrix())
    M = float(np.sum(mag))  # sum of all entry magnitudes deactivates any row
    builder = build_hmatrix_blp if scaled else build_sdd_blp
    results = []
    for transposed in (False, True):
        G = A.transpose() if transposed else A
        gmag = np.array(G.mag_matrix())
        gmig = np.array(G.mig_matrix())
        warm = _greedy_selection(gmag, gmig, mu, scaled)
        sol = solve(builder(G, M, mu), warm_start=warm)
        cells = (
            _cells_from_assignment(sol.assignment, G.rows, G.cols)
            if sol.status == "optimal"
            else []
        )
        if transposed:
            cells = sorted((j, i) for (i, j) in cells)
        results.append(cells)
    cells = results[0] if len(results[0]) >= len(results[1]) else results[1]
    rows = tuple(i for i, _ in cells)
    cols = tuple(j for _, j in cells)
    return rows, cols


def extract_sdd(A, mu=DEFAULT_MU):
    """Largest selection certified strictly diagonally dominant, solved for
    both A and A^T; M and mu follow the benchmark convention (M = sum of
    entry magnitudes, mu = 1e-2)."""
    rows, cols = _extract_lp(A, mu, scaled=False)
    cert = {}
    if rows:
        cert["orientation"] = _verify_sdd_selection(A, rows, cols)
    return RankProfile(rows, cols, len(rows), "sdd", cert)


def extract_hmatrix(A, mu=DEFAULT_MU):
    """Like extract_sdd but certifying an H-matrix with the scaling fixed to
    the inverse diagonal mignitudes."""
    rows, cols = _extract_lp(A, mu, scaled=True)
    cert = {}
    if rows:
        orientation, u = _verify_h_selection(A, rows, cols)
        cert["orientation"] = orientation
        cert["u"] = [float(v) for v in u]
    return RankProfile(rows, cols, len(rows), "hmatrix", cert)


def extract_random(A, max_iter=DEFAULT_MAX_ITER, seed=0):
    """Randomized descending-rank search certified by the spectral radius
    test; reproducible for a given (matrix, max_iter, seed)."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    n, m = A.rows, A.cols
    mid_full = np.array(A.mid_matrix())
    rad_full = np.array(A.rad_matrix())
    if n == m:
        bound = _rohn_radius_bound(mid_full, rad_full)
        if bound is not None and bound < 1.0:
            idx = tuple(range(n))
            return RankProfile(
                idx, idx, n, "rohn-random", {"spectral_radius_bound": bound}
            )
    rng = random.Random(seed)
    for k in range(min(n, m), 0, -1):
        for _ in range(max_iter):
            rows = sorted(rng.sample(range(n), k))
            cols = rng.sample(range(m), k)  # selection order is the pairing
            mid = mid_full[np.ix_(rows, cols)]
            rad = rad_full[np.ix_(rows, cols)]
            bound = _rohn_radius_bound(mid, rad)
            if bound is not None and bound < 1.0:
                return RankProfile(
                    tuple(rows),
                    tuple(cols),
                    k,
                    "rohn-random",
                    {"spectral_radius_bound": bound},
                )
    return RankProfile((), (), 0, "rohn-random", {})


_STRATEGY_PRECEDENCE = {"sdd": 0, "hmatrix": 1, "rohn-random": 2}


def rank_profile(A, strategy="best-of", seed=0, max_iter=DEFAULT_MAX_ITER, mu=DEFAULT_MU):
    """Dispatch to one extraction strategy, or run all three and keep the
    profile of maximum certified rank (ties resolved sdd, then hmatrix,
    then random)."""
    if strategy == "sdd":
        return extract_sdd(A, mu)
    if strategy == "hmatrix":
        return extract_hmatrix(A, mu)
    if strategy == "random":
        return extract_random(A, max_iter, seed)
    if strategy != "best-of":
        raise ValueError(f"unknown strategy {strategy!r}")
    candidates = [
        extract_sdd(A, mu),
        extract_hmatrix(A, mu),
        extract_random(A, max_iter, seed),
    ]
    return max(
        candidates,
        key=lambda p: (
            p.certified_rank,
            -_STRATEGY_PRECEDENCE[p.method],
            tuple(-i for i in p.rows),
        ),
    )


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def matrix_to_json(A):
    return {
        "rows": A.rows,
        "cols": A.cols,
        "entries": [
            [A.entries[i][j].lo, A.entries[i][j].hi]
            for i in range(A.rows)
            for j in range(A.cols)
        ],
    }


def matrix_from_json(obj):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError("entry count does not match rows*cols")
    return IntervalMatrix(
        [
            [Interval(*entries[i * cols + j]) for j in range(cols)]
            for i in range(rows)
        ]
    )


def profile_to_json(p):
    return {
        "rows": list(p.rows),
        "cols": list(p.cols),
        "rank": p.certified_rank,
        "method": p.method,
        "certificate": p.certificate,
    }


def profile_from_json(obj):
    return RankProfile(
        tuple(obj["rows"]),
        tuple(obj["cols"]),
        int(obj["rank"]),
        obj["method"],
        dict(obj.get("certificate", {})),
    )
