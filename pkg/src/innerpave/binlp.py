"""Exact solver for small 0-1 linear programs.

maximize    c . x
subject to  A x <= b,  x binary

Branch-and-bound with best-bound node selection over the continuous [0,1]
relaxation, which is solved by a dense two-phase primal simplex using
Bland's rule (robustness over speed at these sizes; instances here stay at
or below ~64 variables).  Everything is deterministic: entering variables
by lowest index, node ties by insertion order, 1-branches pushed first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heappush, heappop

import numpy as np

FEAS_TOL = 1e-9
INT_TOL = 1e-6


@dataclass(frozen=True)
class BinaryLinearProgram:
    """0-1 LP instance; ``grid_shape`` tags extraction problems with the
    (rows, cols) layout their variables are read from (row-major)."""

    objective: tuple
    constraints: tuple  # of (coeffs tuple, rhs float)
    grid_shape: tuple | None = None

    @staticmethod
    def make(objective, constraints, grid_shape=None):
        obj = tuple(float(v) for v in objective)
        cons = tuple(
            (tuple(float(v) for v in coeffs), float(rhs))
            for coeffs, rhs in constraints
        )
        for coeffs, _ in cons:
            if len(coeffs) != len(obj):
                raise ValueError("constraint length differs from objective length")
        return BinaryLinearProgram(obj, cons, grid_shape)

    @property
    def num_vars(self):
        return len(self.objective)


@dataclass(frozen=True)
class BlpSolution:
    assignment: tuple
    objective_value: float
    status: str  # 'optimal' | 'infeasible'


# ---------------------------------------------------------------------------
# Dense two-phase primal simplex (maximization, Ax <= b, x >= 0)
# ---------------------------------------------------------------------------


def _pivot(T, basis, row, col):
    T[row] = T[row] / T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    basis[row] = col


def _simplex_iterate(T, basis, usable, tol, max_iter=200_000):
    """Run Bland-rule pivots until optimal; returns False on iteration cap.

    The last row holds z_j - c_j; optimality when all usable entries
    >= -tol.  Entering: lowest usable index with entry < -tol.  Leaving:
    lowest-ratio row, ties by lowest basic variable index.
    """
    m = T.shape[0] - 1
    for _ in range(max_iter):
        red = T[-1, :usable]
        enter = -1
        for j in range(usable):
            if red[j] < -tol:
                enter = j
                break
        if enter < 0:
            return True
        col = T[:m, enter]
        best_row = -1
        best_ratio = math.inf
        for i in range(m):
            if col[i] > tol:
                ratio = T[i, -1] / col[i]
                if ratio < best_ratio - 1e-12 or (
                    abs(ratio - best_ratio) <= 1e-12
                    and (best_row < 0 or basis[i] < basis[best_row])
                ):
                    best_ratio = ratio
                    best_row = i
        if best_row < 0:
            return None  # unbounded direction
        _pivot(T, basis, best_row, enter)
    return False


def simplex_max(c, A, b, tol=FEAS_TOL):
    """Maximize c@x s.t. A@x <= b, x >= 0.

    Returns (status, x, objective) with status in
    {'optimal', 'infeasible', 'unbounded'}.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape if A.size else (0, len(c))
    if m == 0:
        # No constraints: each variable unbounded unless penalised.
        if np.any(c > tol):
            return "unbounded", None, math.inf
        return "optimal", np.zeros(n), 0.0

    rows = A.copy()
    flip = b < 0.0
    rows[flip] *= -1.0
    b[flip] *= -1.0

    art_rows = np.where(flip)[0]
    n_art = len(art_rows)
    ncols = n + m + n_art
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :n] = rows
    slack = np.eye(m)
    slack[flip] *= -1.0
    T[:m, n : n + m] = slack
    for k, r in enumerate(art_rows):
        T[r, n + m + k] = 1.0
    T[:m, -1] = b
    basis = [0] * m
    art_of_row = {}
    for i in range(m):
        basis[i] = n + i
    for k, r in enumerate(art_rows):
        basis[r] = n + m + k
        art_of_row[r] = n + m + k

    if n_art:
        # Phase 1: maximize -(sum of artificials).
        for r in art_rows:
            T[-1] += T[r]
        T[-1, n + m :] = 0.0
        ok = _simplex_iterate(T, basis, n + m, tol)
        if ok is None or ok is False or T[-1, -1] > 1e-7:
            return "infeasible", None, -math.inf
        # Drive leftover zero-level artificials out of the basis.
        for i in range(m):
            if basis[i] >= n + m:
                pivot_col = -1
                for j in range(n + m):
                    if abs(T[i, j]) > 1e-9:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    _pivot(T, basis, i, pivot_col)
        T[-1, :] = 0.0

    # Phase 2 objective row: z_j - c_j, consistent with the current basis.
    T[-1, :n] = -c
    T[-1, n:] = 0.0
    for i in range(m):
        if basis[i] < n + m and T[-1, basis[i]] != 0.0:
            T[-1] -= T[-1, basis[i]] * T[i]
    ok = _simplex_iterate(T, basis, n + m, tol)
    if ok is None:
        return "unbounded", None, math.inf
    if ok is False:
        raise RuntimeError("simplex iteration cap exceeded")
    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    return "optimal", x, float(c @ x)


# ---------------------------------------------------------------------------
# Relaxation bound and branch-and-bound
# ---------------------------------------------------------------------------


def _relaxation(p, fixed):
    """LP relaxation with some variables fixed; free variables in [0, 1].

    Returns (status, x_full, objective) where x_full merges fixed values
    with the relaxation optimum.
    """
    n = p.num_vars
    free = [j for j in range(n) if fixed[j] < 0]
    obj_offset = 0.0
    for j in range(n):
        if fixed[j] >= 0:
            obj_offset += p.objective[j] * fixed[j]
    rows = []
    rhs = []
    for coeffs, b in p.constraints:
        shift = sum(coeffs[j] * fixed[j] for j in range(n) if fixed[j] >= 0)
        row = [coeffs[j] for j in free]
        bb = b - shift
        if not any(abs(v) > 0.0 for v in row):
            if bb < -FEAS_TOL:
                return "infeasible", None, -math.inf
            continue
        rows.append(row)
        rhs.append(bb)
    nf = len(free)
    for k in range(nf):  # upper bounds x <= 1
        row = [0.0] * nf
        row[k] = 1.0
        rows.append(row)
        rhs.append(1.0)
    if nf == 0:
        return "optimal", np.array([float(v) for v in fixed]), obj_offset
    c = np.array([p.objective[j] for j in free])
    A = np.array(rows) if rows else np.zeros((0, nf))
    status, x, obj = simplex_max(c, A, np.array(rhs))
    if status != "optimal":
        return status, None, -math.inf
    full = np.array([float(v) for v in fixed])
    for k, j in enumerate(free):
        full[j] = x[k]
    return "optimal", full, obj + obj_offset


def relax_bound(p, fixed=None):
    """Upper bound on any binary completion of a partial assignment.

    ``fixed`` maps variable index -> 0/1 (dict) or is a full-length
    sequence with -1 marking free variables.  Returns -inf when the
    restriction is already infeasible (the prune signal).
    """
    fx = _as_fixed_array(p, fixed)
    status, _, obj = _relaxation(p, fx)
    if status != "optimal":
        return -math.inf
    return obj


def _as_fixed_array(p, fixed):
    n = p.num_vars
    if fixed is None:
        return [-1] * n
    if isinstance(fixed, dict):
        fx = [-1] * n
        for j, v in fixed.items():
            fx[j] = int(v)
        return fx
    return [int(v) for v in fixed]


def _binary_feasible(p, x):
    for coeffs, b in p.constraints:
        if sum(c * v for c, v in zip(coeffs, x)) > b + FEAS_TOL:
            return False
    return True


def solve(p, warm_start=None):
    """Provably optimal binary assignment for a 0-1 LP.

    ``warm_start`` may seed the incumbent with a known feasible assignment
    (it is validated first); it only speeds up pruning, the result is the
    same.  Deterministic: best-bound node selection, insertion order on
    ties, branching on the lowest-index fractional variable, 1-branch
    explored first; the incumbent is only replaced on strict improvement.
    """
    n = p.num_vars
    integral_obj = all(float(v).is_integer() for v in p.objective)

    best_x = None
    best_obj = -math.inf
    if warm_start is not None:
        w = [int(v) for v in warm_start]
        if len(w) == n and _binary_feasible(p, w):
            best_x = tuple(w)
            best_obj = float(sum(c * v for c, v in zip(p.objective, w)))

    def beaten(bound):
        if best_x is None:
            return False
        if integral_obj:
            return math.floor(bound + INT_TOL) <= best_obj + FEAS_TOL
        return bound <= best_obj + FEAS_TOL

    counter = 0
    root_fixed = tuple([-1] * n)
    root_bound = relax_bound(p, root_fixed)
    heap = []
    if root_bound > -math.inf:
        heappush(heap, (-root_bound, counter, root_fixed))
        counter += 1

    while heap:
        neg_bound, _, fixed = heappop(heap)
        if beaten(-neg_bound):
            continue
        status, x, obj = _relaxation(p, list(fixed))
        if status != "optimal" or beaten(obj):
            continue
        frac = [j for j in range(n) if fixed[j] < 0 and INT_TOL < x[j] < 1.0 - INT_TOL]
        if not frac:
            cand = [int(round(v)) for v in x]
            if _binary_feasible(p, cand):
                cand_obj = float(sum(c * v for c, v in zip(p.objective, cand)))
                if cand_obj > best_obj + 1e-12:
                    best_obj = cand_obj
                    best_x = tuple(cand)
            continue
        j = frac[0]
        for value in (1, 0):
            child = list(fixed)
            child[j] = value
            heappush(heap, (-obj, counter, tuple(child)))
            counter += 1

    if best_x is None:
        return BlpSolution(tuple(), -math.inf, "infeasible")
    return BlpSolution(best_x, best_obj, "optimal")
