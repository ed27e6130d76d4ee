"""Random interval-matrix generators used by the extraction benchmarks.

Two families:

* embedded-dominant: unit-width entries with lower bounds uniform in [0, 9];
  r cells on distinct rows and columns are boosted above their column's sum
  of upper bounds, guaranteeing an embedded r x r sub-matrix that dominates
  column-wise, so r lower-bounds the certified rank reachable by the SDD
  extraction;
* rotated-rank: a real matrix of exact rank r built from a triangular block
  plus linearly dependent columns, mixed by n+1 random Givens rotations
  (rotations preserve rank), then optionally thickened entrywise into an
  interval matrix.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import InvalidParamsError
from .interval import Interval, IntervalMatrix


def gen_embedded_dominant(m, r, seed=0):
    if not (1 <= r <= m):
        raise InvalidParamsError(f"need 1 <= r <= m, got r={r}, m={m}")
    rng = random.Random(seed)
    lo = [[rng.uniform(0.0, 9.0) for _ in range(m)] for _ in range(m)]
    hi = [[v + 1.0 for v in row] for row in lo]
    rows = rng.sample(range(m), r)
    cols = rng.sample(range(m), r)
    for i, j in zip(rows, cols):
        boosted = 1.0 + sum(hi[k][j] for k in range(m))
        lo[i][j] = boosted
        hi[i][j] = boosted + 1.0
    return IntervalMatrix(
        [[Interval(lo[i][j], hi[i][j]) for j in range(m)] for i in range(m)]
    )


def gen_rotated_rank(n, r, seed=0):
    """Real n x n matrix of mathematical rank exactly r."""
    if not (1 <= r <= n):
        raise InvalidParamsError(f"need 1 <= r <= n, got r={r}, n={n}")
    rng = np.random.default_rng(seed)
    tri = np.triu(rng.uniform(-1.0, 1.0, size=(r, r)))
    diag = rng.uniform(0.5, 2.0, size=r) * rng.choice([-1.0, 1.0], size=r)
    tri[np.diag_indices(r)] = diag
    J = np.zeros((n, n))
    J[:r, :r] = tri
    if n > r:
        combo = rng.uniform(-1.0, 1.0, size=(r, n - r))
        J[:r, r:] = tri @ combo
    for _ in range(n + 1):
        theta = rng.uniform(0.0, np.pi)
        k, l = rng.choice(n, size=2, replace=False)
        G = np.eye(n)
        c, s = np.cos(theta), np.sin(theta)
        G[k, k] = c
        G[l, l] = c
        G[k, l] = -s
        G[l, k] = s
        J = G @ J
    return J


def thicken(A, delta):
    """Interval matrix [a - delta, a + delta] around each real entry."""
    if delta < 0:
        raise InvalidParamsError("delta must be >= 0")
    A = np.asarray(A, dtype=float)
    return IntervalMatrix(
        [[Interval(v - delta, v + delta) for v in row] for row in A]
    )
