"""Outward-rounded interval arithmetic for scalars, boxes and matrices.

An interval [lo, hi] encloses every real it may stand for.  All arithmetic
keeps the containment contract under floating point by stepping each computed
bound one unit in the last place outward (``math.nextafter``), instead of
switching hardware rounding modes.  Results are therefore slightly wider than
optimal but portable and easy to test.

Elementary transcendental functions are evaluated with libm and widened by
two ulps, which covers the (at most ~1 ulp) error of the underlying
implementations.  Argument reduction for sin/cos works against a two-float
enclosure of pi.
"""

from __future__ import annotations

import math

from .errors import (
    DivisionByZeroInterval,
    DomainError,
    EmptyIntervalError,
    ShapeError,
    SingularDiagonalError,
)

_INF = math.inf

# Enclosure of pi: PI_LO < pi < PI_HI (adjacent doubles).
PI_LO = 3.141592653589793
PI_HI = 3.1415926535897936

TWO_PI_LO = 6.283185307179586
TWO_PI_HI = 6.2831853071795872

HALF_PI_LO = 1.5707963267948966
HALF_PI_HI = 1.5707963267948968


def _down(x):
    """One ulp toward -inf (identity on -inf)."""
    return math.nextafter(x, -_INF)


def _up(x):
    """One ulp toward +inf (identity on +inf)."""
    return math.nextafter(x, _INF)


def _down2(x):
    return math.nextafter(math.nextafter(x, -_INF), -_INF)


def _up2(x):
    return math.nextafter(math.nextafter(x, _INF), _INF)


class _EmptyInterval:
    """Distinguished empty set.  Only intersections produce it."""

    __slots__ = ()
    is_empty = True

    def __repr__(self):
        return "EMPTY"

    def _no_metric(self, *_):
        raise EmptyIntervalError("metric of the empty interval")

    wid = property(_no_metric)
    mid = property(_no_metric)
    mag = property(_no_metric)
    mig = property(_no_metric)


EMPTY = _EmptyInterval()


class Interval:
    """Closed interval [lo, hi] with lo <= hi; bounds are extended reals."""

    __slots__ = ("lo", "hi")
    is_empty = False

    def __init__(self, lo, hi=None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("NaN interval bound")
        if lo > hi:
            raise ValueError(f"invalid interval bounds [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo, hi):
        """Construct without validation; internal fast path."""
        iv = object.__new__(cls)
        iv.lo = lo
        iv.hi = hi
        return iv

    @classmethod
    def point(cls, v):
        v = float(v)
        return cls(v, v)

    @classmethod
    def pi(cls):
        return cls._raw(PI_LO, PI_HI)

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"

    def __eq__(self, other):
        return (
            isinstance(other, Interval)
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- metrics -----------------------------------------------------------

    @property
    def wid(self):
        return self.hi - self.lo

    @property
    def mid(self):
        m = 0.5 * (self.lo + self.hi)
        if math.isinf(m) or math.isnan(m):
            # Guard against overflow of lo + hi on huge finite bounds.
            m = 0.5 * self.lo + 0.5 * self.hi
        return m

    @property
    def mag(self):
        """Magnitude: max absolute value over the interval."""
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self):
        """Mignitude: min absolute value, 0 when the interval contains 0."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def metrics(self):
        """All four scalar metrics as a dict."""
        return {"wid": self.wid, "mid": self.mid, "mag": self.mag, "mig": self.mig}

    # -- predicates ---------------------------------------------------------

    def contains(self, x):
        return self.lo <= x <= self.hi

    def contains_zero(self):
        return self.lo <= 0.0 <= self.hi

    def subset_of(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def subset_of_interior(self, other):
        return other.lo < self.lo and self.hi < other.hi

    # -- set operations ------------------------------------------------------

    def intersect(self, other):
        lo = self.lo if self.lo > other.lo else other.lo
        hi = self.hi if self.hi < other.hi else other.hi
        if lo > hi:
            return EMPTY
        return Interval._raw(lo, hi)

    def hull(self, other):
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(_down(self.lo + other.lo), _up(self.hi + other.hi))
        v = float(other)
        return Interval._raw(_down(self.lo + v), _up(self.hi + v))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(_down(self.lo - other.hi), _up(self.hi - other.lo))
        v = float(other)
        return Interval._raw(_down(self.lo - v), _up(self.hi - v))

    def __rsub__(self, other):
        v = float(other)
        return Interval._raw(_down(v - self.hi), _up(v - self.lo))

    def __mul__(self, other):
        if not isinstance(other, Interval):
            v = float(other)
            if v >= 0.0:
                return Interval._raw(_down(self.lo * v), _up(self.hi * v))
            return Interval._raw(_down(self.hi * v), _up(self.lo * v))
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        p1 = _prod(a, c)
        p2 = _prod(a, d)
        p3 = _prod(b, c)
        p4 = _prod(b, d)
        return Interval._raw(
            _down(min(p1, p2, p3, p4)), _up(max(p1, p2, p3, p4))
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Interval):
            other = Interval.point(other)
        if other.lo <= 0.0 <= other.hi:
            raise DivisionByZeroInterval(f"division by {other!r}")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        q1 = a / c
        q2 = a / d
        q3 = b / c
        q4 = b / d
        return Interval._raw(
            _down(min(q1, q2, q3, q4)), _up(max(q1, q2, q3, q4))
        )

    def __rtruediv__(self, other):
        return Interval.point(other) / self

    def sqr(self):
        """Tight square: [mig^2, mag^2]."""
        m = self.mig
        big = self.mag
        return Interval._raw(_down(m * m), _up(big * big))

    def pow_int(self, n):
        """Integer power; even exponents use the tight |x|-based form."""
        if n == 0:
            return Interval._raw(1.0, 1.0)
        if n < 0:
            return 1.0 / self.pow_int(-n)
        if n == 1:
            return Interval._raw(self.lo, self.hi)
        if n % 2 == 0:
            m, big = self.mig, self.mag
            return Interval._raw(_down2(m ** n), _up2(big ** n))
        return Interval._raw(_down2(self.lo ** n), _up2(self.hi ** n))

    # -- elementary functions ------------------------------------------------

    def exp(self):
        return Interval._raw(max(0.0, _down2(math.exp(self.lo))), _up2(math.exp(self.hi)))

    def log(self):
        if self.lo <= 0.0:
            raise DomainError(f"log of {self!r}")
        return Interval._raw(_down2(math.log(self.lo)), _up2(math.log(self.hi)))

    def sqrt(self):
        lo = self.lo
        if lo < 0.0:
            # Tolerate tiny negative smear created by outward rounding.
            if lo < -1e-12:
                raise DomainError(f"sqrt of {self!r}")
            lo = 0.0
        if self.hi < 0.0:
            raise DomainError(f"sqrt of {self!r}")
        return Interval._raw(
            max(0.0, _down(math.sqrt(lo))), _up(math.sqrt(self.hi))
        )

    def sin(self):
        lo, hi = self.lo, self.hi
        if hi - lo >= TWO_PI_HI:
            return Interval._raw(-1.0, 1.0)
        vlo = math.sin(lo)
        vhi = math.sin(hi)
        res_lo = min(vlo, vhi)
        res_hi = max(vlo, vhi)
        # Maxima at pi/2 + 2k*pi, minima at -pi/2 + 2k*pi.
        if _crosses_critical(lo, hi, HALF_PI_LO):
            res_hi = 1.0
        if _crosses_critical(lo, hi, -HALF_PI_HI):
            res_lo = -1.0
        return Interval._raw(max(-1.0, _down2(res_lo)), min(1.0, _up2(res_hi)))

    def cos(self):
        lo, hi = self.lo, self.hi
        if hi - lo >= TWO_PI_HI:
            return Interval._raw(-1.0, 1.0)
        vlo = math.cos(lo)
        vhi = math.cos(hi)
        res_lo = min(vlo, vhi)
        res_hi = max(vlo, vhi)
        # Maxima at 2k*pi, minima at pi + 2k*pi.
        if _crosses_critical(lo, hi, 0.0):
            res_hi = 1.0
        if _crosses_critical(lo, hi, PI_LO):
            res_lo = -1.0
        return Interval._raw(max(-1.0, _down2(res_lo)), min(1.0, _up2(res_hi)))

    def tan(self):
        lo, hi = self.lo, self.hi
        # Poles at pi/2 + k*pi; crossing one makes the image unbounded.
        if hi - lo >= PI_HI or _crosses_pole(lo, hi):
            return Interval._raw(-_INF, _INF)
        return Interval._raw(_down2(math.tan(lo)), _up2(math.tan(hi)))

    def asin(self):
        lo, hi = _clamp_unit(self, "asin")
        return Interval._raw(
            max(-HALF_PI_HI, _down2(math.asin(lo))),
            min(HALF_PI_HI, _up2(math.asin(hi))),
        )

    def acos(self):
        lo, hi = _clamp_unit(self, "acos")
        return Interval._raw(
            max(0.0, _down2(math.acos(hi))), min(PI_HI, _up2(math.acos(lo)))
        )

    def atan(self):
        return Interval._raw(_down2(math.atan(self.lo)), _up2(math.atan(self.hi)))


def _prod(a, b):
    # 0 * inf is 0 under interval range semantics.
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _crosses_critical(lo, hi, base):
    """True when base + 2k*pi lies in [lo, hi] for some integer k.

    Conservative by one ulp in each direction: reporting a crossing that
    misses the interval by ~1e-16 only widens the result.
    """
    k_min = math.ceil((lo - base) / TWO_PI_HI - 1e-12)
    return base + k_min * TWO_PI_LO <= hi + 1e-12


def _crosses_pole(lo, hi):
    k_min = math.ceil((lo - HALF_PI_LO) / PI_HI - 1e-12)
    return HALF_PI_LO + k_min * PI_LO <= hi + 1e-12


def _clamp_unit(iv, name):
    lo, hi = iv.lo, iv.hi
    if lo < -1.0:
        if lo < -1.0 - 1e-12:
            raise DomainError(f"{name} of {iv!r}")
        lo = -1.0
    if hi > 1.0:
        if hi > 1.0 + 1e-12:
            raise DomainError(f"{name} of {iv!r}")
        hi = 1.0
    if lo > hi:
        raise DomainError(f"{name} of {iv!r}")
    return lo, hi


def atan2(y, x):
    """Interval atan2; whole branch range when the box touches the cut."""
    if not isinstance(y, Interval):
        y = Interval.point(y)
    if not isinstance(x, Interval):
        x = Interval.point(x)
    crosses_cut = y.lo <= 0.0 <= y.hi and x.lo < 0.0
    contains_origin = y.contains_zero() and x.contains_zero()
    if crosses_cut or contains_origin:
        return Interval._raw(-PI_HI, PI_HI)
    corners = (
        math.atan2(y.lo, x.lo),
        math.atan2(y.lo, x.hi),
        math.atan2(y.hi, x.lo),
        math.atan2(y.hi, x.hi),
    )
    return Interval._raw(
        max(-PI_HI, _down2(min(corners))), min(PI_HI, _up2(max(corners)))
    )


class IntervalBox:
    """Cartesian product of intervals; the working unit of the paver."""

    __slots__ = ("components",)

    def __init__(self, components):
        self.components = tuple(components)

    @classmethod
    def from_bounds(cls, bounds):
        """Build from an iterable of (lo, hi) pairs."""
        return cls(Interval(lo, hi) for lo, hi in bounds)

    @classmethod
    def point(cls, values):
        return cls(Interval.point(v) for v in values)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, IntervalBox) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "Box(" + ", ".join(repr(c) for c in self.components) + ")"

    def bounds(self):
        return [(c.lo, c.hi) for c in self.components]

    @property
    def wid(self):
        """Width of a box: the largest component width."""
        return max(c.hi - c.lo for c in self.components)

    @property
    def mid(self):
        return tuple(c.mid for c in self.components)

    def widest_index(self):
        """Index of the widest component, lowest index on ties."""
        best, best_w = 0, -1.0
        for i, c in enumerate(self.components):
            w = c.hi - c.lo
            if w > best_w:
                best, best_w = i, w
        return best

    def contains_point(self, x):
        return all(c.lo <= v <= c.hi for c, v in zip(self.components, x))

    def subset_of(self, other):
        self._check_dim(other)
        return all(
            o.lo <= s.lo and s.hi <= o.hi
            for s, o in zip(self.components, other.components)
        )

    def subset_of_interior(self, other):
        """Strict inclusion on both sides of every component."""
        self._check_dim(other)
        return all(
            o.lo < s.lo and s.hi < o.hi
            for s, o in zip(self.components, other.components)
        )

    def intersect(self, other):
        """Componentwise intersection; None when any component is empty."""
        self._check_dim(other)
        out = []
        for s, o in zip(self.components, other.components):
            r = s.intersect(o)
            if r is EMPTY:
                return None
            out.append(r)
        return IntervalBox(out)

    def hull(self, other):
        self._check_dim(other)
        return IntervalBox(
            s.hull(o) for s, o in zip(self.components, other.components)
        )

    def split(self, i):
        """Bisect component i at its midpoint."""
        c = self.components[i]
        m = c.mid
        left = list(self.components)
        right = list(self.components)
        left[i] = Interval._raw(c.lo, m)
        right[i] = Interval._raw(m, c.hi)
        return IntervalBox(left), IntervalBox(right)

    def translate(self, center):
        """self - center, componentwise (outward rounded)."""
        return IntervalBox(
            c - v for c, v in zip(self.components, center)
        )

    def scale(self, factor):
        return IntervalBox(c * factor for c in self.components)

    def shift(self, center):
        """center + self, componentwise (outward rounded)."""
        return IntervalBox(
            c + v for c, v in zip(self.components, center)
        )

    def concat(self, other):
        return IntervalBox(self.components + other.components)

    def permute(self, order):
        return IntervalBox(self.components[i] for i in order)

    def restrict(self, indices):
        return IntervalBox(self.components[i] for i in indices)

    def _check_dim(self, other):
        if len(other.components) != len(self.components):
            raise ShapeError(
                f"box dimensions differ: {len(self.components)} vs {len(other.components)}"
            )


def hausdorff_distance(a, b):
    """Box metric used by the inflation loop: max over components of the
    larger endpoint displacement."""
    if len(a) != len(b):
        raise ShapeError("box dimensions differ")
    d = 0.0
    for s, o in zip(a.components, b.components):
        d = max(d, abs(s.lo - o.lo), abs(s.hi - o.hi))
    return d


class IntervalMatrix:
    """Dense interval matrix, row-major list of lists of Interval."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != self.cols:
                raise ShapeError("ragged interval matrix")
        self.entries = entries

    @classmethod
    def from_bounds(cls, lo_rows, hi_rows):
        return cls(
            [
                [Interval(lo, hi) for lo, hi in zip(lr, hr)]
                for lr, hr in zip(lo_rows, hi_rows)
            ]
        )

    @classmethod
    def from_real(cls, matrix):
        """Degenerate interval matrix from a real one."""
        return cls([[Interval.point(v) for v in row] for row in matrix])

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[Interval._raw(0.0, 0.0) for _ in range(cols)] for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, IntervalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(repr(e) for e in row) for row in self.entries
        )
        return f"IntervalMatrix({self.rows}x{self.cols}: {body})"

    def is_square(self):
        return self.rows == self.cols

    def _require_square(self):
        if not self.is_square():
            raise ShapeError(f"square matrix required, got {self.rows}x{self.cols}")

    def transpose(self):
        return IntervalMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def submatrix(self, row_idx, col_idx):
        return IntervalMatrix(
            [[self.entries[i][j] for j in col_idx] for i in row_idx]
        )

    def diag_offdiag(self):
        """Split A = Diag(A) + OffDiag(A); requires a square matrix."""
        self._require_square()
        n = self.rows
        zero = Interval._raw(0.0, 0.0)
        diag = [[zero] * n for _ in range(n)]
        off = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    diag[i][j] = self.entries[i][j]
                else:
                    off[i][j] = self.entries[i][j]
        return IntervalMatrix(diag), IntervalMatrix(off)

    def add(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("matrix shapes differ")
        return IntervalMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def matvec(self, box):
        """Interval matrix-vector product; encloses all real products."""
        if len(box) != self.cols:
            raise ShapeError(
                f"matvec shape mismatch: {self.rows}x{self.cols} times {len(box)}"
            )
        comps = box.components
        out = []
        for row in self.entries:
            acc = Interval._raw(0.0, 0.0)
            for e, c in zip(row, comps):
                acc = acc + e * c
            out.append(acc)
        return IntervalBox(out)

    def diag_inv_apply(self, box):
        """Componentwise v_i / A_ii for a diagonal matrix."""
        self._require_square()
        if len(box) != self.rows:
            raise ShapeError("diag_inv_apply dimension mismatch")
        out = []
        for i, c in enumerate(box.components):
            d = self.entries[i][i]
            if d.contains_zero():
                raise SingularDiagonalError(f"diagonal entry {i} contains zero: {d!r}")
            out.append(c / d)
        return IntervalBox(out)

    def left_mul_real(self, C):
        """Product C @ self for a real matrix C (list of rows or ndarray)."""
        crows = len(C)
        if len(C[0]) != self.rows:
            raise ShapeError("left_mul_real shape mismatch")
        out = []
        for i in range(crows):
            ci = C[i]
            row = []
            for j in range(self.cols):
                acc = Interval._raw(0.0, 0.0)
                for k in range(self.rows):
                    acc = acc + self.entries[k][j] * float(ci[k])
                row.append(acc)
            out.append(row)
        return IntervalMatrix(out)

    def mid_matrix(self):
        return [[e.mid for e in row] for row in self.entries]

    def rad_matrix(self):
        return [[0.5 * (e.hi - e.lo) for e in row] for row in self.entries]

    def mag_matrix(self):
        return [[e.mag for e in row] for row in self.entries]

    def mig_matrix(self):
        return [[e.mig for e in row] for row in self.entries]


def matvec_real(C, box):
    """Product C @ box for a real matrix C, with outward rounding."""
    ncols = len(C[0])
    if len(box) != ncols:
        raise ShapeError("matvec_real shape mismatch")
    comps = box.components
    out = []
    for row in C:
        acc = Interval._raw(0.0, 0.0)
        for c, v in zip(comps, row):
            acc = acc + c * float(v)
        out.append(acc)
    return IntervalBox(out)
