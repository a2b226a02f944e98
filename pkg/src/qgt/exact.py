"""Dense linear algebra over the rationals.

Everything here is exact: entries are ``fractions.Fraction`` and no
floating-point value ever feeds back into a result. Floats are only used
as a shadow to pick large pivots, which keeps intermediate sizes down.
"""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Sequence

from .exceptions import SingularMatrix
from .graph import as_rational, format_rational


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self._rows = data
        self.shape = (len(data), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"Matrix({[[format_rational(x) for x in r] for r in self._rows]})"

    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self._rows))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def scale(self, c) -> "Matrix":
        c = as_rational(c)
        return Matrix([[c * x for x in r] for r in self._rows])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            cols = list(zip(*other._rows))
            return Matrix([[sum(map(_mul, r, col), Fraction(0)) for col in cols] for r in self._rows])
        v = [as_rational(x) for x in other]
        if len(v) != self.shape[1]:
            raise ValueError("dimension mismatch")
        return [sum(map(_mul, r, v), Fraction(0)) for r in self._rows]

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(min(self.shape))), Fraction(0))

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    def to_csv(self, rhs: Sequence | None = None) -> str:
        """Entries as "p/q" strings; ``rhs`` is appended as a final column."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for i, r in enumerate(self._rows):
            cells = [format_rational(x) for x in r]
            if rhs is not None:
                cells.append(format_rational(as_rational(rhs[i])))
            w.writerow(cells)
        return buf.getvalue()


def _mul(x, y):
    return x * y


def _shadow(x: Fraction) -> float:
    try:
        return abs(float(x))
    except OverflowError:
        return float("inf")


def _pick_pivot(a, col, start):
    best, best_mag = None, -1.0
    for r in range(start, len(a)):
        x = a[r][col]
        if x == 0:
            continue
        mag = _shadow(x)
        if mag > best_mag:
            best, best_mag = r, mag
    # every shadow underflowed to 0.0 still leaves best at the first nonzero
    return best


def _eliminate(a: list[list[Fraction]], ncols: int):
    """In-place Gauss-Jordan on the first ``ncols`` columns of ``a``.

    Returns the permutation sign; raises SingularMatrix on a zero column.
    """
    n = len(a)
    sign = 1
    for col in range(ncols):
        p = _pick_pivot(a, col, col)
        if p is None:
            raise SingularMatrix(f"no pivot in column {col}")
        if p != col:
            a[col], a[p] = a[p], a[col]
            sign = -sign
        piv = a[col][col]
        row = [x / piv for x in a[col]]
        a[col] = row
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], row)]
    return sign


def solve_linear(m: Matrix, v: Sequence) -> list[Fraction]:
    """Exact solution of ``m x = v`` for square nonsingular ``m``."""
    if not m.is_square():
        raise ValueError(f"solve_linear needs a square matrix, got {m.shape}")
    n = m.shape[0]
    if len(v) != n:
        raise ValueError("right-hand side has the wrong length")
    a = [list(r) + [as_rational(x)] for r, x in zip(m.rows, v)]
    _eliminate(a, n)
    return [a[i][n] for i in range(n)]


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse needs a square matrix")
    n = m.shape[0]
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    _eliminate(a, n)
    return Matrix([r[n:] for r in a])


def determinant(m: Matrix) -> Fraction:
    if not m.is_square():
        raise ValueError("determinant needs a square matrix")
    n = m.shape[0]
    a = [list(r) for r in m.rows]
    sign = 1
    det = Fraction(1)
    for col in range(n):
        p = _pick_pivot(a, col, col)
        if p is None:
            return Fraction(0)
        if p != col:
            a[col], a[p] = a[p], a[col]
            sign = -sign
        piv = a[col][col]
        det *= piv
        for r in range(col + 1, n):
            f = a[r][col] / piv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * det


class UniPoly:
    """Univariate polynomial with Fraction coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = format_rational(mag)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def char_poly(m: Matrix) -> UniPoly:
    """det(x I - m) by the Faddeev-LeVerrier recursion.

    The recursion divides by 1..n only, so over the rationals it is exact.
    """
    if not m.is_square():
        raise ValueError("char_poly needs a square matrix")
    n = m.shape[0]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    a = [list(r) for r in m.rows]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        c = coeffs[n - k + 1]
        for i in range(n):
            mk[i][i] += c
        # am = A @ M_k
        cols = list(zip(*mk))
        am = [[sum(map(_mul, row, col), Fraction(0)) for col in cols] for row in a]
        coeffs[n - k] = -sum((am[i][i] for i in range(n)), Fraction(0)) / k
        mk = am
    return UniPoly(coeffs)
