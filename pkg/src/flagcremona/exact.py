"""Small exact linear algebra over the rationals.

Matrices are plain lists of rows whose entries are ``Fraction`` (ints are
accepted on input).  Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularMatrixError(ValueError):
    """Raised when an operation needs an invertible matrix and gets a singular one."""


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def scale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def _row_reduce(a: Matrix) -> tuple[Matrix, list[int], int]:
    """Gaussian elimination on a copy of ``a``.

    Returns the echelon form, the pivot columns and the sign of the row
    permutation used (for determinants).
    """
    m = [list(map(Fraction, row)) for row in a]
    nrows, ncols = shape(m)
    pivots: list[int] = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((k for k in range(r, nrows) if m[k][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            sign = -sign
        piv = m[r][c]
        for k in range(r + 1, nrows):
            f = m[k][c]
            if f:
                f /= piv
                rowr = m[r]
                m[k] = [x - f * y for x, y in zip(m[k], rowr)]
        pivots.append(c)
        r += 1
    return m, pivots, sign


def det(a: Matrix) -> Fraction:
    n, k = shape(a)
    if n != k:
        raise ValueError(f"determinant of a non-square {n}x{k} matrix")
    if n == 0:
        return Fraction(1)
    m, pivots, sign = _row_reduce(a)
    if len(pivots) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(_row_reduce(a)[1])


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SingularMatrixError on singular input."""
    n, k = shape(a)
    if n != k:
        raise ValueError(f"inverse of a non-square {n}x{k} matrix")
    aug = [list(map(Fraction, row)) + e for row, e in zip(a, identity(n))]
    for c in range(n):
        p = next((k for k in range(c, n) if aug[k][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular (det = 0)")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for k in range(n):
            if k != c and aug[k][c]:
                f = aug[k][c]
                aug[k] = [x - f * y for x, y in zip(aug[k], aug[c])]
    return [row[n:] for row in aug]


def proportional(a: Matrix, b: Matrix) -> Fraction | None:
    """Return c with a == c*b, or None if no such nonzero scalar exists.

    Compared by cross-multiplication, so sparse matrices are fine.
    """
    if shape(a) != shape(b):
        return None
    flat_a = [x for row in a for x in row]
    flat_b = [x for row in b for x in row]
    ref = next((k for k, y in enumerate(flat_b) if y != 0), None)
    if ref is None:
        return None
    if flat_a[ref] == 0:
        return None
    for x, y in zip(flat_a, flat_b):
        if x * flat_b[ref] != y * flat_a[ref]:
            return None
    return flat_a[ref] / flat_b[ref]


def is_scalar_identity(a: Matrix) -> Fraction | None:
    """Return c if a == c*I with c != 0, else None."""
    return proportional(a, identity(len(a)))


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
