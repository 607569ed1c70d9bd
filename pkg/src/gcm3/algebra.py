"""Exact linear algebra over the rationals for the small matrices used here.

Scalars are ``fractions.Fraction`` (always reduced, denominator > 0) or plain
``int``. Matrices are sequences of rows; nothing is mutated in place.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int | Fraction]]


class SingularMatrix(ArithmeticError):
    """Raised when a linear system has no unique solution."""


def to_fractions(m: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in m]


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def det(m: Matrix) -> Fraction:
    """Exact determinant by rational Gaussian elimination."""
    a = to_fractions(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("det needs a square matrix")
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return result


def solve_linear(m: Matrix, rhs: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    """Return the unique x with m x = rhs, exactly.

    Raises SingularMatrix when det(m) = 0.
    """
    n = len(m)
    if len(rhs) != n or any(len(row) != n for row in m):
        raise ValueError("solve_linear needs a square system")
    aug = [list(row) + [Fraction(b)] for row, b in zip(to_fractions(m), rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col] / p
                for c in range(col, n + 1):
                    aug[r][c] -= f * aug[col][c]
    return tuple(aug[i][n] / aug[i][i] for i in range(n))


def solve_linear3(m: Matrix, rhs: Sequence[int | Fraction]) -> tuple[Fraction, Fraction, Fraction]:
    if len(m) != 3:
        raise ValueError("solve_linear3 needs a 3x3 matrix")
    x, y, z = solve_linear(m, rhs)
    return x, y, z


def signature(m: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) squares of a symmetric form, computed exactly.

    Symmetric Gaussian elimination (congruence). When every remaining diagonal
    entry vanishes but an off-diagonal one does not, basis vector i is replaced
    by e_i + e_j, which puts 2*m_ij on the diagonal.
    """
    if not is_symmetric(m):
        raise ValueError("signature needs a symmetric matrix")
    a = to_fractions(m)
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and a[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # row/column operation e_i <- e_i + e_j
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        pivot_row = list(a[k])
        for r in active:
            f = a[r][k] / p
            if f:
                for c in active:
                    a[r][c] -= f * pivot_row[c]
            a[r][k] = Fraction(0)
            a[k][r] = Fraction(0)
    return pos, neg, n - pos - neg


def mat_vec(m: Matrix, v: Sequence[int | Fraction]) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def mat_mul(p: Matrix, q: Matrix) -> list[list]:
    cols = list(zip(*q))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in p]


def transpose(m: Matrix) -> list[list]:
    return [list(col) for col in zip(*m)]


def format_fraction(x: int | Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
