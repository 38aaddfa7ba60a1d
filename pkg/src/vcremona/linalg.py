"""Small exact matrix helpers over int and Fraction.

Matrices are tuples of row tuples. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple[tuple, ...]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def bilinear(gram: Sequence[Sequence], x: Sequence, y: Sequence):
    return sum(xi * gij * yj for xi, row in zip(x, gram) for gij, yj in zip(row, y))


def congruent(gram: Sequence[Sequence], basis_rows: Sequence[Sequence]) -> Matrix:
    """Gram matrix of the vectors given as coordinate rows: B G B^T."""
    return matmul(matmul(basis_rows, gram), transpose(basis_rows))


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def det(m: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact for int input)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    a[i][j] = num // prev
                else:
                    a[i][j] = Fraction(num) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Sequence[Sequence]) -> Matrix:
    """Exact inverse over the rationals; raises ZeroDivisionError when singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def solve(m: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...]:
    """Solve m x = rhs exactly for square nonsingular m."""
    return matvec(inverse(m), rhs)


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_integral(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_tuple(v) -> tuple[int, ...]:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        out.append(int(x))
    return tuple(out)
