"""Determinants over whatever scalar type the entries carry.

Rational entries (int / Fraction) are eliminated exactly; anything else goes
through numpy in complex or real double precision.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def det(rows: Sequence[Sequence]):
    """Determinant of a square matrix given as nested sequences."""
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    if all(is_exact(x) for r in rows for x in r):
        return det_exact(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    arr = np.array([[complex(x) for x in r] for r in rows])
    value = complex(np.linalg.det(arr))
    if all(not isinstance(x, complex) for r in rows for x in r):
        return value.real
    return value


def det_exact(rows: Sequence[Sequence]) -> Fraction:
    """Fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    sign = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        piv = m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / piv
            if f:
                row_r, row_c = m[r], m[col]
                for c in range(col + 1, n):
                    row_r[c] -= f * row_c[c]
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def solve_exact(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Exact solution of a x = b for a nonsingular rational matrix."""
    n = len(a)
    m = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        piv = m[col][col]
        m[col] = [x / piv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]
