"""Exact linear algebra over Q on lists of Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from ._exceptions import SingularMatrixError
from ._types import RationalMatrix

__all__ = [
    "identity",
    "zeros",
    "matmul",
    "determinant",
    "inverse",
    "rank",
    "is_identity",
]


def identity(n: int) -> RationalMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> RationalMatrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    if a and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x?")
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        out_row = out[i]
        for k, aik in enumerate(row):
            if not aik:
                continue
            for j, bkj in enumerate(b[k]):
                if bkj:
                    out_row[j] += aik * bkj
    return out


def _echelon(m: RationalMatrix) -> tuple[RationalMatrix, int, int]:
    """Row echelon form; returns (matrix, rank, sign of the row permutation)"""
    m = [list(row) for row in m]
    rows = len(m)
    cols = len(m[0]) if m else 0
    r = 0
    sign = 1
    for c in range(cols):
        pivot: Optional[int] = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            sign = -sign
        inv = 1 / m[r][c]
        for i in range(r + 1, rows):
            if m[i][c]:
                factor = m[i][c] * inv
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return m, r, sign


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    ech, r, sign = _echelon([list(map(Fraction, row)) for row in m])
    if r < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= ech[i][i]
    return out


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    if not m:
        return 0
    return _echelon([list(map(Fraction, row)) for row in m])[1]


def inverse(m: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    """Gauss-Jordan inverse; raises SingularMatrixError when singular"""
    n = len(m)
    aug = [list(map(Fraction, row)) + identity(n)[i] for i, row in enumerate(m)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c]), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {c})")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def is_identity(m: Sequence[Sequence[Fraction]]) -> bool:
    return all(v == (1 if i == j else 0) for i, row in enumerate(m) for j, v in enumerate(row))
