"""Small exact linear algebra over the rationals (Gaussian elimination)."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Q = Fraction


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_linear(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> Optional[list[Fraction]]:
    """One exact solution of A x = b, free variables set to 0; None if none."""
    if not A:
        return [] if all(v == 0 for v in b) else None
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    rref, pivots = _echelon(aug)
    n = len(A[0])
    for row in rref:
        if all(v == 0 for v in row[:n]) and row[n] != 0:
            return None
    x = [Q(0)] * n
    for r, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = rref[r][n]
    return x


def nullspace(A: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of the kernel of A."""
    if not A:
        return []
    rows = [list(map(Fraction, r)) for r in A]
    rref, pivots = _echelon(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * n
        v[fc] = Q(1)
        for r, c in enumerate(pivots):
            v[c] = -rref[r][fc]
        basis.append(v)
    return basis


def det_fraction(M: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return Q(1)
    a = [[Fraction(v) for v in row] for row in M]
    sign = 1
    prev = Q(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return Q(0)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Q(0)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
