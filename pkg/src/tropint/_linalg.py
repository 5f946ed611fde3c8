"""Exact linear algebra over the rationals (small dense systems only)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def rref(rows: Sequence[Sequence], ncols: int) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form of an augmented or plain matrix.

    Only the first ``ncols`` columns are used for pivoting, so an augmented
    column can ride along. Returns the nonzero rows and pivot columns.
    """
    m = [[Fraction(v) for v in row] for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + [row for row in m[r:] if any(row)], pivots


def solve_affine(a: Sequence[Sequence], b: Sequence) -> Optional[Tuple[List[Fraction], Matrix]]:
    """Solve ``a x = b``; return a particular solution and a nullspace basis.

    Returns ``None`` when the system is inconsistent.
    """
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, n)
    for row in red[len(pivots):]:
        if row[n] != 0:
            return None
    x0 = [Fraction(0)] * n
    for row, c in zip(red, pivots):
        x0[c] = row[n]
    free = [c for c in range(n) if c not in pivots]
    basis: Matrix = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[fc]
        basis.append(v)
    return x0, basis


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]))[1])
