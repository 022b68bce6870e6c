"""Small exact linear algebra over ``Fraction``.

Matrices are lists of rows. Sizes here never exceed a few dozen, so plain
Gaussian elimination is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    width = len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [vi - factor * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of ``{v : A v = 0}``, one basis vector per free column."""
    if ncols == 0:
        return []
    reduced, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis: Matrix = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i * columns[i] == target``, or None."""
    n = len(columns)
    size = len(target)
    if n == 0:
        return [] if all(v == 0 for v in target) else None
    aug = [[columns[i][r] for i in range(n)] + [target[r]] for r in range(size)]
    reduced, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    out = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        out[p] = row[n]
    return out


def in_span(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    return solve(vectors, v) is not None


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[Fraction(0)] * (len(b[0]) if b else 0) for _ in a]
    return [[sum((row[k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for row in a]
