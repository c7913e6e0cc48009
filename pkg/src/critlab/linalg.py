"""Row reduction over exact fields (Fraction or field elements from critlab.fields)."""

from __future__ import annotations

from fractions import Fraction

from .fields import simplify


def _clean(x):
    return x if isinstance(x, (int, Fraction)) else simplify(x)


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [[_clean(x) for x in r] for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(A)):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if not isinstance(A[r][c], int) else Fraction(1, A[r][c])
        A[r] = [_clean(x * inv) if x != 0 else 0 for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [_clean(x - f * y) if y != 0 else x for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def nullspace(rows: list[list], ncols: int | None = None) -> list[list]:
    """Basis of {v : row . v = 0 for every row}."""
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    ncols = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = _clean(-row[fc])
        basis.append(v)
    return basis


def rank(rows: list[list]) -> int:
    return len(rref(rows)[1])


def transpose(M: list[list]) -> list[list]:
    return [list(col) for col in zip(*M)]


def matmul(A: list[list], B: list[list]) -> list[list]:
    Bt = transpose(B)
    return [[_clean(sum((x * y for x, y in zip(r, c) if x != 0 and y != 0), Fraction(0))) for c in Bt] for r in A]
