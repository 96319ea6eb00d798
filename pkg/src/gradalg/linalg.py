"""Dense exact linear algebra over cyclotomic numbers.

Matrices are lists of rows of :class:`CycNum`.  Everything here is plain
Gauss-Jordan elimination; the matrices involved stay small.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .cyclo import CycNum, ONE, ZERO, as_cyc

Mat = list[list[CycNum]]


def mat(rows: Sequence[Sequence]) -> Mat:
    return [[as_cyc(x) for x in r] for r in rows]


def zeros(n: int, m: Optional[int] = None) -> Mat:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Mat:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(A: Mat) -> Mat:
    return [list(r) for r in zip(*A)] if A else []


def matmul(A: Mat, B: Mat) -> Mat:
    if not A:
        return []
    Bt = transpose(B)
    out = []
    for r in A:
        nz = [(k, a) for k, a in enumerate(r) if a]
        row = []
        for col in Bt:
            acc = ZERO
            for k, a in nz:
                b = col[k]
                if b:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def matvec(A: Mat, v: Sequence[CycNum]) -> list[CycNum]:
    out = []
    for r in A:
        acc = ZERO
        for a, b in zip(r, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def rref(A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns (leftmost pivots first)."""
    M = [list(r) for r in A]
    if not M:
        return [], []
    rows, cols = len(M), len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pr = next((i for i in range(r, rows) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = M[r][c].inv()
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y if y else x for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def kernel(A: Mat, ncols: Optional[int] = None) -> Mat:
    """Basis (as rows) of the right null space of ``A``, in RREF."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    R, piv = rref(A) if A else ([], [])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(R, piv):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return rref(basis)[0] if basis else []


def inverse(A: Mat) -> Mat:
    n = len(A)
    aug = [list(r) + e for r, e in zip(A, identity(n))]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return [r[n:] for r in R]


def is_invertible(A: Mat) -> bool:
    return bool(A) and len(A) == len(A[0]) and rank(A) == len(A)


def charpoly(A: Mat) -> list[CycNum]:
    """Coefficients c_0..c_n of det(x I - A) via Faddeev-LeVerrier."""
    n = len(A)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    M = zeros(n)
    for k in range(1, n + 1):
        M = matmul(A, M)
        for i in range(n):
            M[i][i] = M[i][i] + coeffs[n - k + 1]
        AM = matmul(A, M)
        tr = ZERO
        for i in range(n):
            tr = tr + AM[i][i]
        coeffs[n - k] = tr * CycNum(-1) / k
    return coeffs
