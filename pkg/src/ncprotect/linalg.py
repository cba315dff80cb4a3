"""Exact linear algebra over GF(2^r): rank, determinant and linear solves.

Everything is Gaussian elimination with field-exact arithmetic; there are no
tolerances.  Matrices are plain lists of row lists of ints.
"""

from __future__ import annotations

from .galois import GF

__all__ = ["rank", "det", "solve", "is_independent", "matvec"]


def _eliminate(field: GF, rows: list[list[int]]) -> int:
    """In-place forward elimination; returns the rank."""
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [field.add(a, field.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def rank(field: GF, rows) -> int:
    return _eliminate(field, [list(row) for row in rows])


def det(field: GF, rows) -> int:
    """Determinant of a square matrix (over GF(2^r) sign bookkeeping is moot)."""
    work = [list(row) for row in rows]
    n = len(work)
    if any(len(row) != n for row in work):
        raise ValueError("determinant requires a square matrix")
    result = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if work[i][c] != 0), None)
        if pivot is None:
            return 0
        work[c], work[pivot] = work[pivot], work[c]
        result = field.mul(result, work[c][c])
        inv = field.inv(work[c][c])
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = field.mul(work[i][c], inv)
                work[i] = [field.add(a, field.mul(f, b)) for a, b in zip(work[i], work[c])]
    return result


def is_independent(field: GF, columns) -> bool:
    """True iff the given column vectors are linearly independent."""
    cols = list(columns)
    if not cols:
        return True
    rows = [[col[i] for col in cols] for i in range(len(cols[0]))]
    return rank(field, rows) == len(cols)


def solve(field: GF, a_rows, b) -> list[int] | None:
    """Solve A x = b.

    Returns the solution vector when the system is consistent, None when it is
    inconsistent.  Raises ValueError if the system is consistent but
    underdetermined (the callers rely on full column rank and treat ambiguity
    as a broken precondition).
    """
    m = len(a_rows)
    ncols = len(a_rows[0]) if m else 0
    aug = [list(row) + [bv] for row, bv in zip(a_rows, b)]
    r = 0
    pivots = []
    for c in range(ncols):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = field.inv(aug[r][c])
        aug[r] = [field.mul(inv, v) for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [field.add(a, field.mul(f, b2)) for a, b2 in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if aug[i][ncols] != 0:
            return None
    if r < ncols:
        raise ValueError("system is consistent but underdetermined")
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    return x


def matvec(field: GF, rows, x) -> list[int]:
    out = []
    for row in rows:
        acc = 0
        for a, b in zip(row, x):
            if a and b:
                acc ^= field.mul(a, b)
        out.append(acc)
    return out
