"""Exact Gaussian elimination over Q (``Fraction`` entries)."""

from fractions import Fraction


def rref(matrix, ncols=None):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    rows = [[Fraction(v) for v in row] for row in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(matrix):
    if not matrix:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix, ncols):
    """Basis of ``{v : M v = 0}``, one vector per free column, in column order.

    The vector for free column ``f`` is 1 at ``f``, 0 at every other free
    column, and its nonzero entries all sit at columns ``<= f``.
    """
    reduced, pivots = rref(matrix, ncols) if matrix else ([], [])
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def solve(matrix, rhs, ncols):
    """One solution of ``M v = rhs`` (free variables set to zero), or ``None``."""
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        v[p] = row[ncols]
    return v
