"""Exact determinants for small matrices over commutative rings and fields."""

from __future__ import annotations


def det(m):
    """Determinant of a square matrix given as a list of rows.

    Cofactor expansion for size <= 3 (division free, so it also works over
    rings such as ``Z[i]`` stored in a number field); Gaussian elimination with
    exact division above that.
    """
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        a, b, c = m
        return (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
    return _gauss_det([list(row) for row in m])


def _gauss_det(a):
    n = len(a)
    sign = 1
    acc = None
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return a[0][0] - a[0][0]
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        acc = p if acc is None else acc * p
        inv = p.inverse() if hasattr(p, "inverse") else 1 / p
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            f = a[r][col] * inv
            row_r, row_c = a[r], a[col]
            for k in range(col + 1, n):
                row_r[k] = row_r[k] - f * row_c[k]
            row_r[col] = row_r[col] - row_r[col]
    return acc if sign == 1 else -acc


def matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            s = a[i][0] * b[0][j]
            for k in range(1, inner):
                s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def solve(a, b):
    """Solve ``a x = b`` exactly for square nonsingular ``a`` over a field."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        inv = p.inverse() if hasattr(p, "inverse") else 1 / p
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]
