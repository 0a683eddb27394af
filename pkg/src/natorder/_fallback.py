"""numpy implementations of the hot loops.

Used when the compiled extension is missing or ``NATORDER_PURE_PYTHON=1``.
Integer kernels switch to Python ints (``dtype=object``) whenever an a-priori
magnitude bound says int64 could overflow, so results are always exact.
"""

from __future__ import annotations

import numpy as np

_INT64_SAFE = 2**62


def _ring_mul(x, y, T2):
    # x, y: (N, d); T2: (d*d, d)
    n, d = x.shape
    outer = (x[:, :, None] * y[:, None, :]).reshape(n, d * d)
    return outer @ T2


def _apply(x, M):
    # column convention: coords of M(x) = M @ x
    return x @ M.T


def _det(mat, T2):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return _ring_mul(mat[0][0], mat[1][1], T2) - _ring_mul(mat[0][1], mat[1][0], T2)
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = _ring_mul(mat[0][j], _det(minor, T2), T2)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def magnitude_bound(T, S, G, coeff_max: int, n_r: int) -> int:
    """Crude upper bound on any intermediate of :func:`reduced_norms`."""
    d = T.shape[0]
    s = max(int(np.abs(S[j]).sum(axis=1).max()) for j in range(S.shape[0]))
    g = int(np.abs(G).sum(axis=1).max())
    t = int(np.abs(T).max()) if T.size else 0
    entry = coeff_max * s * max(g, 1)
    mul = d * d * max(t, 1)
    bound = entry
    for k in range(2, n_r + 1):
        bound = k * mul * entry * bound
    return bound


def reduced_norms(T, S, G, coeffs, exact_objects: bool | None = None):
    """Reduced norms of a batch of natural-order elements.

    ``coeffs[k, i]`` is the Z-coordinate vector of ``c_i`` for element ``k``.
    Returns an ``(N, d)`` array of the reduced norm's coordinates.
    """
    coeffs = np.asarray(coeffs)
    N, n_r, d = coeffs.shape
    if exact_objects is None:
        cmax = int(np.abs(coeffs).max()) if coeffs.size else 0
        exact_objects = magnitude_bound(T, S, G, cmax, n_r) >= _INT64_SAFE
    dtype = object if exact_objects else np.int64
    T2 = np.asarray(T).reshape(d * d, d).astype(dtype)
    S = np.asarray(S).astype(dtype)
    G = np.asarray(G).astype(dtype)
    c = coeffs.astype(dtype)
    twisted = [[_apply(c[:, i], S[j]) for i in range(n_r)] for j in range(n_r)]
    mat = [[None] * n_r for _ in range(n_r)]
    for j in range(n_r):
        for i in range(n_r):
            v = twisted[j][i]
            row = i + j
            if row >= n_r:
                row -= n_r
                v = _apply(v, G)
            mat[row][j] = v
    return _det(mat, T2)


def _bareiss(m):
    m = [list(map(int, row)) for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def abs_norms(T, xs):
    """Absolute norm ``N_{K/Q}`` of each row of ``xs`` via its multiplication matrix."""
    T = np.asarray(T, dtype=np.int64)
    xs = np.asarray(xs)
    N, d = xs.shape
    if N == 0:
        return []
    xmax = int(np.abs(xs).max())
    tmax = int(np.abs(T).max())
    # Hadamard-style bound on every Bareiss intermediate
    entry = d * xmax * tmax
    safe = ((entry * d**0.5) ** d) ** 2 < _INT64_SAFE
    dtype = np.int64 if safe else object
    m = np.einsum("na,abc->ncb", xs.astype(dtype), T.astype(dtype)) if safe else _mult_matrices_obj(xs, T)
    out = [None] * N
    prev = np.ones(N, dtype=dtype)
    # rows that meet a zero pivot are redone with row swaps
    scalar_rows = np.zeros(N, dtype=bool)
    for k in range(d - 1):
        piv = m[:, k, k]
        scalar_rows |= piv == 0
        pk = np.where(piv == 0, 1, piv)
        for i in range(k + 1, d):
            m[:, i, k + 1 :] = (m[:, i, k + 1 :] * pk[:, None] - m[:, i, k, None] * m[:, k, k + 1 :]) // prev[:, None]
        prev = pk
    for r in range(N):
        if scalar_rows[r]:
            out[r] = abs_norms_scalar(T, xs[r])
        else:
            out[r] = int(m[r, d - 1, d - 1])
    return out


def _mult_matrices_obj(xs, T):
    N, d = xs.shape
    m = np.zeros((N, d, d), dtype=object)
    x = xs.astype(object)
    for a in range(d):
        for b in range(d):
            for c in range(d):
                if T[a, b, c]:
                    m[:, c, b] += x[:, a] * int(T[a, b, c])
    return m


def abs_norms_scalar(T, x):
    x = [int(v) for v in x]
    d = len(x)
    # column b of the matrix is x * e_b
    m = [[sum(x[a] * int(T[a, b, c]) for a in range(d)) for b in range(d)] for c in range(d)]
    return _bareiss(m)


def ml_decode(Y, H, X, chunk: int = 256):
    """``argmin_m ||Y_t - H_t X_m||_F^2`` for each trial ``t``; ties go to the lowest ``m``."""
    Y = np.asarray(Y, dtype=np.complex128)
    H = np.asarray(H, dtype=np.complex128)
    X = np.asarray(X, dtype=np.complex128)
    out = np.empty(Y.shape[0], dtype=np.int64)
    for s in range(0, Y.shape[0], chunk):
        hx = np.einsum("tij,mjk->tmik", H[s : s + chunk], X)
        diff = Y[s : s + chunk, None] - hx
        dist = (diff.real**2 + diff.imag**2).sum(axis=(2, 3))
        out[s : s + chunk] = np.argmin(dist, axis=1)
    return out


def abs_det2(mats):
    """``|det|^2`` of a stack of square complex matrices."""
    d = np.linalg.det(np.asarray(mats, dtype=np.complex128))
    return d.real**2 + d.imag**2
