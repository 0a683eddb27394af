# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: batched exact reduced norms, absolute norms and ML decoding.

Integer routines run in int64 and flag any row whose arithmetic overflowed;
the Python selector recomputes flagged rows with arbitrary-precision ints.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    """
    static inline int ck_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int ck_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static inline int ck_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int ck_mul(long long a, long long b, long long *r) nogil
    int ck_add(long long a, long long b, long long *r) nogil
    int ck_sub(long long a, long long b, long long *r) nogil


cdef int ring_mul(const long long *x, const long long *y, long long *z, int d,
                  const int *ta, const int *tb, const int *tc, const long long *tv, int nt) noexcept nogil:
    cdef int k, c
    cdef long long p, q
    for c in range(d):
        z[c] = 0
    for k in range(nt):
        if x[ta[k]] == 0 or y[tb[k]] == 0:
            continue
        if ck_mul(x[ta[k]], y[tb[k]], &p):
            return 1
        if ck_mul(p, tv[k], &q):
            return 1
        if ck_add(z[tc[k]], q, &z[tc[k]]):
            return 1
    return 0


cdef int mat_vec(const long long *M, const long long *x, long long *y, int d) noexcept nogil:
    cdef int a, b
    cdef long long p
    for a in range(d):
        y[a] = 0
        for b in range(d):
            if M[a * d + b] == 0 or x[b] == 0:
                continue
            if ck_mul(M[a * d + b], x[b], &p):
                return 1
            if ck_add(y[a], p, &y[a]):
                return 1
    return 0


def reduced_norms(T, S, G, coeffs, perms, signs):
    """Reduced norms of natural-order elements as Z-vectors (with overflow flags).

    ``perms``/``signs`` enumerate the permutation expansion of an
    ``n_r x n_r`` determinant.
    """
    cdef cnp.int64_t[:, :, ::1] Tm = np.ascontiguousarray(T, dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] Sm = np.ascontiguousarray(S, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] Gm = np.ascontiguousarray(G, dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] C = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef cnp.int32_t[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int32)
    cdef cnp.int64_t[::1] SG = np.ascontiguousarray(signs, dtype=np.int64)
    cdef int N = C.shape[0], n = C.shape[1], d = C.shape[2], nperm = P.shape[0]
    out = np.zeros((N, d), dtype=np.int64)
    flags = np.zeros(N, dtype=np.uint8)
    cdef cnp.int64_t[:, ::1] O = out
    cdef cnp.uint8_t[::1] F = flags

    # sparse structure constants
    cdef int nt = 0, a, b, c, i, j, k, row, pi, r, bad
    for a in range(d):
        for b in range(d):
            for c in range(d):
                if Tm[a, b, c] != 0:
                    nt += 1
    cdef int *ta = <int *> malloc(max(nt, 1) * sizeof(int))
    cdef int *tb = <int *> malloc(max(nt, 1) * sizeof(int))
    cdef int *tc = <int *> malloc(max(nt, 1) * sizeof(int))
    cdef long long *tv = <long long *> malloc(max(nt, 1) * sizeof(long long))
    cdef long long *mat = <long long *> malloc(n * n * d * sizeof(long long))
    cdef long long *tmp = <long long *> malloc(d * sizeof(long long))
    cdef long long *prod = <long long *> malloc(d * sizeof(long long))
    cdef long long *nxt = <long long *> malloc(d * sizeof(long long))
    cdef long long *acc = <long long *> malloc(d * sizeof(long long))
    cdef long long *Sflat = <long long *> &Sm[0, 0, 0]
    cdef long long *Gflat = <long long *> &Gm[0, 0]
    try:
        k = 0
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    if Tm[a, b, c] != 0:
                        ta[k] = a
                        tb[k] = b
                        tc[k] = c
                        tv[k] = Tm[a, b, c]
                        k += 1
        with nogil:
            for r in range(N):
                bad = 0
                for j in range(n):
                    for i in range(n):
                        row = i + j
                        if row >= n:
                            row -= n
                            bad |= mat_vec(Sflat + j * d * d, <long long *> &C[r, i, 0], tmp, d)
                            bad |= mat_vec(Gflat, tmp, mat + (row * n + j) * d, d)
                        else:
                            bad |= mat_vec(Sflat + j * d * d, <long long *> &C[r, i, 0], mat + (row * n + j) * d, d)
                for c in range(d):
                    acc[c] = 0
                for pi in range(nperm):
                    if bad:
                        break
                    for c in range(d):
                        prod[c] = mat[(0 * n + P[pi, 0]) * d + c]
                    for i in range(1, n):
                        bad |= ring_mul(prod, mat + (i * n + P[pi, i]) * d, nxt, d, ta, tb, tc, tv, nt)
                        for c in range(d):
                            prod[c] = nxt[c]
                    for c in range(d):
                        if SG[pi] > 0:
                            bad |= ck_add(acc[c], prod[c], &acc[c])
                        else:
                            bad |= ck_sub(acc[c], prod[c], &acc[c])
                if bad:
                    F[r] = 1
                else:
                    for c in range(d):
                        O[r, c] = acc[c]
    finally:
        free(ta); free(tb); free(tc); free(tv)
        free(mat); free(tmp); free(prod); free(nxt); free(acc)
    return out, flags


def abs_norms(T, xs):
    """``N_{K/Q}(x)`` for each row via fraction-free elimination of the multiplication matrix."""
    cdef cnp.int64_t[:, :, ::1] Tm = np.ascontiguousarray(T, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef int N = X.shape[0], d = X.shape[1]
    out = np.zeros(N, dtype=np.int64)
    flags = np.zeros(N, dtype=np.uint8)
    cdef cnp.int64_t[::1] O = out
    cdef cnp.uint8_t[::1] F = flags
    cdef long long *m = <long long *> malloc(d * d * sizeof(long long))
    cdef int r, a, b, c, k, i, j, sw, bad, sign
    cdef long long p, q, prev, t
    try:
        with nogil:
            for r in range(N):
                bad = 0
                # m[c][b] = coefficient of e_c in x * e_b
                for c in range(d):
                    for b in range(d):
                        m[c * d + b] = 0
                for a in range(d):
                    if X[r, a] == 0:
                        continue
                    for b in range(d):
                        for c in range(d):
                            if Tm[a, b, c] != 0:
                                bad |= ck_mul(X[r, a], Tm[a, b, c], &p)
                                bad |= ck_add(m[c * d + b], p, &m[c * d + b])
                sign = 1
                prev = 1
                for k in range(d - 1):
                    if bad:
                        break
                    if m[k * d + k] == 0:
                        sw = -1
                        for i in range(k + 1, d):
                            if m[i * d + k] != 0:
                                sw = i
                                break
                        if sw < 0:
                            m[(d - 1) * d + d - 1] = 0
                            sign = 1
                            break
                        for j in range(d):
                            t = m[k * d + j]
                            m[k * d + j] = m[sw * d + j]
                            m[sw * d + j] = t
                        sign = -sign
                    for i in range(k + 1, d):
                        for j in range(k + 1, d):
                            bad |= ck_mul(m[i * d + j], m[k * d + k], &p)
                            bad |= ck_mul(m[i * d + k], m[k * d + j], &q)
                            bad |= ck_sub(p, q, &p)
                            m[i * d + j] = p // prev
                    prev = m[k * d + k]
                if bad:
                    F[r] = 1
                else:
                    O[r] = sign * m[(d - 1) * d + d - 1]
    finally:
        free(m)
    return out, flags


def ml_decode(Y, H, X):
    """Exhaustive ML decoding; the first codeword attaining the minimum wins."""
    cdef double complex[:, :, ::1] Ym = np.ascontiguousarray(Y, dtype=np.complex128)
    cdef double complex[:, :, ::1] Hm = np.ascontiguousarray(H, dtype=np.complex128)
    cdef double complex[:, :, ::1] Xm = np.ascontiguousarray(X, dtype=np.complex128)
    cdef int Nt = Ym.shape[0], nr = Ym.shape[1], T = Ym.shape[2]
    cdef int nt = Hm.shape[2], M = Xm.shape[0]
    out = np.empty(Nt, dtype=np.int64)
    cdef cnp.int64_t[::1] O = out
    cdef int t, m, i, j, k, best
    cdef double dist, bestd, re, im
    cdef double complex s
    with nogil:
        for t in range(Nt):
            best = 0
            bestd = 1e308
            for m in range(M):
                dist = 0.0
                for i in range(nr):
                    for k in range(T):
                        s = Ym[t, i, k]
                        for j in range(nt):
                            s = s - Hm[t, i, j] * Xm[m, j, k]
                        re = s.real
                        im = s.imag
                        dist += re * re + im * im
                    if dist >= bestd:
                        break
                if dist < bestd:
                    bestd = dist
                    best = m
            O[t] = best
    return out
