# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p elimination kernels.

All routines take a C-contiguous int64 matrix with entries in [0, p) and
modify it in place.  p must be below 2**31 so that p*p + p fits in int64.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _inv(int64_t a, int64_t p):
    # extended Euclid; a is a nonzero residue
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _find_pivot(int64_t[:, ::1] A, Py_ssize_t start, Py_ssize_t c):
    cdef Py_ssize_t i
    for i in range(start, A.shape[0]):
        if A[i, c] != 0:
            return i
    return -1


cdef void _swap_rows(int64_t[:, ::1] A, Py_ssize_t i, Py_ssize_t k):
    cdef Py_ssize_t j
    cdef int64_t t
    if i == k:
        return
    for j in range(A.shape[1]):
        t = A[i, j]
        A[i, j] = A[k, j]
        A[k, j] = t


def echelon(int64_t[:, ::1] A, int64_t p, bint reduced=False):
    """Gaussian elimination with first-nonzero column pivoting.

    Returns the list of pivot columns.  With ``reduced`` the result is the
    reduced row echelon form, otherwise only rows below each pivot are
    cleared.  Row updates are left unreduced until a row is read or would
    overflow; every entry is back in [0, p) on return.
    """
    cdef Py_ssize_t rows = A.shape[0], cols = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, nnz, start
    cdef int64_t inv, f, g, limit
    cdef cnp.ndarray[cnp.intp_t, ndim=1] nz_arr = np.empty(cols, dtype=np.intp)
    cdef cnp.intp_t[::1] nz = nz_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cnt_arr = np.zeros(rows, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_arr
    # updates a reduced row can absorb: p + t*(p-1)**2 must stay below 2**63
    limit = (9223372036854775807 - p) // ((p - 1) * (p - 1) + 1)
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        i = -1
        for k in range(r, rows):
            if cnt[k] and A[k, c] >= p:
                A[k, c] %= p
            if A[k, c] != 0:
                i = k
                break
        if i < 0:
            continue
        _swap_rows(A, i, r)
        cnt[i], cnt[r] = cnt[r], cnt[i]
        inv = _inv(A[r, c], p)
        nnz = 0
        for j in range(c, cols):
            if A[r, j] != 0:
                A[r, j] = ((A[r, j] % p) * inv) % p
                if A[r, j] != 0:
                    nz[nnz] = j
                    nnz += 1
        cnt[r] = 0
        start = 0 if reduced else r + 1
        for i in range(start, rows):
            if i == r:
                continue
            f = A[i, c]
            if f == 0:
                continue
            if cnt[i]:
                f %= p
                if f == 0:
                    A[i, c] = 0
                    continue
            if cnt[i] >= limit:
                for j in range(cols):
                    A[i, j] %= p
                cnt[i] = 0
            g = p - f
            for k in range(nnz):
                j = nz[k]
                A[i, j] += g * A[r, j]
            A[i, c] = 0
            cnt[i] += 1
        pivots.append(c)
        r += 1
    for i in range(rows):
        if cnt[i]:
            for j in range(cols):
                A[i, j] %= p
    return pivots


def bareiss_rank(int64_t[:, ::1] A, int64_t p):
    """Fraction-free (Bareiss) elimination; returns the rank.

    Each surviving row is replaced by ``(piv*row - row[c]*pivot_row)/prev``.
    Rows already zero in the pivot column would only be rescaled by the
    unit ``piv/prev``; that rescaling is skipped since it cannot change rank.
    """
    cdef Py_ssize_t rows = A.shape[0], cols = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, nnz
    cdef int64_t prev = 1, piv, inv_prev, f, a, b
    cdef cnp.ndarray[cnp.intp_t, ndim=1] nz_arr = np.empty(cols, dtype=np.intp)
    cdef cnp.intp_t[::1] nz = nz_arr
    for c in range(cols):
        if r >= rows:
            break
        i = _find_pivot(A, r, c)
        if i < 0:
            continue
        _swap_rows(A, i, r)
        piv = A[r, c]
        inv_prev = _inv(prev, p)
        nnz = 0
        for j in range(c + 1, cols):
            if A[r, j] != 0:
                nz[nnz] = j
                nnz += 1
        a = (piv * inv_prev) % p
        for i in range(r + 1, rows):
            f = A[i, c]
            if f == 0:
                continue
            # (piv*A[i,j] - f*A[r,j]) / prev, computed as a*A[i,j] + b*A[r,j]
            b = ((p - f) * inv_prev) % p
            for j in range(c + 1, cols):
                if A[i, j] != 0:
                    A[i, j] = (a * A[i, j]) % p
            for k in range(nnz):
                j = nz[k]
                A[i, j] = (A[i, j] + b * A[r, j]) % p
            A[i, c] = 0
        prev = piv
        r += 1
    return r
