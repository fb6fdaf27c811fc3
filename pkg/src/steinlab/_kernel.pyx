# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernel.

One hot loop lives here: dense Gauss-Jordan reduction of an int64 matrix
modulo a word-size prime.  Everything else in the package is bookkeeping
around calls into this routine (or its pure-python twin in _kernel_py).
"""

from libc.stdint cimport int64_t

IMPLEMENTATION = "compiled"


cdef inline int64_t mod_inv(int64_t a, int64_t p) noexcept:
    # Fermat: a^(p-2) mod p, binary powering.  a is nonzero mod p, p prime.
    cdef int64_t result = 1
    cdef int64_t base = a % p
    cdef int64_t e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def modp_rref(int64_t[:, ::1] a, long long p):
    """Reduce `a` (entries already in [0, p)) to reduced row echelon form mod p.

    In place.  Returns (rank, pivot_columns).  Pivot choice is the first row
    at or below the cursor with a nonzero entry in the scanned column, so the
    result is deterministic and identical to the fallback implementation.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, v
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                v = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = v
        inv = mod_inv(a[r, c], p)
        if inv != 1:
            for j in range(n):
                if a[r, j] != 0:
                    a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(n):
                v = a[r, j]
                if v != 0:
                    a[i, j] = (a[i, j] - f * v) % p
                    if a[i, j] < 0:
                        a[i, j] += p
        pivots.append(c)
        r += 1
    return r, pivots


def sparse_int64_product_is_zero(
    Py_ssize_t n_rows,
    long long[::1] indptr,
    long long[::1] indices,
    int64_t[::1] data,
    int64_t[:, ::1] vecs,
):
    """Exact check that A @ V == 0 for A in CSC layout and dense integer V.

    Caller guarantees all intermediate values fit in int64 (see kernel.py for
    the bound computation).  Returns True iff the product is identically zero.
    """
    cdef Py_ssize_t n_cols = indptr.shape[0] - 1
    cdef Py_ssize_t k = vecs.shape[1]
    cdef Py_ssize_t c, t, j, r
    cdef int64_t val
    cdef int64_t[::1] buf
    import numpy as _np

    out = _np.zeros(n_rows * k, dtype=_np.int64)
    buf = out
    for c in range(n_cols):
        for t in range(indptr[c], indptr[c + 1]):
            r = indices[t]
            val = data[t]
            for j in range(k):
                if vecs[c, j] != 0:
                    buf[r * k + j] += val * vecs[c, j]
    for c in range(n_rows * k):
        if buf[c] != 0:
            return False
    return True
