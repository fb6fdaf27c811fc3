"""Fallback elimination kernel, selected when the compiled module is absent.

Same contract as _kernel.pyx.  Row operations are vectorized with numpy, so
the fallback stays usable on the larger boundary matrices, just slower than
the compiled loops (see benchmarks/bench_kernel.py).
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"


def modp_rref(a: np.ndarray, p: int):
    """Reduced row echelon form of int64 array `a` modulo prime p, in place.

    Entries must already lie in [0, p) with p < 2**31, so every intermediate
    product fits in int64.  Returns (rank, pivot_columns); pivot selection
    matches the compiled kernel (first nonzero row at or below the cursor).
    """
    m, n = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        rows = np.nonzero(a[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return r, pivots


def sparse_int64_product_is_zero(n_rows, indptr, indices, data, vecs):
    """Exact check that A @ V == 0 (A sparse CSC, V dense), all int64-safe."""
    k = vecs.shape[1]
    acc = np.zeros((n_rows, k), dtype=np.int64)
    n_cols = len(indptr) - 1
    for c in range(n_cols):
        lo, hi = indptr[c], indptr[c + 1]
        if lo == hi:
            continue
        row_block = np.outer(data[lo:hi], vecs[c])
        np.add.at(acc, indices[lo:hi], row_block)
    return not np.any(acc)
