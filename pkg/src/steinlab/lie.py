"""Betti numbers of strictly upper-triangular nilpotent Lie algebras.

The algebra nil(n) has basis e_ij (1 <= i < j <= n) with bracket
[e_ij, e_kl] = delta_jk e_il - delta_li e_kj.  Cochains are exterior powers
of the dual; on degree-1 duals the differential is (d xi)(x ^ y) = -xi([x, y]),
extended as a graded derivation.  Betti numbers are computed over Q by exact
rank of the coboundary matrices.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from . import kernel
from .fields import QQ
from .matrix import ExactMatrix


def _generators(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _degree_one_differential(n: int) -> dict[int, dict[tuple[int, int], int]]:
    """d xi_l = -sum_{a<b} c^l_{ab} xi_a ^ xi_b, as {l: {(a, b): coeff}}."""
    gens = _generators(n)
    gi = {g: k for k, g in enumerate(gens)}
    d1: dict[int, dict[tuple[int, int], int]] = {}
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            (i, j), (k, l) = gens[a], gens[b]
            targets = []
            if j == k:
                targets.append((gi[(i, l)], 1))
            if l == i:
                targets.append((gi[(k, j)], -1))
            for t, c in targets:
                d1.setdefault(t, {})[(a, b)] = d1.setdefault(t, {}).get((a, b), 0) - c
    return d1


def _sort_sign(seq: list[int]) -> int:
    inv = 0
    for x in range(len(seq)):
        for y in range(x + 1, len(seq)):
            if seq[x] > seq[y]:
                inv += 1
    return -1 if inv % 2 else 1


def coboundary_matrices(n: int) -> list[ExactMatrix]:
    """d_k : Lambda^k -> Lambda^{k+1} for k = 0..m-1, m = n(n-1)/2."""
    m = n * (n - 1) // 2
    d1 = _degree_one_differential(n)
    bases = [list(combinations(range(m), k)) for k in range(m + 1)]
    index = [{mono: i for i, mono in enumerate(bs)} for bs in bases]
    mats = []
    for k in range(m):
        entries: dict[tuple, int] = {}
        for col, mono in enumerate(bases[k]):
            for pos, t in enumerate(mono):
                rest = mono[:pos] + mono[pos + 1 :]
                outer_sign = -1 if pos % 2 else 1
                for (a, b), c in d1.get(t, {}).items():
                    if a in rest or b in rest:
                        continue
                    merged = tuple(sorted(rest + (a, b)))
                    s = outer_sign * c * _sort_sign([a, b, *rest])
                    row = index[k + 1][merged]
                    entries[(row, col)] = entries.get((row, col), 0) + s
        mats.append(ExactMatrix(len(bases[k + 1]), len(bases[k]), QQ, entries))
    return mats


def chevalley_eilenberg_betti(n: int) -> list[int]:
    """Betti numbers b_0..b_m of nil(n), m = n(n-1)/2.  Supported for 2 <= n <= 6."""
    if not 2 <= n <= 6:
        raise ValueError("supported range is 2 <= n <= 6")
    m = n * (n - 1) // 2
    mats = coboundary_matrices(n)
    ranks = [kernel.rank(mat) for mat in mats] + [0]
    betti = []
    for k in range(m + 1):
        prev = ranks[k - 1] if k >= 1 else 0
        betti.append(comb(m, k) - ranks[k] - prev)
    return betti
