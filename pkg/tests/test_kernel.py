"""Rank/kernel engine: contract examples, cross-checks between the certified
modular path and plain exact elimination, and compiled/fallback parity."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinlab import kernel
from steinlab._kernel_py import modp_rref as modp_rref_py
from steinlab.fields import GF, QQ
from steinlab.kernel import exact_rref, kernel_from_rref
from steinlab.matrix import ExactMatrix


def test_rank_identity_q():
    assert kernel.rank(ExactMatrix.identity(3, QQ)) == 3


def test_rank_proportional_rows_q():
    assert kernel.rank(ExactMatrix.from_rows([[1, 2], [2, 4]], QQ)) == 1


def test_rank_equal_rows_f2():
    assert kernel.rank(ExactMatrix.from_rows([[1, 1], [1, 1]], GF(2))) == 1


def test_kernel_rank_one():
    vecs = kernel.kernel_basis(ExactMatrix.from_rows([[1, 2], [2, 4]], QQ))
    assert len(vecs) == 1
    (v,) = vecs
    # proportional to (2, -1)
    assert v[0] * (-1) == v[1] * 2


def test_kernel_identity_empty():
    assert kernel.kernel_basis(ExactMatrix.identity(2, QQ)) == []


def test_kernel_zero_matrix():
    assert len(kernel.kernel_basis(ExactMatrix.zero(2, 3, QQ))) == 3


def _random_matrix(rng, rows, cols, field, density=0.6, span=5):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                entries[(r, c)] = rng.randrange(-span, span + 1)
    return ExactMatrix(rows, cols, field, entries)


@given(st.integers(0, 2**63 - 1))
def test_rational_reconstruction_roundtrip(seed):
    import random

    rng = random.Random(seed)
    p = 2147483647
    num = rng.randint(-30000, 30000)
    den = rng.randint(1, 30000)
    from math import gcd

    g = gcd(abs(num), den)
    num, den = num // g if g else num, den // g if g else den
    if den == 0:
        den = 1
    x = num * pow(den, -1, p) % p
    rec = kernel._rational_reconstruct(x, p, kernel.isqrt((p - 1) // 2))
    assert rec == Fraction(num, den)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7), st.integers(1, 7))
def test_certified_matches_exact_elimination(seed, rows, cols):
    import random

    rng = random.Random(seed)
    m = _random_matrix(rng, rows, cols, QQ)
    r_cert = kernel.rank(m)
    res = exact_rref(m.rows, m.cols, m.entries, QQ)
    assert r_cert == res.rank
    # rank + nullity = column count
    vecs = kernel.kernel_basis(m)
    assert len(vecs) == cols - r_cert
    for v in vecs:
        assert not m.apply(v), "kernel vector not annihilated"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6), st.integers(1, 6),
       st.sampled_from([2, 3, 5]))
def test_gf_rank_nullity(seed, rows, cols, p):
    import random

    rng = random.Random(seed)
    m = _random_matrix(rng, rows, cols, GF(p))
    r = kernel.rank(m)
    vecs = kernel.kernel_basis(m)
    assert r + len(vecs) == cols
    for v in vecs:
        assert not m.apply(v)


def test_exact_rref_is_canonical_q():
    m = ExactMatrix.from_rows(
        [[2, 4, 6], [1, 2, 4], [3, 6, 10]], QQ
    )
    res = exact_rref(m.rows, m.cols, m.entries, QQ)
    assert res.rank == 2
    assert res.pivots == [0, 2]
    assert res.rows[0] == {0: 1, 1: 2}
    assert res.rows[1] == {2: 1}


def test_kernel_from_rref_patterns():
    m = ExactMatrix.from_rows([[1, 2, 0], [0, 0, 1]], QQ)
    res = exact_rref(m.rows, m.cols, m.entries, QQ)
    vecs = kernel_from_rref(m.cols, res, QQ)
    assert vecs == [{1: 1, 0: -2}]


def test_compiled_and_fallback_agree():
    import random

    rng = random.Random(42)
    p = 10007
    for _ in range(25):
        rows, cols = rng.randint(1, 10), rng.randint(1, 10)
        a = np.array(
            [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)],
            dtype=np.int64,
        )
        b = a.copy()
        r1, piv1 = kernel._impl.modp_rref(a, p)
        r2, piv2 = modp_rref_py(b, p)
        assert (r1, list(piv1)) == (r2, list(piv2))
        assert np.array_equal(a, b)


def test_rank_with_fractional_entries():
    # [[1/2, 1/3], [3/2, 1]] is singular: det = 1/2 - 1/2
    singular = ExactMatrix.from_rows(
        [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]], QQ
    )
    assert kernel.rank(singular) == 1
    (v,) = kernel.kernel_basis(singular)
    assert not singular.apply(v)
    full = ExactMatrix.from_rows(
        [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 2]], QQ
    )
    assert kernel.rank(full) == 2
    # scaling rows leaves rank unchanged
    assert kernel.rank(full.scale(6)) == 2


def test_determinism_bit_identical():
    m = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]], QQ)
    runs = [kernel.kernel_basis(m) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]
    assert kernel.rank(m) == 2


def test_matrix_text_round_trip():
    m = ExactMatrix.from_rows(
        [[Fraction(1, 2), 0, -3], [0, Fraction(-7, 5), 0]], QQ
    )
    assert ExactMatrix.from_text(m.to_text()) == m
    g = ExactMatrix.from_rows([[1, 2], [0, 4]], GF(5))
    text = g.to_text()
    assert text.splitlines()[0] == "2 2 F5"
    assert ExactMatrix.from_text(text) == g


def test_matrix_rejects_out_of_range():
    with pytest.raises(IndexError):
        ExactMatrix(2, 2, QQ, {(2, 0): 1})


def test_no_stored_zeros():
    m = ExactMatrix(2, 2, QQ, {(0, 0): 0, (1, 1): 5})
    assert m.nnz() == 1
