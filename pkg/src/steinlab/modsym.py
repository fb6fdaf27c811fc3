"""Unimodular symbol reduction and coset presentations for level-N congruence
subgroups of the integral 2x2 special linear group.

A symbol is a pair of lines in Q^2, each given by a primitive integer vector
with canonical sign.  Continued-fraction convergents telescope any symbol into
unimodular ones.  For level N the presentation has one generator per coset
(an element of the special linear group over Z/N since the level subgroup is
normal) and the classical two- and three-term relations; the dimension of the
quotient equals the first Betti number of the level-N subgroup.  Correctness
is anchored to an independent Euler-characteristic oracle:

    dim = 1 + |PSL_2(Z/N)| / 6   for N >= 2

because the image of the level subgroup in PSL_2(Z) is free and PSL_2(Z) has
Euler characteristic -1/6.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import kernel
from .fields import QQ
from .matrix import ExactMatrix

S_MAT = ((0, -1), (1, 0))
T_MAT = ((1, 1), (0, 1))
R_MAT = ((0, -1), (1, -1))  # S*T; has order 3 in PSL_2


def primitive_vector(v) -> tuple[int, int]:
    """Scale an integer pair to coprime entries with first nonzero positive."""
    a, b = int(v[0]), int(v[1])
    if a == 0 and b == 0:
        raise ValueError("zero vector spans no line")
    g = gcd(abs(a), abs(b))
    a, b = a // g, b // g
    lead = a if a != 0 else b
    if lead < 0:
        a, b = -a, -b
    return a, b


def pair_det(v, w) -> int:
    return v[0] * w[1] - v[1] * w[0]


@dataclass(frozen=True)
class RationalLinePair:
    """Two lines in Q^2 by canonical primitive vectors; det 0 iff equal."""

    v: tuple[int, int]
    w: tuple[int, int]

    @classmethod
    def of(cls, v, w) -> "RationalLinePair":
        return cls(primitive_vector(v), primitive_vector(w))

    @property
    def det(self) -> int:
        return pair_det(self.v, self.w)

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1


def _convergent_path(v: tuple[int, int]) -> list[tuple[int, int]]:
    """Primitive vectors (1,0)=u_0, ..., u_m=v with consecutive det +-1.

    These are the continued-fraction convergents of v[0]/v[1], valid for any
    sign of the entries via floor division.
    """
    a, b = v
    if b == 0:
        return [(1, 0)]
    path = [(1, 0)]
    # convergents p_k/q_k with p_{-1}=1, q_{-1}=0, p_0 = a_0, q_0 = 1
    p_prev, q_prev = 1, 0
    p_cur, q_cur = None, None
    x, y = a, b
    while True:
        q = x // y
        x, y = y, x - q * y
        if p_cur is None:
            p_cur, q_cur = q, 1
        else:
            p_cur, q_cur, p_prev, q_prev = (
                q * p_cur + p_prev,
                q * q_cur + q_prev,
                p_cur,
                q_cur,
            )
        path.append(primitive_vector((p_cur, q_cur)))
        if y == 0:
            break
    return path


def manin_reduce(pair: RationalLinePair) -> list[RationalLinePair]:
    """Telescoping list of unimodular pairs from pair.v to pair.w.

    Empty for det 0.  Consecutive output pairs share endpoints; the first
    starts at pair.v and the last ends at pair.w; every determinant is +-1.
    """
    if pair.det == 0:
        return []
    chain = list(reversed(_convergent_path(pair.v))) + _convergent_path(pair.w)
    out = []
    prev = chain[0]
    for cur in chain[1:]:
        if cur == prev:
            continue
        d = pair_det(prev, cur)
        assert abs(d) == 1, "convergent chain lost unimodularity"
        out.append(RationalLinePair(prev, cur))
        prev = cur
    assert prev == pair.w and (not out or out[0].v == pair.v)
    return out


# ---------------------------------------------------------------------------
# coset presentation


def _mat_mod(m, N):
    return tuple(tuple(x % N for x in row) for row in m)


def _mat_mul_mod(a, b, N):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) % N for j in range(2))
        for i in range(2)
    )


def sl2_order(N: int) -> int:
    if N == 1:
        return 1
    order = N**3
    x, d = N, 2
    seen = set()
    while d * d <= x:
        while x % d == 0:
            seen.add(d)
            x //= d
        d += 1
    if x > 1:
        seen.add(x)
    for q in seen:
        order = order // q**2 * (q**2 - 1)
    return order


def enumerate_sl2_mod(N: int) -> list[tuple]:
    """All of SL_2(Z/N), by closure under the standard generators."""
    ident = ((1 % N, 0), (0, 1 % N))
    seen = {ident}
    order = [ident]
    frontier = [ident]
    gens = [_mat_mod(S_MAT, N), _mat_mod(T_MAT, N)]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = _mat_mul_mod(x, g, N)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    new.append(y)
        frontier = new
    assert len(order) == sl2_order(N)
    return order


class ManinPresentation:
    """Free module on the cosets, modulo the order-2 and order-3 relations."""

    def __init__(self, N: int, max_cosets: int = 10**4):
        if N < 1:
            raise ValueError("level must be a positive integer")
        if sl2_order(N) > max_cosets:
            raise ValueError(f"coset count {sl2_order(N)} exceeds bound {max_cosets}")
        self.N = N
        self.cosets = enumerate_sl2_mod(N) if N > 1 else [((1, 0), (0, 1))]
        self.index = {m: i for i, m in enumerate(self.cosets)}
        n = len(self.cosets)
        entries: dict[tuple, int] = {}
        s = _mat_mod(S_MAT, N) if N > 1 else ((1, 0), (0, 1))
        r = _mat_mod(R_MAT, N) if N > 1 else ((1, 0), (0, 1))
        for i, g in enumerate(self.cosets):
            gs = self._right_mul(g, s)
            entries[(i, i)] = entries.get((i, i), 0) + 1
            entries[(i, gs)] = entries.get((i, gs), 0) + 1
            row = n + i
            gr = self._right_mul(g, r)
            grr = self._right_mul(self.cosets[gr], r)
            entries[(row, i)] = entries.get((row, i), 0) + 1
            entries[(row, gr)] = entries.get((row, gr), 0) + 1
            entries[(row, grr)] = entries.get((row, grr), 0) + 1
        self.relation_matrix = ExactMatrix(2 * n, n, QQ, entries)
        self._rref = None

    def _right_mul(self, g, m) -> int:
        if self.N == 1:
            return 0
        return self.index[_mat_mul_mod(g, m, self.N)]

    @property
    def coset_count(self) -> int:
        return len(self.cosets)

    def relation_rank(self) -> int:
        return kernel.rank(self.relation_matrix)

    def dimension(self) -> int:
        return self.coset_count - self.relation_rank()

    # -- quotient coordinates (used by the invariance/additivity checks) ----

    def _projection(self):
        if self._rref is None:
            self._rref = kernel.rref(self.relation_matrix)
        return self._rref

    def free_columns(self) -> list[int]:
        rr = self._projection()
        piv = set(rr.pivots)
        return [c for c in range(self.coset_count) if c not in piv]

    def project(self, vec: dict) -> tuple:
        """Coordinates of a generator combination in the free-generator basis."""
        rr = self._projection()
        free = self.free_columns()
        residual = dict(vec)
        for row, pc in zip(rr.rows, rr.pivots):
            c = residual.pop(pc, 0)
            if c:
                for j, v in row.items():
                    if j == pc:
                        continue
                    residual[j] = residual.get(j, 0) - c * v
        return tuple(QQ.coerce(residual.get(c, 0)) for c in free)

    def coset_of_pair(self, pair: RationalLinePair) -> tuple[int, int]:
        """(sign, generator index) for a unimodular pair."""
        if not pair.is_unimodular:
            raise ValueError("pair is not unimodular")
        v, w = pair.v, pair.w
        sign = 1
        if pair_det(v, w) == -1:
            v, w = w, v
            sign = -1
        m = ((v[0] % self.N, w[0] % self.N), (v[1] % self.N, w[1] % self.N))
        if self.N == 1:
            return sign, 0
        return sign, self.index[m]

    def symbol_class(self, pair: RationalLinePair) -> tuple:
        """Class of an arbitrary symbol in the quotient, after reduction."""
        acc: dict[int, int] = {}
        for uni in manin_reduce(pair):
            sign, idx = self.coset_of_pair(uni)
            acc[idx] = acc.get(idx, 0) + sign
        return self.project(acc)


def steinberg_coinvariants_dim(N: int) -> int:
    return ManinPresentation(N).dimension()


def euler_oracle_dim(N: int) -> int:
    """1 - chi of the level subgroup's image in PSL_2(Z) (free group)."""
    if N < 2:
        raise ValueError("oracle applies to N >= 2")
    psl = sl2_order(N) // (2 if N > 2 else 1)
    assert psl % 6 == 0
    return 1 + psl // 6


@dataclass
class LevelRow:
    N: int
    coset_count: int
    relation_rank: int
    dimension: int
    oracle: int | None

    @property
    def ok(self) -> bool:
        if self.N == 1:
            return self.dimension == 0
        return self.oracle == self.dimension and self.dimension > 0


def level_table(levels) -> list[LevelRow]:
    rows = []
    for N in levels:
        pres = ManinPresentation(N)
        rows.append(
            LevelRow(
                N=N,
                coset_count=pres.coset_count,
                relation_rank=pres.relation_rank(),
                dimension=pres.dimension(),
                oracle=euler_oracle_dim(N) if N > 1 else None,
            )
        )
    return rows


def nonvanishing_check(levels) -> bool:
    """dim > 0 for every level N > 1 in the range (N = 1 is excluded)."""
    return all(row.ok for row in level_table(levels) if row.N > 1)


def table_csv(rows: list[LevelRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["N", "cosets", "relation_rank", "dim_h1", "oracle", "pass"])
    for r in rows:
        writer.writerow(
            [r.N, r.coset_count, r.relation_rank, r.dimension,
             "" if r.oracle is None else r.oracle, r.ok]
        )
    return buf.getvalue()
