"""Exact arithmetic in Z[t], t^4 = 2, and the unitary lattice it defines.

Writing x = a + b t with a, b in Z[sqrt(2)] (sqrt(2) = t^2), the bar
involution t -> -t gives the norm form |x|^2 = x xbar = a^2 - sqrt(2) b^2,
valued in Z[sqrt(2)].  Candidate lattice elements are square matrices over
Z[t] with barT M = I and det M = 1, both checked exactly.  Numeric witnesses
use the two archimedean pictures: t -> 2^(1/4) (real) and t -> i 2^(1/4)
(complex); under the latter every member lands in the compact unitary group,
which is what the discreteness story hinges on.  The complex embedding is
*only* numeric here: it does not preserve the real ring, so no exact claim is
phrased through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

ROOT = 2.0 ** 0.25
SIGMA_ROOT = 1j * ROOT


@dataclass(frozen=True)
class Sqrt2Int:
    """u + v sqrt(2) with integer u, v."""

    u: int
    v: int

    def __add__(self, other):
        return Sqrt2Int(self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return Sqrt2Int(self.u - other.u, self.v - other.v)

    def __mul__(self, other):
        return Sqrt2Int(self.u * other.u + 2 * self.v * other.v,
                        self.u * other.v + self.v * other.u)

    def __neg__(self):
        return Sqrt2Int(-self.u, -self.v)

    def __str__(self):
        return f"{self.u}{self.v:+}*sqrt2"


@dataclass(frozen=True)
class QuarticInt:
    """c0 + c1 t + c2 t^2 + c3 t^3 with t^4 = 2."""

    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0

    @classmethod
    def from_int(cls, n: int) -> "QuarticInt":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_sqrt2(cls, s: Sqrt2Int) -> "QuarticInt":
        return cls(s.u, 0, s.v, 0)

    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __add__(self, other):
        return QuarticInt(*(a + b for a, b in zip(self.coeffs(), other.coeffs())))

    def __sub__(self, other):
        return QuarticInt(*(a - b for a, b in zip(self.coeffs(), other.coeffs())))

    def __neg__(self):
        return QuarticInt(*(-a for a in self.coeffs()))

    def __mul__(self, other):
        a, b = self.coeffs(), other.coeffs()
        out = [0, 0, 0, 0]
        for i in range(4):
            if a[i] == 0:
                continue
            for j in range(4):
                if b[j] == 0:
                    continue
                k = i + j
                if k < 4:
                    out[k] += a[i] * b[j]
                else:
                    out[k - 4] += 2 * a[i] * b[j]  # t^4 = 2
        return QuarticInt(*out)

    def bar(self) -> "QuarticInt":
        """The involution t -> -t."""
        return QuarticInt(self.c0, -self.c1, self.c2, -self.c3)

    @property
    def is_zero(self) -> bool:
        return self.coeffs() == (0, 0, 0, 0)

    @property
    def is_one(self) -> bool:
        return self.coeffs() == (1, 0, 0, 0)

    def embed_real(self) -> float:
        return self.c0 + self.c1 * ROOT + self.c2 * ROOT**2 + self.c3 * ROOT**3

    def embed_sigma(self) -> complex:
        return (self.c0 + self.c1 * SIGMA_ROOT + self.c2 * SIGMA_ROOT**2
                + self.c3 * SIGMA_ROOT**3)

    def __str__(self):
        return f"({self.c0},{self.c1},{self.c2},{self.c3})"


ONE = QuarticInt(1)
ZERO = QuarticInt()


def norm_form(x: QuarticInt) -> Sqrt2Int:
    """x xbar = a^2 - sqrt(2) b^2, landing in Z[sqrt(2)]."""
    prod = x * x.bar()
    assert prod.c1 == 0 and prod.c3 == 0, "norm form left the real quadratic ring"
    return Sqrt2Int(prod.c0, prod.c2)


# -- matrices over Z[t] ------------------------------------------------------

Mat = tuple  # tuple of row tuples of QuarticInt


def mat_from_coeffs(rows) -> Mat:
    return tuple(tuple(QuarticInt(*entry) for entry in row) for row in rows)


def mat_to_coeffs(m: Mat):
    return [[list(entry.coeffs()) for entry in row] for row in m]


def mat_identity(n: int) -> Mat:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)
    )


def mat_mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ZERO
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_bar_transpose(m: Mat) -> Mat:
    n = len(m)
    return tuple(tuple(m[j][i].bar() for j in range(n)) for i in range(n))


def mat_det(m: Mat) -> QuarticInt:
    """Cofactor expansion; fine for the small ranks used here."""
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = ZERO
    for j in range(n):
        if m[0][j].is_zero:
            continue
        minor = tuple(row[:j] + row[j + 1 :] for row in m[1:])
        term = m[0][j] * mat_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def mat_sub_identity(m: Mat) -> Mat:
    n = len(m)
    return tuple(
        tuple(m[i][j] - (ONE if i == j else ZERO) for j in range(n)) for i in range(n)
    )


@dataclass
class MemberCert:
    gram_is_identity: bool
    det_is_one: bool

    @property
    def ok(self) -> bool:
        return self.gram_is_identity and self.det_is_one


def is_member(m: Mat) -> MemberCert:
    """barT M == I and det M == 1, both exactly."""
    n = len(m)
    gram = mat_mul(mat_bar_transpose(m), m)
    ident = mat_identity(n)
    return MemberCert(gram == ident, mat_det(m).is_one)


def is_unipotent(m: Mat) -> bool:
    """(M - I)^n == 0 exactly."""
    n = len(m)
    x = mat_sub_identity(m)
    acc = x
    for _ in range(n - 1):
        acc = mat_mul(acc, x)
    zero = tuple(tuple(ZERO for _ in range(n)) for _ in range(n))
    return acc == zero


def mat_inverse_member(m: Mat) -> Mat:
    # unitarity makes inversion free
    return mat_bar_transpose(m)


# -- search ------------------------------------------------------------------


def _entries_up_to(h: int) -> list[QuarticInt]:
    rng = range(-h, h + 1)
    return [QuarticInt(a, b, c, d) for a in rng for b in rng for c in rng for d in rng]


def search_members(h: int, n: int = 2) -> list[Mat]:
    """All members with every coefficient in [-h, h], by column pruning.

    Columns must have norm-form sums equal to 1, which cuts the raw
    coefficient space to a short list before the pairwise gram check.
    """
    if n != 2:
        raise ValueError("search is implemented for rank 2 only")
    entries = _entries_up_to(h)
    norms = {x: norm_form(x) for x in entries}
    target = Sqrt2Int(1, 0)
    columns = [
        (x, y)
        for x in entries
        for y in entries
        if norms[x] + norms[y] == target
    ]
    out = []
    for c1 in columns:
        for c2 in columns:
            cross = c1[0].bar() * c2[0] + c1[1].bar() * c2[1]
            if not cross.is_zero:
                continue
            m = ((c1[0], c2[0]), (c1[1], c2[1]))
            det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if det.is_one:
                out.append(m)
    out.sort(key=lambda m: tuple(e.coeffs() for row in m for e in row))
    return out


@dataclass
class WordCheck:
    word_length: int
    elements_examined: int
    unipotent_found: bool

    @property
    def ok(self) -> bool:
        return not self.unipotent_found


def _flatten(m: Mat) -> tuple:
    return tuple(c for row in m for e in row for c in e.coeffs())


def _unflatten(key: tuple) -> Mat:
    es = [QuarticInt(*key[i : i + 4]) for i in range(0, 16, 4)]
    return ((es[0], es[1]), (es[2], es[3]))


def _flat_mul(x: tuple, y: tuple) -> tuple:
    # 2x2 product over Z[t] on flat 16-int tuples; the BFS hot loop
    out = []
    for r in (0, 8):
        for c in (0, 4):
            a = x[r : r + 4]
            b = y[c : c + 4]
            a2 = x[r + 4 : r + 8]
            b2 = y[c + 8 : c + 12]
            out.extend(
                (
                    a[0] * b[0] + 2 * (a[1] * b[3] + a[2] * b[2] + a[3] * b[1])
                    + a2[0] * b2[0] + 2 * (a2[1] * b2[3] + a2[2] * b2[2] + a2[3] * b2[1]),
                    a[0] * b[1] + a[1] * b[0] + 2 * (a[2] * b[3] + a[3] * b[2])
                    + a2[0] * b2[1] + a2[1] * b2[0] + 2 * (a2[2] * b2[3] + a2[3] * b2[2]),
                    a[0] * b[2] + a[1] * b[1] + a[2] * b[0] + 2 * a[3] * b[3]
                    + a2[0] * b2[2] + a2[1] * b2[1] + a2[2] * b2[0] + 2 * a2[3] * b2[3],
                    a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0]
                    + a2[0] * b2[3] + a2[1] * b2[2] + a2[2] * b2[1] + a2[3] * b2[0],
                )
            )
    return tuple(out)


def unipotent_free_check(generators: list[Mat], word_length: int) -> WordCheck:
    """No product of at most `word_length` generators is a nontrivial unipotent.

    The generator set is closed under inversion first (inverses of members are
    their bar-transposes), so the ball searched is symmetric.  Ball elements
    have determinant one, and a determinant-one 2x2 matrix is unipotent
    exactly when its trace is 2 (Cayley-Hamilton both ways), so the cheap
    trace filter decides which elements need the full (M - I)^n test.
    """
    if word_length <= 0 or not generators:
        return WordCheck(word_length, 0, False)
    if len(generators[0]) != 2:
        raise ValueError("word check is implemented for rank 2 only")
    ident_key = _flatten(mat_identity(2))
    gens = []
    seen_g = set()
    for g in generators:
        for cand in (g, mat_inverse_member(g)):
            key = _flatten(cand)
            if key not in seen_g:
                seen_g.add(key)
                gens.append(key)
    ball = {ident_key}
    frontier = [ident_key]
    examined = 0
    bad = False
    for _ in range(word_length):
        new = []
        for x in frontier:
            for g in gens:
                y = _flat_mul(x, g)
                if y in ball:
                    continue
                ball.add(y)
                new.append(y)
                examined += 1
                trace_is_two = (
                    y[0] + y[12] == 2 and y[1] + y[13] == 0
                    and y[2] + y[14] == 0 and y[3] + y[15] == 0
                )
                if trace_is_two and y != ident_key and is_unipotent(_unflatten(y)):
                    bad = True
        frontier = new
    return WordCheck(word_length, examined, bad)


# -- numeric witnesses --------------------------------------------------------


@dataclass
class EmbeddingReport:
    unitarity_deviation: float
    max_sigma_modulus: float
    max_real_entry: float

    def ok(self, tol: float = 1e-9) -> bool:
        return self.unitarity_deviation <= tol and self.max_sigma_modulus <= 1 + tol


def embedding_witness(m: Mat) -> EmbeddingReport:
    """Evaluate a member in both archimedean pictures.

    The compact-side image must be unitary to within float roundoff because
    the exact gram identity maps through any embedding.
    """
    n = len(m)
    sig = [[e.embed_sigma() for e in row] for row in m]
    dev = 0.0
    for i in range(n):
        for j in range(n):
            acc = sum(sig[k][i].conjugate() * sig[k][j] for k in range(n))
            tgt = 1.0 if i == j else 0.0
            dev = max(dev, abs(acc - tgt))
    max_mod = max(abs(x) for row in sig for x in row)
    max_real = max(abs(e.embed_real()) for row in m for e in row)
    return EmbeddingReport(dev, max_mod, max_real)


def min_pairwise_distance(mats: list[Mat]) -> float:
    """Discreteness witness: smallest joint-embedding gap between members."""
    best = float("inf")
    pts = []
    for m in mats:
        pts.append(
            (
                [e.embed_real() for row in m for e in row],
                [e.embed_sigma() for row in m for e in row],
            )
        )
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            re_gap = max(abs(a - b) for a, b in zip(pts[i][0], pts[j][0]))
            si_gap = max(abs(a - b) for a, b in zip(pts[i][1], pts[j][1]))
            best = min(best, max(re_gap, si_gap))
    return best
