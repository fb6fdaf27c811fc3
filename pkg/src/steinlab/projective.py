"""Lines, subspaces, and matrix groups over F_p^n.

Every line is stored by its normalized coordinate vector (first nonzero
coordinate scaled to 1); the global line order is lexicographic on these
vectors, and every orientation sign computed anywhere in the package refers
to this single order.  Subspaces are canonical reduced-row-echelon bases, so
subspace equality is tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import NamedTuple

from .fields import is_prime

Mat = tuple  # tuple of row tuples over F_p


class ProjLine(NamedTuple):
    coords: tuple[int, ...]
    index: int


def normalize_vector(vec, p: int) -> tuple[int, ...]:
    vec = tuple(x % p for x in vec)
    lead = next((x for x in vec if x), None)
    if lead is None:
        raise ValueError("zero vector spans no line")
    inv = pow(lead, p - 2, p)
    return tuple(x * inv % p for x in vec)


def rref_mod_p(vectors, n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Canonical RREF rows spanning the same subspace (zero rows dropped)."""
    rows = [list(v) for v in vectors]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows[:r])


class LineSpace:
    """All lines of F_p^n in the global lexicographic order."""

    def __init__(self, n: int, p: int, max_lines: int = 10**4):
        if n < 1:
            raise ValueError("n must be at least 1")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        count = (p**n - 1) // (p - 1)
        if count > max_lines:
            raise ValueError(f"line count {count} exceeds bound {max_lines}")
        self.n = n
        self.p = p
        vecs = []
        for lead in range(n):
            for rest in product(range(p), repeat=n - 1 - lead):
                vecs.append((0,) * lead + (1,) + rest)
        vecs.sort()
        assert len(vecs) == count
        self.vectors: tuple[tuple[int, ...], ...] = tuple(vecs)
        self.index: dict[tuple[int, ...], int] = {v: i for i, v in enumerate(vecs)}

    @property
    def count(self) -> int:
        return len(self.vectors)

    def line(self, i: int) -> ProjLine:
        return ProjLine(self.vectors[i], i)

    def lines(self) -> list[ProjLine]:
        return [ProjLine(v, i) for i, v in enumerate(self.vectors)]

    def index_of(self, vec) -> int:
        return self.index[normalize_vector(vec, self.p)]

    def apply_matrix(self, mat: Mat, i: int) -> int:
        """Image line index of line i under the matrix (columns act on coords)."""
        v = self.vectors[i]
        p = self.p
        w = tuple(sum(mat[r][c] * v[c] for c in range(self.n)) % p for r in range(self.n))
        return self.index[normalize_vector(w, p)]

    def permutation_of(self, mat: Mat) -> tuple[int, ...]:
        """The induced permutation of line indices; raises if not bijective."""
        perm = tuple(self.apply_matrix(mat, i) for i in range(self.count))
        if len(set(perm)) != self.count:
            raise ValueError("matrix does not act bijectively on lines")
        return perm

    def rank_of(self, indices) -> int:
        return len(rref_mod_p([self.vectors[i] for i in indices], self.n, self.p))

    def spans(self, indices) -> bool:
        return self.rank_of(indices) == self.n


@lru_cache(maxsize=64)
def line_space(n: int, p: int) -> LineSpace:
    return LineSpace(n, p)


def enumerate_lines(n: int, p: int, max_lines: int = 10**4) -> list[ProjLine]:
    return LineSpace(n, p, max_lines).lines()


@dataclass(frozen=True, order=True)
class Subspace:
    """A nonzero subspace of F_p^n as its canonical echelon basis."""

    n: int
    p: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def is_proper(self) -> bool:
        return self.dim < self.n

    @classmethod
    def from_vectors(cls, vectors, n: int, p: int) -> "Subspace":
        rows = rref_mod_p(vectors, n, p)
        if not rows:
            raise ValueError("zero subspace")
        return cls(n, p, rows)

    def contains_vector(self, vec) -> bool:
        v = [x % self.p for x in vec]
        for row in self.rows:
            c = next(i for i, x in enumerate(row) if x)
            f = v[c]
            if f:
                v = [(a - f * b) % self.p for a, b in zip(v, row)]
        return not any(v)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(self.rows + other.rows, self.n, self.p)

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.rows)


def span(line_set, n: int, p: int) -> Subspace:
    """Canonical subspace spanned by a set of lines (ProjLine or coord tuples)."""
    vecs = []
    for item in line_set:
        vecs.append(item.coords if isinstance(item, ProjLine) else tuple(item))
    if not vecs:
        raise ValueError("empty line set")
    return Subspace.from_vectors(vecs, n, p)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def enumerate_proper_subspaces(n: int, p: int, max_count: int = 10**5) -> list[Subspace]:
    """All subspaces of dimension 1..n-1 in a deterministic (dim, rows) order."""
    total = sum(gaussian_binomial(n, d, p) for d in range(1, n))
    if total > max_count:
        raise ValueError(f"subspace count {total} exceeds bound {max_count}")
    out = []
    for d in range(1, n):
        for pivots in combinations(range(n), d):
            # free positions: to the right of each pivot, excluding pivot columns
            free = [
                (r, c)
                for r in range(d)
                for c in range(pivots[r] + 1, n)
                if c not in pivots
            ]
            for values in product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for r in range(d):
                    rows[r][pivots[r]] = 1
                for (r, c), v in zip(free, values):
                    rows[r][c] = v
                out.append(Subspace(n, p, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda s: (s.dim, s.rows))
    assert len(out) == total
    return out


# -- matrix groups ----------------------------------------------------------


def mat_identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat, p: int) -> Mat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)) for i in range(n)
    )


def mat_det(m: Mat, p: int) -> int:
    n = len(m)
    rows = [list(r) for r in m]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c] % p
        inv = pow(rows[c][c], p - 2, p)
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv % p
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[c])]
    return det % p


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    order = p - 1
    factors = set()
    x, d = order, 2
    while d * d <= x:
        while x % d == 0:
            factors.add(d)
            x //= d
        d += 1
    if x > 1:
        factors.add(x)
    for g in range(2, p):
        if all(pow(g, order // q, p) != 1 for q in factors):
            return g
    raise ValueError("no primitive root found")


def transvection_generators(n: int, p: int) -> list[Mat]:
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
                m[i][j] = 1
                gens.append(tuple(tuple(r) for r in m))
    return gens


@dataclass(frozen=True)
class MatrixGroup:
    n: int
    p: int
    kind: str  # "SL" or "GL"
    generators: tuple[Mat, ...]

    def __post_init__(self):
        for g in self.generators:
            d = mat_det(g, self.p)
            if self.kind == "SL" and d != 1:
                raise ValueError("SL generator with determinant != 1")
            if d == 0:
                raise ValueError("singular generator")

    @classmethod
    def special_linear(cls, n: int, p: int) -> "MatrixGroup":
        return cls(n, p, "SL", tuple(transvection_generators(n, p)))

    @classmethod
    def general_linear(cls, n: int, p: int) -> "MatrixGroup":
        gens = transvection_generators(n, p)
        r = primitive_root(p)
        if r != 1:
            m = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            m[0][0] = r
            gens.append(tuple(tuple(row) for row in m))
        return cls(n, p, "GL", tuple(gens))

    def order_formula(self) -> int:
        n, p = self.n, self.p
        gl = p ** (n * (n - 1) // 2)
        for k in range(1, n + 1):
            gl *= p**k - 1
        return gl if self.kind == "GL" else gl // (p - 1)


def enumerate_group(group: MatrixGroup, max_order: int = 10**6) -> list[Mat]:
    """Breadth-first closure of the generators; deterministic element order."""
    ident = mat_identity(group.n)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in group.generators:
                y = mat_mul(x, g, group.p)
                if y not in seen:
                    if len(seen) >= max_order:
                        raise ValueError(f"group order exceeds bound {max_order}")
                    seen.add(y)
                    order.append(y)
                    new.append(y)
        frontier = new
    return order
