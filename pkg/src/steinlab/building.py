"""The flag complex of proper nonzero subspaces of F_p^n and its top homology.

Vertices are proper nonzero subspaces; a d-simplex is a strictly increasing
flag of d+1 of them, stored sorted by dimension.  The complex has dimension
n-2, its reduced homology is concentrated there, and the top cycle space is
taken as the concrete model of the Steinberg representation.  Apartment
classes of frames (spanning n-sets of lines) give explicit top cycles.

Reduced homology is handled by one augmented chain complex: degree 0 is the
empty simplex, degree d+1 holds the d-simplices, and the degree-1 boundary is
the augmentation.  Reduced Betti number b~_d is then H_{d+1} of this complex,
and the top cycle space is the kernel of its top boundary for every n >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from . import kernel
from .chain import ChainComplex
from .fields import QQ
from .matrix import ExactMatrix
from .projective import LineSpace, Subspace, enumerate_proper_subspaces, span


def _permutation_sign(perm) -> int:
    inv = sum(
        1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b]
    )
    return -1 if inv % 2 else 1


class TitsBuilding:
    def __init__(self, n: int, p: int, max_subspaces: int = 10**5):
        if not 2 <= n <= 4:
            raise ValueError("supported rank range is 2 <= n <= 4")
        self.n = n
        self.p = p
        self.lines = LineSpace(n, p)
        self.vertices: list[Subspace] = enumerate_proper_subspaces(n, p, max_subspaces)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}

        # strict inclusion lists, smaller dim -> larger dim
        above: list[list[int]] = [[] for _ in self.vertices]
        for i, small in enumerate(self.vertices):
            for j, big in enumerate(self.vertices):
                if small.dim < big.dim and big.contains(small):
                    above[i].append(j)

        # flags by dimension; vertex order inside a flag follows subspace dim
        self.simplices: list[list[tuple[int, ...]]] = [[(i,) for i in range(len(self.vertices))]]
        for _ in range(n - 2):
            nxt = []
            for flag in self.simplices[-1]:
                for j in above[flag[-1]]:
                    nxt.append(flag + (j,))
            self.simplices.append(nxt)
        self.simplex_index = [
            {s: i for i, s in enumerate(level)} for level in self.simplices
        ]

        self._augmented = self._build_augmented()
        check = self._augmented.verify()
        if not check.ok:
            raise AssertionError(f"building boundary failed d@d=0 at {check.degree}")

    # -- chain complexes -----------------------------------------------------

    def _build_augmented(self) -> ChainComplex:
        dims = [1] + [len(level) for level in self.simplices]
        boundaries = []
        aug = ExactMatrix(
            1, dims[1], QQ, {(0, c): 1 for c in range(dims[1])}
        )
        boundaries.append(aug)
        for d in range(1, len(self.simplices)):
            entries = {}
            for col, flag in enumerate(self.simplices[d]):
                for i in range(len(flag)):
                    face = flag[:i] + flag[i + 1 :]
                    row = self.simplex_index[d - 1][face]
                    sign = -1 if i % 2 else 1
                    entries[(row, col)] = sign
            boundaries.append(
                ExactMatrix(len(self.simplices[d - 1]), len(self.simplices[d]), QQ, entries)
            )
        return ChainComplex(dims, boundaries, QQ)

    def augmented_complex(self) -> ChainComplex:
        return self._augmented

    def top_boundary(self) -> ExactMatrix:
        """Boundary out of the top chain group (the augmentation when n = 2)."""
        return self._augmented.boundary(self.n - 1)

    def reduced_betti(self) -> list[int]:
        """Reduced Betti numbers b~_0 .. b~_{n-2}."""
        h = self._augmented.homology_dimensions()
        return h[1:]

    # -- frames and apartments ------------------------------------------------

    def frames(self) -> list[tuple[int, ...]]:
        """All spanning n-subsets of line indices, lexicographically ordered."""
        return [
            c
            for c in combinations(range(self.lines.count), self.n)
            if self.lines.spans(c)
        ]

    def apartment_class(self, frame) -> dict[int, int]:
        """Top cycle of a frame: signed sum over the maximal subset-chains.

        For each permutation sigma of the frame's n lines the flag
        span(L_sigma(1)) < span(L_sigma(1), L_sigma(2)) < ... (n-1 proper
        subspaces) contributes sgn(sigma).  For n = 2 this degenerates to
        [L_1] - [L_2].  The result is a cycle; callers may assert via
        `is_top_cycle`.
        """
        frame = tuple(frame)
        if len(frame) != self.n:
            raise ValueError(f"frame must have {self.n} lines")
        if len(set(frame)) != self.n or not self.lines.spans(frame):
            raise ValueError("lines do not form a frame (must span)")
        chain: dict[int, int] = {}
        vecs = [self.lines.vectors[i] for i in frame]
        for perm in permutations(range(self.n)):
            flag = []
            for k in range(1, self.n):
                sub = span([vecs[perm[i]] for i in range(k)], self.n, self.p)
                flag.append(self.vertex_index[sub])
            idx = self.simplex_index[self.n - 2][tuple(flag)]
            chain[idx] = chain.get(idx, 0) + _permutation_sign(perm)
        return {k: v for k, v in chain.items() if v}

    def is_top_cycle(self, chain: dict[int, int]) -> bool:
        vec = {c: QQ.coerce(v) for c, v in chain.items()}
        return not self.top_boundary().apply(vec)

    # -- simplicial group action ----------------------------------------------

    def vertex_permutation(self, mat) -> tuple[int, ...]:
        """Index permutation induced on vertices by an invertible matrix."""
        out = []
        for v in self.vertices:
            image_rows = []
            for row in v.rows:
                image_rows.append(
                    tuple(
                        sum(mat[r][c] * row[c] for c in range(self.n)) % self.p
                        for r in range(self.n)
                    )
                )
            out.append(self.vertex_index[Subspace.from_vectors(image_rows, self.n, self.p)])
        return tuple(out)

    def apply_to_top_chain(self, mat, chain: dict[int, int]) -> dict[int, int]:
        """Push a top-degree chain through the simplicial action of `mat`.

        Flags stay dimension-sorted under the action, so no sign appears.
        """
        vp = self.vertex_permutation(mat)
        d = self.n - 2
        out: dict[int, int] = {}
        for idx, coeff in chain.items():
            flag = self.simplices[d][idx]
            image = tuple(vp[v] for v in flag)
            out[self.simplex_index[d][image]] = coeff
        return out

    def apartment_matrix(self) -> ExactMatrix:
        """Columns are the apartment classes of all frames."""
        frames = self.frames()
        entries = {}
        for col, f in enumerate(frames):
            for row, v in self.apartment_class(f).items():
                entries[(row, col)] = v
        return ExactMatrix(len(self.simplices[self.n - 2]), len(frames), QQ, entries)

    def summary(self) -> dict:
        st = self.steinberg_space()
        return {
            "n": self.n,
            "p": self.p,
            "vertex_count": len(self.vertices),
            "simplex_counts": [len(level) for level in self.simplices],
            "reduced_betti": self.reduced_betti(),
            "steinberg_dimension": st.dimension,
        }

    def steinberg_space(self) -> "SteinbergSpace":
        basis = kernel.kernel_basis(self.top_boundary())
        return SteinbergSpace(self.n, self.p, self, basis)


@dataclass
class SteinbergSpace:
    """Top cycle space of the building; homology equals cycles up top."""

    n: int
    p: int
    building: TitsBuilding
    basis: list[dict]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def build_building(n: int, p: int) -> TitsBuilding:
    return TitsBuilding(n, p)


def steinberg_space(n: int, p: int) -> SteinbergSpace:
    return build_building(n, p).steinberg_space()


@dataclass
class SpanCheck:
    n: int
    p: int
    frame_count: int
    rank: int
    steinberg_dimension: int

    @property
    def ok(self) -> bool:
        return self.rank == self.steinberg_dimension


def apartment_span_check(building: TitsBuilding) -> SpanCheck:
    """Rank of all apartment classes vs the dimension of the top cycle space."""
    mat = building.apartment_matrix()
    st_dim = building.steinberg_space().dimension
    return SpanCheck(
        n=building.n,
        p=building.p,
        frame_count=mat.cols,
        rank=kernel.rank(mat),
        steinberg_dimension=st_dim,
    )
