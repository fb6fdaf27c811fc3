"""The spanning-tuple resolution over F_p^n.

Degree k has one basis element per strictly sorted set of n+k lines whose
span is all of F_p^n; tuples with a repeated line or a proper span are zero,
and permutations act by sign.  The differential drops one line at a time with
alternating signs.  H_0 is identified with the top cycle space of the flag
complex by sending a spanning n-set to its apartment class; that
identification is certified, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import kernel
from .building import TitsBuilding
from .chain import ChainComplex
from .fields import QQ
from .matrix import ExactMatrix
from .projective import LineSpace


def sort_with_sign(indices) -> tuple[int, tuple[int, ...]]:
    """(parity sign of the sorting permutation, sorted tuple)."""
    indices = tuple(indices)
    inv = 0
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            if indices[a] > indices[b]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(indices))


def normalize_tuple(indices, space: LineSpace):
    """Canonical form of a line tuple: None if zero, else (sign, sorted set).

    Zero happens two ways: a repeated line (killed by antisymmetry) or a span
    that misses part of the ambient space.
    """
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        return None
    if not space.spans(indices):
        return None
    return sort_with_sign(indices)


class AshComplex:
    def __init__(self, n: int, p: int, max_lines: int = 15):
        self.n = n
        self.p = p
        self.lines = LineSpace(n, p)
        if self.lines.count > max_lines:
            raise ValueError(
                f"{self.lines.count} lines exceeds the build bound {max_lines}"
            )
        count = self.lines.count
        self.top_k = count - n
        # a non-spanning set lies in some hyperplane, which carries this many lines
        hyperplane_lines = (p ** (n - 1) - 1) // (p - 1)
        self.bases: list[list[tuple[int, ...]]] = []
        self.index: list[dict[tuple[int, ...], int]] = []
        spanning_prev: set[tuple[int, ...]] = set()
        for k in range(self.top_k + 1):
            size = n + k
            if size > hyperplane_lines:
                level = list(combinations(range(count), size))
            else:
                level = []
                for sub in combinations(range(count), size):
                    # a superset of a spanning set spans; check the cheap way first
                    if k > 0 and any(
                        sub[:i] + sub[i + 1 :] in spanning_prev for i in range(size)
                    ):
                        level.append(sub)
                    elif self.lines.rank_of(sub) == n:
                        level.append(sub)
            self.bases.append(level)
            self.index.append({s: i for i, s in enumerate(level)})
            spanning_prev = set(level)
        dims = [len(b) for b in self.bases]
        boundaries = []
        for k in range(1, self.top_k + 1):
            entries = {}
            idx = self.index[k - 1]
            for col, S in enumerate(self.bases[k]):
                for i in range(len(S)):
                    face = S[:i] + S[i + 1 :]
                    row = idx.get(face)
                    if row is not None:
                        entries[(row, col)] = 1 if i % 2 == 0 else -1
            boundaries.append(ExactMatrix(dims[k - 1], dims[k], QQ, entries))
        self.complex = ChainComplex(dims, boundaries, QQ)

    @property
    def dims(self) -> list[int]:
        return self.complex.dims

    def normalize(self, indices):
        return normalize_tuple(indices, self.lines)

    def act(self, perm, element: tuple[int, ...]):
        """Signed action of a line permutation on a basis element."""
        return sort_with_sign(tuple(perm[i] for i in element))

    def boundary_of_element(self, k: int, element: tuple[int, ...]) -> dict[tuple, int]:
        """Boundary of one degree-k basis element, as {face: sign}."""
        out = {}
        idx = self.index[k - 1]
        for i in range(len(element)):
            face = element[:i] + element[i + 1 :]
            if face in idx:
                out[face] = 1 if i % 2 == 0 else -1
        return out


def build_ash_complex(n: int, p: int, max_lines: int = 15) -> AshComplex:
    ash = AshComplex(n, p, max_lines)
    check = ash.complex.verify()
    if not check.ok:
        raise AssertionError(f"resolution differential failed d@d=0 at {check.degree}")
    return ash


@dataclass
class ExactnessCert:
    n: int
    p: int
    dims: list[int]
    homology: list[int]
    steinberg_dimension: int

    @property
    def ok(self) -> bool:
        return (
            all(h == 0 for h in self.homology[1:])
            and self.homology[0] == self.steinberg_dimension
        )


def exactness_check(n: int, p: int, ash: AshComplex | None = None,
                    building: TitsBuilding | None = None) -> ExactnessCert:
    """H_i = 0 for i >= 1 and dim H_0 = dim of the top cycle space."""
    ash = ash or build_ash_complex(n, p)
    building = building or TitsBuilding(n, p)
    return ExactnessCert(
        n=n,
        p=p,
        dims=list(ash.dims),
        homology=ash.complex.homology_dimensions(),
        steinberg_dimension=building.steinberg_space().dimension,
    )


@dataclass
class H0IsoCert:
    n: int
    p: int
    steinberg_dimension: int
    map_rank: int
    boundary_rank: int
    c0_dimension: int
    columns_are_cycles: bool
    kills_boundaries: bool
    witness: dict | None = field(default=None)

    @property
    def surjective(self) -> bool:
        return self.map_rank == self.steinberg_dimension

    @property
    def kernel_is_boundary_image(self) -> bool:
        # ker >= im d1 comes from kills_boundaries; dimensions force equality
        return (
            self.kills_boundaries
            and self.boundary_rank == self.c0_dimension - self.steinberg_dimension
        )

    @property
    def ok(self) -> bool:
        return self.columns_are_cycles and self.surjective and self.kernel_is_boundary_image


def h0_to_steinberg_map(ash: AshComplex, building: TitsBuilding) -> ExactMatrix:
    """Degree-0 basis elements to apartment classes, as a chain-valued matrix."""
    top = building.simplex_index[building.n - 2]
    entries = {}
    for col, frame in enumerate(ash.bases[0]):
        for row, v in building.apartment_class(frame).items():
            entries[(row, col)] = v
    return ExactMatrix(len(top), len(ash.bases[0]), QQ, entries)


def h0_to_steinberg(n: int, p: int, ash: AshComplex | None = None,
                    building: TitsBuilding | None = None) -> tuple[ExactMatrix, H0IsoCert]:
    ash = ash or build_ash_complex(n, p)
    building = building or TitsBuilding(n, p)
    amat = h0_to_steinberg_map(ash, building)
    st_dim = building.steinberg_space().dimension
    cycles = building.top_boundary().matmul(amat).is_zero()
    comp = amat.matmul(ash.complex.boundary(1))
    witness = None
    if not comp.is_zero():
        key = min(comp.entries)
        witness = {"column": key[1], "value": str(comp.entries[key])}
    cert = H0IsoCert(
        n=n,
        p=p,
        steinberg_dimension=st_dim,
        map_rank=kernel.rank(amat),
        boundary_rank=kernel.rank(ash.complex.boundary(1)),
        c0_dimension=ash.dims[0],
        columns_are_cycles=cycles,
        kills_boundaries=comp.is_zero(),
        witness=witness,
    )
    return amat, cert
