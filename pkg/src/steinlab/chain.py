"""Chain complexes, chain maps, and their verification certificates.

Degrees run 0..K; ``boundary(k)`` maps degree k to degree k-1 and has shape
dims[k-1] x dims[k].  Homology is always taken over the complex's field.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernel
from .fields import QQ
from .matrix import ExactMatrix


@dataclass
class ComplexCheck:
    ok: bool
    degree: int | None = None  # first degree k with boundary(k) @ boundary(k+1) != 0
    entry: tuple | None = None  # ((row, col), value) witnessing the failure

    def __bool__(self):
        return self.ok


@dataclass
class ChainMapCheck:
    ok: bool
    degree: int | None = None
    column: int | None = None


class ChainComplex:
    def __init__(self, dims: list[int], boundaries: list[ExactMatrix], field=QQ):
        """`boundaries[k-1]` is the boundary matrix in degree k (k = 1..K)."""
        self.field = field
        self.dims = list(dims)
        self.boundaries = list(boundaries)
        if len(self.boundaries) != max(len(self.dims) - 1, 0):
            raise ValueError("need exactly one boundary matrix per positive degree")
        for k in range(1, len(self.dims)):
            b = self.boundaries[k - 1]
            if (b.rows, b.cols) != (self.dims[k - 1], self.dims[k]):
                raise ValueError(
                    f"boundary {k} has shape {b.rows}x{b.cols}, "
                    f"expected {self.dims[k - 1]}x{self.dims[k]}"
                )
            if b.field != field:
                raise ValueError("boundary field mismatch")

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def boundary(self, k: int) -> ExactMatrix:
        if 1 <= k <= self.top_degree:
            return self.boundaries[k - 1]
        rows = self.dims[k - 1] if 0 < k <= self.top_degree + 1 else 0
        cols = self.dims[k] if 0 <= k <= self.top_degree else 0
        return ExactMatrix.zero(rows, cols, self.field)

    def verify(self) -> ComplexCheck:
        """Check boundary(k) @ boundary(k+1) == 0 for every k; report first failure."""
        for k in range(1, self.top_degree):
            prod = self.boundary(k).matmul(self.boundary(k + 1))
            if not prod.is_zero():
                key = min(prod.entries)
                return ComplexCheck(False, degree=k + 1, entry=(key, prod.entries[key]))
        return ComplexCheck(True)

    def homology_dimensions(self) -> list[int]:
        """dim H_k = dim C_k - rank d_k - rank d_{k+1} for k = 0..K."""
        check = self.verify()
        if not check.ok:
            raise ValueError(
                f"not a chain complex: d@d != 0 at degree {check.degree}, entry {check.entry}"
            )
        ranks = [0] * (self.top_degree + 2)
        for k in range(1, self.top_degree + 1):
            ranks[k] = kernel.rank(self.boundary(k))
        return [self.dims[k] - ranks[k] - ranks[k + 1] for k in range(self.top_degree + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))


class ChainMap:
    """Degree-preserving family of matrices f_k between two complexes."""

    def __init__(self, source: ChainComplex, target: ChainComplex, mats: list[ExactMatrix]):
        if len(mats) != source.top_degree + 1:
            raise ValueError("need one matrix per source degree")
        if target.top_degree < source.top_degree:
            raise ValueError("target complex too short")
        for k, m in enumerate(mats):
            if (m.rows, m.cols) != (target.dims[k], source.dims[k]):
                raise ValueError(f"degree {k} matrix has wrong shape")
        self.source = source
        self.target = target
        self.mats = list(mats)

    def verify(self) -> ChainMapCheck:
        """Exact commutation d_target f_k == f_{k-1} d_source in every degree."""
        for k in range(1, self.source.top_degree + 1):
            lhs = self.target.boundary(k).matmul(self.mats[k])
            rhs = self.mats[k - 1].matmul(self.source.boundary(k))
            if lhs != rhs:
                diff = lhs.add(rhs.neg())
                col = min(c for (_, c) in diff.entries)
                return ChainMapCheck(False, degree=k, column=col)
        return ChainMapCheck(True)
