"""Sparse exact matrices over Q or F_p.

Values are immutable after construction; no zero entry is ever stored, and
all entries live in the matrix's single scalar domain.  Serialization is a
line-oriented text format: a header ``rows cols field`` followed by one
``r c value`` triple per nonzero entry (values ``num/den`` over Q, residues
over F_p).
"""

from __future__ import annotations

from .fields import QQ, field_from_name


class ExactMatrix:
    __slots__ = ("rows", "cols", "field", "entries")

    def __init__(self, rows: int, cols: int, field=QQ, entries: dict | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        self.field = field
        clean = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
                v = field.coerce(v)
                if v != field.zero:
                    clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, data, field=QQ) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                entries[(r, c)] = v
        return cls(rows, cols, field, entries)

    @classmethod
    def identity(cls, n: int, field=QQ) -> "ExactMatrix":
        return cls(n, n, field, {(i, i): field.one for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int, field=QQ) -> "ExactMatrix":
        return cls(rows, cols, field)

    def at(self, r: int, c: int):
        return self.entries.get((r, c), self.field.zero)

    def to_rows(self) -> list[list]:
        out = [[self.field.zero] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols, self.rows, self.field, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def column(self, c: int) -> dict:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self) -> list[dict]:
        out: list[dict] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        by_col: dict[int, list] = {}
        for (k, c), v in other.entries.items():
            by_col.setdefault(k, []).append((c, v))
        acc: dict[tuple, object] = {}
        for (r, k), a in self.entries.items():
            for c, b in by_col.get(k, ()):
                key = (r, c)
                acc[key] = f.add(acc.get(key, f.zero), f.mul(a, b))
        return ExactMatrix(self.rows, other.cols, f, acc)

    __matmul__ = matmul

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse column vector (dict col -> value)."""
        f = self.field
        acc: dict[int, object] = {}
        by_col: dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        for c, x in vec.items():
            for r, v in by_col.get(c, ()):
                acc[r] = f.add(acc.get(r, f.zero), f.mul(v, x))
        return {r: v for r, v in acc.items() if v != f.zero}

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols, self.field) != (other.rows, other.cols, other.field):
            raise ValueError("shape/field mismatch")
        f = self.field
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = f.add(out.get(k, f.zero), v)
        return ExactMatrix(self.rows, self.cols, f, out)

    def scale(self, s) -> "ExactMatrix":
        f = self.field
        s = f.coerce(s)
        return ExactMatrix(
            self.rows, self.cols, f, {k: f.mul(s, v) for k, v in self.entries.items()}
        )

    def neg(self) -> "ExactMatrix":
        f = self.field
        return ExactMatrix(self.rows, self.cols, f, {k: f.neg(v) for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field.name}, nnz={self.nnz()})"

    # -- text format --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.field.name}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {self.field.format_value(self.entries[(r, c)])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExactMatrix":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        head = lines[0].split()
        rows, cols, field = int(head[0]), int(head[1]), field_from_name(head[2])
        entries = {}
        for ln in lines[1:]:
            r, c, val = ln.split()
            entries[(int(r), int(c))] = field.parse_value(val)
        return cls(rows, cols, field, entries)
