"""Dense matrices with polynomial entries."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import DimensionMismatch
from .poly import ZERO, Polynomial, is_homogeneous, NEG_INF


class GradedFrame:
    """Internal degrees of the target (rows) and source (columns) bases."""

    def __init__(self, row_degrees: Sequence[int], col_degrees: Sequence[int]):
        self.row_degrees = list(row_degrees)
        self.col_degrees = list(col_degrees)

    def __repr__(self) -> str:
        return f"GradedFrame(rows={self.row_degrees}, cols={self.col_degrees})"


class PolyMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], rows: Optional[int] = None, cols: Optional[int] = None):
        grid = [[_as_poly(e) for e in row] for row in entries]
        if rows is None:
            rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise DimensionMismatch("entry grid does not match the declared shape")
        self.rows = rows
        self.cols = cols
        self.entries: List[List[Polynomial]] = grid

    # constructors

    @classmethod
    def zeros(cls, m: int, n: int) -> PolyMatrix:
        return cls([[ZERO] * n for _ in range(m)], m, n)

    @classmethod
    def identity(cls, n: int) -> PolyMatrix:
        one = Polynomial.const(1)
        return cls([[one if i == j else ZERO for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def column(cls, values: Sequence[Polynomial]) -> PolyMatrix:
        return cls([[v] for v in values], len(values), 1)

    @classmethod
    def row(cls, values: Sequence[Polynomial]) -> PolyMatrix:
        return cls([list(values)], 1, len(values))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Polynomial]]) -> PolyMatrix:
        if not columns:
            raise DimensionMismatch("no columns")
        m = len(columns[0])
        if any(len(c) != m for c in columns):
            raise DimensionMismatch("columns of unequal length")
        return cls([[c[i] for c in columns] for i in range(m)], m, len(columns))

    # basic views

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def col(self, j: int) -> List[Polynomial]:
        return [r[j] for r in self.entries]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> PolyMatrix:
        return PolyMatrix([row[c0:c1] for row in self.entries[r0:r1]], r1 - r0, c1 - c0)

    def select_columns(self, idx: Sequence[int]) -> PolyMatrix:
        return PolyMatrix([[row[j] for j in idx] for row in self.entries], self.rows, len(idx))

    def transpose(self) -> PolyMatrix:
        return PolyMatrix([list(c) for c in zip(*self.entries)], self.cols, self.rows) if self.rows else PolyMatrix.zeros(self.cols, 0)

    @property
    def T(self) -> PolyMatrix:
        return self.transpose()

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols})"

    # arithmetic

    def _check_same(self, other: PolyMatrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_same(other)
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.rows, self.cols)

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_same(other)
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.rows, self.cols)

    def __neg__(self) -> PolyMatrix:
        return PolyMatrix([[-a for a in r] for r in self.entries], self.rows, self.cols)

    def scale(self, c) -> PolyMatrix:
        c = Fraction(c)
        return PolyMatrix([[a.scale(c) for a in r] for r in self.entries], self.rows, self.cols)

    def scale_poly(self, p: Polynomial) -> PolyMatrix:
        return PolyMatrix([[a * p for a in r] for r in self.entries], self.rows, self.cols)

    def __mul__(self, c) -> PolyMatrix:
        if isinstance(c, Polynomial):
            return self.scale_poly(c)
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return matmul(self, other)

    def map(self, fn) -> PolyMatrix:
        return PolyMatrix([[fn(a) for a in r] for r in self.entries], self.rows, self.cols)

    # serialization

    def to_json(self) -> dict:
        from .parser import render_poly

        return {"rows": self.rows, "cols": self.cols, "entries": [[render_poly(e) for e in r] for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> PolyMatrix:
        from .parser import parse_poly

        return cls([[parse_poly(s) for s in r] for r in data["entries"]], data["rows"], data["cols"])

    def to_text(self, caption: str = "") -> str:
        from .parser import render_poly

        cells = [[render_poly(e) for e in r] for r in self.entries]
        widths = [max((len(cells[i][j]) for i in range(self.rows)), default=1) for j in range(self.cols)]
        lines = [caption] if caption else []
        for r in cells:
            lines.append("[ " + "  ".join(c.rjust(w) for c, w in zip(r, widths)) + " ]")
        return "\n".join(lines)


def _as_poly(e) -> Polynomial:
    if isinstance(e, Polynomial):
        return e
    if isinstance(e, (int, Fraction)):
        return Polynomial.const(e)
    raise TypeError(f"matrix entry of type {type(e).__name__}")


def matmul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    Bt = [B.col(j) for j in range(B.cols)]
    out = []
    for row in A.entries:
        nz = [(k, a) for k, a in enumerate(row) if a]
        new_row = []
        for col in Bt:
            acc = ZERO
            for k, a in nz:
                b = col[k]
                if b:
                    acc = acc + a * b
            new_row.append(acc)
        out.append(new_row)
    return PolyMatrix(out, A.rows, B.cols)


def reduce_mod_f(A: PolyMatrix, ctx) -> PolyMatrix:
    from .ring import normal_form

    return A.map(lambda p: normal_form(p, ctx))


def block(blocks: Sequence[Sequence[Optional[PolyMatrix]]]) -> PolyMatrix:
    """Assemble a block matrix; None marks a zero block of inferred size.

    Integers 0 are accepted as zero markers too.
    """
    grid = [[None if (b is None or (isinstance(b, int) and b == 0)) else b for b in row] for row in blocks]
    if not grid or not grid[0]:
        raise DimensionMismatch("empty block grid")
    ncols = len(grid[0])
    if any(len(r) != ncols for r in grid):
        raise DimensionMismatch("ragged block grid")
    heights = []
    for r in grid:
        hs = {b.rows for b in r if b is not None}
        if len(hs) != 1:
            raise DimensionMismatch("inconsistent or undetermined block-row height")
        heights.append(hs.pop())
    widths = []
    for j in range(ncols):
        ws = {r[j].cols for r in grid if r[j] is not None}
        if len(ws) != 1:
            raise DimensionMismatch("inconsistent or undetermined block-column width")
        widths.append(ws.pop())
    rows = []
    for r, h in zip(grid, heights):
        for i in range(h):
            line = []
            for b, w in zip(r, widths):
                line.extend(b.entries[i] if b is not None else [ZERO] * w)
            rows.append(line)
    return PolyMatrix(rows, sum(heights), sum(widths))


def zero_block(m: int, n: int) -> PolyMatrix:
    return PolyMatrix.zeros(m, n)


def hstack(*mats: PolyMatrix) -> PolyMatrix:
    return block([list(mats)])


def vstack(*mats: PolyMatrix) -> PolyMatrix:
    return block([[m] for m in mats])


def check_homogeneous(A: PolyMatrix, frame: GradedFrame) -> bool:
    if len(frame.row_degrees) != A.rows or len(frame.col_degrees) != A.cols:
        raise DimensionMismatch("frame does not match matrix shape")
    for i, row in enumerate(A.entries):
        for j, e in enumerate(row):
            if e:
                deg = is_homogeneous(e)
                if deg is None or deg != frame.col_degrees[j] - frame.row_degrees[i]:
                    return False
    return True


def infer_col_degrees(A: PolyMatrix, row_degrees: Sequence[int]) -> List[Optional[int]]:
    """Column degrees forced by the first nonzero entry of each column."""
    out: List[Optional[int]] = []
    for j in range(A.cols):
        deg = None
        for i in range(A.rows):
            e = A.entries[i][j]
            if e:
                h = is_homogeneous(e)
                if h is not None and h != NEG_INF:
                    deg = row_degrees[i] + int(h)
                break
        out.append(deg)
    return out


def entries_in_max_ideal(A: PolyMatrix) -> bool:
    return all(not e.constant_term() for row in A.entries for e in row)
