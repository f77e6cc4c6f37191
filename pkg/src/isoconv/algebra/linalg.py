"""Dense exact linear algebra over a :class:`~isoconv.algebra.field.Field`.

Elimination pivots on the first row holding a nonzero entry in the current
column (ties go to the lowest row index), so multiplication counts are
reproducible.  Multiplications by zero or one are not performed and not
counted; a field inversion counts as one multiplication.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from ..errors import DivisionByZero, ShapeError
from .field import Field, FieldElement


class Matrix:
    """Immutable row-major matrix of field elements."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: Field, data: Iterable[Sequence[int]], cols: int | None = None) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError("ragged matrix rows")
        self.field = field
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    # -- construction -------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, [[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def column(cls, field: Field, values: Sequence[int]) -> "Matrix":
        return cls(field, [[v] for v in values], 1)

    @classmethod
    def hstack(cls, *blocks: "Matrix") -> "Matrix":
        field = blocks[0].field
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ShapeError("hstack: row counts differ")
        data = [sum((b._data[i] for b in blocks), ()) for i in range(rows)]
        return cls(field, data, sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, *blocks: "Matrix") -> "Matrix":
        field = blocks[0].field
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ShapeError("vstack: column counts differ")
        return cls(field, [r for b in blocks for r in b._data], cols)

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        return cls.vstack(*[cls.hstack(*row) for row in grid])

    # -- access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._data[i][j]
        return self._data[idx]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [[self._data[i][j] for j in cols] for i in rows], len(cols))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, [[r[j] for r in self._data] for j in range(self.cols)], self.rows)

    # -- arithmetic -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and other.shape == self.shape
            and other._data == self._data
            and other.field == self.field
        )

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} over {self.field.name})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if other.shape != self.shape:
            raise ShapeError("addition shape mismatch")
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if other.shape != self.shape:
            raise ShapeError("subtraction shape mismatch")
        sub = self.field.sub
        return Matrix(self.field, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in r] for r in self._data], self.cols)

    def scale(self, c: FieldElement) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in r] for r in self._data], self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        mul, add = self.field.mul, self.field.add
        ocols = other.T._data
        out = []
        for r in self._data:
            nz = [(t, a) for t, a in enumerate(r) if a]
            row = []
            for c in ocols:
                acc = 0
                for t, a in nz:
                    b = c[t]
                    if b:
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(self.field, out, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        return mat_vec(self, v)[0]

    def power(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result


def mat_vec(M: Matrix, v: Sequence[int]) -> tuple[list[int], int]:
    """``M v`` together with the number of multiplications spent."""
    if len(v) != M.cols:
        raise ShapeError(f"vector of length {len(v)} for {M.shape} matrix")
    mul, add = M.field.mul, M.field.add
    nz = [(t, x) for t, x in enumerate(v) if x]
    out = []
    mults = 0
    for r in M._data:
        acc = 0
        for t, x in nz:
            a = r[t]
            if a:
                if a == 1:
                    acc = add(acc, x)
                elif x == 1:
                    acc = add(acc, a)
                else:
                    acc = add(acc, mul(a, x))
                    mults += 1
        out.append(acc)
    return out, mults


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def eliminate(field: Field, rows: list[list[int]], ncols: int) -> tuple[list[int], int]:
    """In-place Gauss-Jordan reduction pivoting over the first ``ncols`` columns.

    Columns beyond ``ncols`` (right-hand sides) are carried along.  Returns the
    pivot columns and the multiplication count.
    """
    mul, sub, inv = field.mul, field.sub, field.inv
    nrows = len(rows)
    pivots: list[int] = []
    mults = 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = r
        while pr < nrows and not rows[pr][c]:
            pr += 1
        if pr == nrows:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        width = len(prow)
        pv = prow[c]
        if pv != 1:
            iv = inv(pv)
            mults += 1
            for t in range(c + 1, width):
                if prow[t]:
                    prow[t] = mul(prow[t], iv)
                    mults += 1
            prow[c] = 1
        nz = [t for t in range(c + 1, width) if prow[t]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            row[c] = 0
            if f == 1:
                for t in nz:
                    row[t] = sub(row[t], prow[t])
            else:
                for t in nz:
                    row[t] = sub(row[t], mul(f, prow[t]))
                mults += len(nz)
        pivots.append(c)
        r += 1
    return pivots, mults


class Echelon(NamedTuple):
    matrix: Matrix
    pivots: list[int]
    rank: int
    mult_count: int


def rref(M: Matrix) -> Echelon:
    """Reduced row echelon form; ``M`` itself is left untouched."""
    rows = M.tolist()
    pivots, mults = eliminate(M.field, rows, M.cols)
    return Echelon(Matrix(M.field, rows, M.cols), pivots, len(pivots), mults)


def rank(M: Matrix) -> int:
    return rref(M).rank


class SolveOutcome(NamedTuple):
    """Per-unknown values (``None`` = underdetermined) of ``A x = b``."""

    values: list[FieldElement | None]
    consistent: bool
    mult_count: int

    def determined(self, j: int) -> bool:
        return self.values[j] is not None

    @property
    def all_determined(self) -> bool:
        return all(v is not None for v in self.values)


def solve_rows(field: Field, rows: list[list[int]], nvars: int) -> SolveOutcome:
    """Solve an augmented system given as rows ``[a_0 .. a_{nvars-1} | b]``.

    Unknown ``j`` is determined iff the unit vector ``e_j`` lies in the row
    space of the coefficient part; the rows are consumed.
    """
    pivots, mults = eliminate(field, rows, nvars)
    values: list[int | None] = [None] * nvars
    consistent = all(row[nvars] == 0 for row in rows[len(pivots):])
    if consistent:
        for r, c in enumerate(pivots):
            row = rows[r]
            if not any(row[t] for t in range(c + 1, nvars)):
                values[c] = row[nvars]
    return SolveOutcome(values, consistent, mults)


def solve_determined(A: Matrix, b: Matrix | Sequence[int]) -> SolveOutcome:
    bvec = list(b.col(0)) if isinstance(b, Matrix) else list(b)
    if isinstance(b, Matrix) and b.cols != 1:
        raise ShapeError("right-hand side must be a single column")
    if len(bvec) != A.rows:
        raise ShapeError(f"A has {A.rows} rows but b has {len(bvec)} entries")
    rows = [list(r) + [x] for r, x in zip(A.tolist(), bvec)]
    return solve_rows(A.field, rows, A.cols)


def det(M: Matrix) -> FieldElement:
    if M.rows != M.cols:
        raise ShapeError("determinant of a non-square matrix")
    field = M.field
    mul, sub, inv, neg = field.mul, field.sub, field.inv, field.neg
    a = M.tolist()
    n = M.rows
    result = 1
    for c in range(n):
        pr = c
        while pr < n and not a[pr][c]:
            pr += 1
        if pr == n:
            return 0
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            result = neg(result)
        pv = a[c][c]
        result = mul(result, pv)
        iv = inv(pv)
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f = mul(f, iv)
                row, prow = a[i], a[c]
                for t in range(c + 1, n):
                    if prow[t]:
                        row[t] = sub(row[t], mul(f, prow[t]))
    return result


def _check_indices(idx: Sequence[int], bound: int) -> None:
    for a, b in zip(idx, idx[1:]):
        if b <= a:
            raise IndexError("indices must be strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= bound):
        raise IndexError("index out of range")


def minor(M: Matrix, row_idx: Sequence[int], col_idx: Sequence[int]) -> FieldElement:
    """Determinant of the square submatrix on the given rows and columns."""
    if len(row_idx) != len(col_idx):
        raise IndexError("minor needs as many rows as columns")
    _check_indices(row_idx, M.rows)
    _check_indices(col_idx, M.cols)
    return det(M.submatrix(row_idx, col_idx))


def full_size_minors(M: Matrix):
    """Yield ``(rows, cols)`` index pairs of all full-size minors of ``M``."""
    if M.rows <= M.cols:
        rows = tuple(range(M.rows))
        for cols in combinations(range(M.cols), M.rows):
            yield rows, cols
    else:
        cols = tuple(range(M.cols))
        for rows in combinations(range(M.rows), M.cols):
            yield rows, cols


def nullspace(M: Matrix) -> list[list[int]]:
    """Basis of the right kernel ``{x : M x = 0}``."""
    field = M.field
    rows = M.tolist()
    pivots, _ = eliminate(field, rows, M.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = [0] * M.cols
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = field.neg(rows[r][free])
        basis.append(v)
    return basis


def inverse(M: Matrix) -> Matrix:
    n = M.rows
    if M.cols != n:
        raise ShapeError("inverse of a non-square matrix")
    field = M.field
    rows = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M.tolist())]
    pivots, _ = eliminate(field, rows, n)
    if len(pivots) != n:
        raise DivisionByZero("matrix is singular")
    return Matrix(field, [r[n:] for r in rows], n)
