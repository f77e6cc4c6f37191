"""Structured matrices and the "trivially zero" classification of their minors.

A structured matrix is described by a zero pattern: entries marked free may
take any value, the rest are structurally zero.  A minor is trivially zero
when it vanishes for every filling of the free entries.  We decide this by
random substitution over a field of the same characteristic with at least
2^61 elements: the minor is a polynomial of degree at most its size in the
free entries, so a nonzero polynomial survives 8 independent trials except
with probability far below 2^-50.  Minors whose pattern has no transversal
are trivially zero for certain and skip the random trials.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Iterator, Sequence

from ..errors import BudgetExceeded, ShapeError
from .field import Field, FieldSpec, get_field
from .linalg import Matrix

TRIALS = 8
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class Pattern:
    """Entry-level zero pattern; ``free[i][j]`` is False for structural zeros."""

    free: tuple[tuple[bool, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.free)

    @property
    def cols(self) -> int:
        return len(self.free[0]) if self.free else 0

    @classmethod
    def dense(cls, rows: int, cols: int) -> "Pattern":
        return cls(tuple((True,) * cols for _ in range(rows)))

    @classmethod
    def from_blocks(
        cls, row_sizes: Sequence[int], col_sizes: Sequence[int], free_blocks: set[tuple[int, int]]
    ) -> "Pattern":
        rows = []
        for br, rs in enumerate(row_sizes):
            line: list[bool] = []
            for bc, cs in enumerate(col_sizes):
                line.extend([(br, bc) in free_blocks] * cs)
            rows.extend([tuple(line)] * rs)
        return cls(tuple(rows))

    @classmethod
    def lower_block_triangular(cls, blocks: int, rsize: int, csize: int) -> "Pattern":
        """Zero pattern of a block lower-triangular (Toeplitz) matrix."""
        free = {(r, c) for r in range(blocks) for c in range(r + 1)}
        return cls.from_blocks([rsize] * blocks, [csize] * blocks, free)

    def hstack(self, other: "Pattern") -> "Pattern":
        if self.rows != other.rows:
            raise ShapeError("pattern row counts differ")
        return Pattern(tuple(a + b for a, b in zip(self.free, other.free)))

    def random_instance(self, F: Field, rng: random.Random) -> Matrix:
        return Matrix(F, [[F.random(rng) if f else 0 for f in row] for row in self.free], self.cols)


def witness_field(p: int) -> Field:
    """Field of characteristic ``p`` with at least 2^61 elements."""
    if p == 2:
        return get_field(FieldSpec.binary(64))
    m = max(1, math.ceil(61 / math.log2(p)))
    return get_field(FieldSpec.extension(p, m))


def has_perfect_matching(pattern: Pattern, rows: Sequence[int], cols: Sequence[int]) -> bool:
    """Whether the free entries of the square submatrix admit a transversal.

    Without one every term of the Leibniz expansion contains a structural
    zero, so the minor is certainly trivially zero.
    """
    match: dict[int, int] = {}

    def augment(r: int, seen: set[int]) -> bool:
        for c in cols:
            if pattern.free[r][c] and c not in seen:
                seen.add(c)
                if c not in match or augment(match[c], seen):
                    match[c] = r
                    return True
        return False

    return all(augment(r, set()) for r in rows)


def _singular(F: Field, rows: list[list[int]]) -> bool:
    # inversion-free elimination: scaling rows by nonzero pivots keeps the
    # zero/nonzero status of the determinant
    mul, sub = F.mul, F.sub
    n = len(rows)
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c]), None)
        if pr is None:
            return True
        rows[c], rows[pr] = rows[pr], rows[c]
        prow = rows[c]
        pv = prow[c]
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                row = rows[i]
                for t in range(c + 1, n):
                    row[t] = sub(mul(pv, row[t]), mul(f, prow[t]))
                row[c] = 0
    return False


class TrivialityOracle:
    """Randomized test of whether a minor of a pattern vanishes identically."""

    def __init__(self, pattern: Pattern, characteristic: int, seed: int = 0, trials: int = TRIALS) -> None:
        self.pattern = pattern
        self.field = witness_field(characteristic)
        rng = random.Random(seed)
        self.instances = [pattern.random_instance(self.field, rng) for _ in range(trials)]

    def is_trivially_zero(self, rows: Sequence[int], cols: Sequence[int]) -> bool:
        if not has_perfect_matching(self.pattern, rows, cols):
            return True
        F = self.field
        return all(_singular(F, M.submatrix(rows, cols).tolist()) for M in self.instances)


def minor_indices(rows: int, cols: int, sizes: str = "full") -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Row/column index sets of full-size minors, or of minors of every size."""
    if sizes == "full":
        r = min(rows, cols)
        size_range: Sequence[int] = [r]
    elif sizes == "all":
        size_range = range(1, min(rows, cols) + 1)
    else:
        raise ValueError(f"unknown minor selection {sizes!r}")
    for r in size_range:
        for ri in combinations(range(rows), r):
            for ci in combinations(range(cols), r):
                yield ri, ci


def count_minors(rows: int, cols: int, sizes: str = "full") -> int:
    if sizes == "full":
        r = min(rows, cols)
        return math.comb(rows, r) * math.comb(cols, r)
    return sum(math.comb(rows, r) * math.comb(cols, r) for r in range(1, min(rows, cols) + 1))


@dataclass
class MinorReport:
    """Outcome of classifying the minors of a structured matrix."""

    total: int = 0
    nonzero: int = 0
    trivially_zero: int = 0
    violations: list[tuple[tuple[int, ...], tuple[int, ...]]] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "nonzero": self.nonzero,
            "trivially_zero": self.trivially_zero,
            "violations": [[list(r), list(c)] for r, c in self.violations],
        }


def classify_minors(
    M: Matrix,
    pattern: Pattern,
    *,
    sizes: str = "full",
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    stop_early: bool = False,
) -> MinorReport:
    """Evaluate the selected minors of ``M``; zero ones are tested for triviality.

    A violation is a minor that is zero in ``M`` but not trivially zero.  With
    ``stop_early`` the scan ends at the first violation and the counts are
    partial.
    """
    if (M.rows, M.cols) != (pattern.rows, pattern.cols):
        raise ShapeError("pattern does not match matrix shape")
    for i, row in enumerate(pattern.free):
        for j, f in enumerate(row):
            if not f and M[i, j]:
                raise ShapeError(f"entry ({i},{j}) is nonzero but marked structurally zero")
    total = count_minors(M.rows, M.cols, sizes)
    if total > budget:
        raise BudgetExceeded(f"{total} minors exceed the budget of {budget}")
    oracle: TrivialityOracle | None = None
    report = MinorReport(total=total)
    for ri, ci in minor_indices(M.rows, M.cols, sizes):
        if not _singular(M.field, M.submatrix(ri, ci).tolist()):
            report.nonzero += 1
            continue
        if oracle is None:
            oracle = TrivialityOracle(pattern, M.field.p, seed)
        if oracle.is_trivially_zero(ri, ci):
            report.trivially_zero += 1
        else:
            report.violations.append((ri, ci))
            if stop_early:
                break
    return report
