"""Polynomial generator matrices of convolutional codes.

Time runs forward: ``G(z) = G_0 + G_1 z + ... + G_mu z^mu`` and the codeword
block sent at time ``t`` is ``v_t = sum_i G_i m_{t-i}``.  Each block is
ordered ``(y_t, u_t)`` with the first ``n-k`` entries forming ``y_t``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .algebra import poly
from .algebra.field import Field, FieldSpec, get_field
from .algebra.linalg import Matrix, mat_vec, rank
from .algebra.structure import MinorReport, Pattern, classify_minors
from .errors import BudgetExceeded, EmptyMessage, NotReduced, ShapeError

DISTANCE_BUDGET = 1 << 20


class PolyGenerator:
    """Generator matrix ``G(z)`` stored as its coefficient list ``G_0..G_mu``."""

    def __init__(self, coeffs: Sequence[Matrix], *, check_rank: bool = True) -> None:
        if not coeffs:
            raise ShapeError("a generator needs at least one coefficient")
        n, k = coeffs[0].shape
        F = coeffs[0].field
        for c in coeffs:
            if c.shape != (n, k):
                raise ShapeError("coefficient matrices must share one shape")
            if c.field != F:
                raise ShapeError("coefficient matrices must share one field")
        if not 0 < k <= n:
            raise ShapeError(f"need 0 < k <= n, got n={n}, k={k}")
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        self.field: Field = F
        self.n = n
        self.k = k
        self.coeffs: tuple[Matrix, ...] = tuple(coeffs)
        if check_rank and not self._full_rank():
            raise ShapeError("generator matrix does not have full column rank")

    @property
    def mu(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyGenerator) and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PolyGenerator(n={self.n}, k={self.k}, mu={self.mu}, field={self.field.name})"

    def coefficient(self, t: int) -> Matrix:
        if 0 <= t <= self.mu:
            return self.coeffs[t]
        return Matrix.zeros(self.field, self.n, self.k)

    def entry(self, i: int, j: int) -> list[int]:
        """Entry ``(i, j)`` of ``G(z)`` as an ascending coefficient list."""
        return poly.trim([c[i, j] for c in self.coeffs])

    def poly_matrix(self) -> list[list[list[int]]]:
        return [[self.entry(i, j) for j in range(self.k)] for i in range(self.n)]

    def evaluate(self, x: int) -> Matrix:
        F = self.field
        return Matrix(F, [[poly.evaluate(F, self.entry(i, j), x) for j in range(self.k)] for i in range(self.n)], self.k)

    def sliding(self, j: int) -> Matrix:
        """Block lower-triangular Toeplitz matrix with blocks ``G_0..G_j``."""
        grid = [[self.coefficient(r - c) for c in range(j + 1)] for r in range(j + 1)]
        return Matrix.block(grid)

    def column_degrees(self) -> list[int]:
        degs = []
        for j in range(self.k):
            d = -1
            for t, c in enumerate(self.coeffs):
                if any(c[i, j] for i in range(self.n)):
                    d = t
            degs.append(d)
        return degs

    def minors(self) -> Iterable[tuple[tuple[int, ...], list[int]]]:
        """All ``k x k`` minors of ``G(z)`` as polynomials, keyed by row subset."""
        M = self.poly_matrix()
        bound = sum(max(d, 0) for d in self.column_degrees())
        for rows in combinations(range(self.n), self.k):
            yield rows, poly.det_poly(self.field, [M[r] for r in rows], bound)

    def _full_rank(self) -> bool:
        return any(m for _, m in self.minors())


def encode(G: PolyGenerator, message: Sequence[Sequence[int]]) -> list[list[int]]:
    """Codeword blocks ``v_0..v_{gamma+mu}`` of the message ``m_0..m_gamma``."""
    if not message:
        raise EmptyMessage("message must contain at least one block")
    F = G.field
    for m in message:
        if len(m) != G.k:
            raise ShapeError(f"message blocks must have {G.k} entries")
    out = []
    for t in range(len(message) + G.mu):
        acc = [0] * G.n
        for i in range(max(0, t - len(message) + 1), min(t, G.mu) + 1):
            part, _ = mat_vec(G.coeffs[i], message[t - i])
            acc = [F.add(a, b) for a, b in zip(acc, part)]
        out.append(acc)
    return out


def column_degrees_and_reduced(G: PolyGenerator) -> tuple[list[int], bool]:
    degs = G.column_degrees()
    if min(degs) < 0:
        return degs, False
    lead = Matrix(G.field, [[G.coeffs[degs[j]][i, j] for j in range(G.k)] for i in range(G.n)], G.k)
    return degs, rank(lead) == G.k


def code_degree(G: PolyGenerator) -> int:
    """Largest degree among the ``k x k`` minors of ``G(z)``."""
    return max((poly.degree(m) for _, m in G.minors()), default=-1)


def is_noncatastrophic(G: PolyGenerator) -> bool:
    """True iff the gcd of the ``k x k`` minors is a nonzero constant."""
    F = G.field
    g: list[int] = []
    for _, m in G.minors():
        g = poly.gcd(F, g, m)
        if g == [1]:
            return True
    return g == [1]


def column_distance_bruteforce(G: PolyGenerator, j: int, budget: int = DISTANCE_BUDGET) -> int:
    """``d_j^c`` by enumerating every message ``m_0..m_j`` with ``m_0 != 0``.

    ``m_0`` is normalised to have leading nonzero entry one, which leaves the
    weights unchanged.
    """
    F = G.field
    k = G.k
    if F.order ** (k * (j + 1)) > budget:
        raise BudgetExceeded(f"{F.order}^{k * (j + 1)} messages exceed the budget of {budget}")
    S = G.sliding(j)
    elems = list(F.elements())
    heads = []
    for lead in range(k):
        for tail in product(elems, repeat=k - lead - 1):
            heads.append([0] * lead + [1] + list(tail))
    best = None
    for head in heads:
        for rest in product(elems, repeat=k * j):
            v, _ = mat_vec(S, head + list(rest))
            w = sum(1 for x in v if x)
            if best is None or w < best:
                best = w
    return best


def generic_column_degrees(k: int, delta: int) -> list[int]:
    """Column degrees as equal as possible, largest first."""
    return [delta // k + (1 if j < delta % k else 0) for j in range(k)]


def compute_L(n: int, k: int, delta: int) -> int | None:
    if n == k:
        return None
    return delta // k + delta // (n - k)


def mdp_minor_report(G: PolyGenerator, L: int | None = None, *, seed: int = 0, stop_early: bool = True) -> MinorReport:
    """Classify the full-size minors of the sliding matrix ``G_L^c``."""
    degs, reduced = column_degrees_and_reduced(G)
    if not reduced:
        raise NotReduced("the minor criterion needs a column reduced generator")
    if L is None:
        L = compute_L(G.n, G.k, sum(degs))
        if L is None:
            raise ShapeError("L is undefined for n == k")
    pattern = Pattern.lower_block_triangular(L + 1, G.n, G.k)
    return classify_minors(G.sliding(L), pattern, seed=seed, stop_early=stop_early)


def mdp_check_minors(G: PolyGenerator, *, seed: int = 0) -> bool:
    return mdp_minor_report(G, seed=seed).ok


@dataclass(frozen=True)
class CodeProfile:
    n: int
    k: int
    delta: int
    L: int | None
    column_degrees: tuple[int, ...]
    column_reduced: bool
    noncatastrophic: bool
    mdp: bool | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "delta": self.delta,
            "L": self.L,
            "column_degrees": list(self.column_degrees),
            "column_reduced": self.column_reduced,
            "noncatastrophic": self.noncatastrophic,
            "mdp": self.mdp,
        }


def profile(G: PolyGenerator, *, check_mdp: bool = True) -> CodeProfile:
    degs, reduced = column_degrees_and_reduced(G)
    delta = code_degree(G)
    L = compute_L(G.n, G.k, delta)
    mdp = mdp_check_minors(G) if (check_mdp and reduced and L is not None) else None
    return CodeProfile(G.n, G.k, delta, L, tuple(degs), reduced, is_noncatastrophic(G), mdp)


def random_generator(F: Field, n: int, k: int, degrees: Sequence[int], rng: random.Random) -> PolyGenerator:
    """Random generator with the given column degrees (leading coefficients nonzero)."""
    mu = max(degrees)
    while True:
        coeffs = [[[0] * k for _ in range(n)] for _ in range(mu + 1)]
        for j, d in enumerate(degrees):
            for t in range(d + 1):
                for i in range(n):
                    coeffs[t][i][j] = F.random(rng)
        if all(any(coeffs[d][i][j] for i in range(n)) for j, d in enumerate(degrees)):
            try:
                return PolyGenerator([Matrix(F, c, k) for c in coeffs])
            except ShapeError:
                continue


def realizable_head(G: PolyGenerator) -> bool:
    """Whether the input block ``U_0`` (bottom ``k`` rows of ``G_0``) is invertible."""
    U0 = G.coeffs[0].submatrix(range(G.n - G.k, G.n), range(G.k))
    return rank(U0) == G.k


def search_mdp_code(
    n: int,
    k: int,
    delta: int,
    *,
    seed: int = 0,
    degrees: Sequence[int] = (2, 3, 4, 5, 6, 7, 8),
    attempts: int = 200,
) -> PolyGenerator:
    """Random search for a column reduced, non-catastrophic MDP generator.

    Fields GF(2^m) are tried in increasing size; the generator additionally has
    an invertible ``U_0`` so that it can be realized as an ISO system.
    """
    rng = random.Random(seed)
    cols = generic_column_degrees(k, delta)
    for m in degrees:
        F = get_field(FieldSpec.binary(m))
        for _ in range(attempts):
            G = random_generator(F, n, k, cols, rng)
            if not column_degrees_and_reduced(G)[1] or not realizable_head(G):
                continue
            if not is_noncatastrophic(G):
                continue
            if mdp_check_minors(G):
                return G
    raise LookupError(f"no MDP ({n},{k},{delta}) code found")
