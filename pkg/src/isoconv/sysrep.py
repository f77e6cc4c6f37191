"""Input-state-output (ISO) representations of convolutional codes.

A code is the set of finite input/output trajectories of

    x_{t+1} = A x_t + B u_t,    y_t = C x_t + D u_t,    x_0 = 0,

with codeword blocks ``v_t = (y_t, u_t)``.  Besides simulation and the Kalman
tests this module converts between generators and systems, builds the
structural matrices used by the decoder and constructs the (5,3,2) example.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Sequence

from .algebra.field import Field, FieldSpec, get_field
from .algebra.linalg import Matrix, inverse, mat_vec, nullspace, rank
from .algebra.structure import MinorReport, Pattern, classify_minors
from .convcode import PolyGenerator, column_degrees_and_reduced, compute_L
from .errors import (
    DegenerateField,
    DegreeBound,
    FieldTooSmall,
    NotRealizable,
    NotReduced,
    ShapeError,
)


@dataclass(frozen=True)
class StateSpace:
    A: Matrix
    B: Matrix
    C: Matrix
    D: Matrix

    def __post_init__(self) -> None:
        s = self.A.rows
        p, k = self.D.shape
        if self.A.cols != s:
            raise ShapeError("A must be square")
        if self.B.shape != (s, k):
            raise ShapeError(f"B must be {s}x{k}, got {self.B.shape}")
        if self.C.shape != (p, s):
            raise ShapeError(f"C must be {p}x{s}, got {self.C.shape}")
        fields = {self.A.field, self.B.field, self.C.field, self.D.field}
        if len(fields) != 1:
            raise ShapeError("all system matrices must share one field")

    @property
    def field(self) -> Field:
        return self.D.field

    @property
    def s(self) -> int:
        return self.A.rows

    @property
    def k(self) -> int:
        return self.D.cols

    @property
    def n(self) -> int:
        return self.D.rows + self.D.cols

    def __repr__(self) -> str:
        return f"StateSpace(n={self.n}, k={self.k}, s={self.s}, field={self.field.name})"

    def step(self, x: Sequence[int], u: Sequence[int]) -> tuple[list[int], list[int]]:
        """One time step: returns ``(x_next, y)``."""
        F = self.field
        ax, _ = mat_vec(self.A, x)
        bu, _ = mat_vec(self.B, u)
        cx, _ = mat_vec(self.C, x)
        du, _ = mat_vec(self.D, u)
        return [F.add(a, b) for a, b in zip(ax, bu)], [F.add(a, b) for a, b in zip(cx, du)]


def memoryless(D: Matrix) -> StateSpace:
    """The ``s = 0`` system ``y = D u``."""
    F = D.field
    return StateSpace(Matrix(F, [], 0), Matrix(F, [], D.cols), Matrix(F, [[] for _ in range(D.rows)], 0), D)


def simulate(
    sys: StateSpace, x0: Sequence[int], inputs: Sequence[Sequence[int]]
) -> tuple[list[list[int]], list[list[int]]]:
    """States ``x_0..x_{T+1}`` and outputs ``y_0..y_T`` driven by ``u_0..u_T``."""
    if len(x0) != sys.s:
        raise ShapeError(f"initial state must have {sys.s} entries")
    states = [list(x0)]
    outputs = []
    for u in inputs:
        if len(u) != sys.k:
            raise ShapeError(f"inputs must have {sys.k} entries")
        x, y = sys.step(states[-1], u)
        states.append(x)
        outputs.append(y)
    return states, outputs


def reachability_matrix(sys: StateSpace, steps: int | None = None) -> Matrix:
    """``[B, AB, ..., A^{steps-1} B]`` (``steps`` defaults to ``s``)."""
    steps = sys.s if steps is None else steps
    blocks = [sys.B]
    for _ in range(steps - 1):
        blocks.append(sys.A @ blocks[-1])
    return Matrix.hstack(*blocks) if steps else Matrix(sys.field, [[] for _ in range(sys.s)], 0)


def observability_matrix(sys: StateSpace, j: int) -> Matrix:
    """The stack ``[C; CA; ...; CA^j]``."""
    blocks = [sys.C]
    for _ in range(j):
        blocks.append(blocks[-1] @ sys.A)
    return Matrix.vstack(*blocks)


def kalman_reachable(sys: StateSpace) -> bool:
    return sys.s == 0 or rank(reachability_matrix(sys)) == sys.s


def kalman_observable(sys: StateSpace) -> bool:
    return sys.s == 0 or rank(observability_matrix(sys, sys.s - 1)) == sys.s


def termination_kernel(sys: StateSpace) -> Matrix:
    """Matrix whose kernel holds the states that emit only zeros and die out.

    A trajectory with no further input from such a state is a finite codeword
    tail, so a word is terminated exactly when its final state lies here.
    """
    if sys.s == 0:
        return Matrix(sys.field, [], 0)
    return Matrix.vstack(observability_matrix(sys, sys.s - 1), sys.A.power(sys.s))


def membership_check(sys: StateSpace, blocks: Sequence[Sequence[int]], terminated: bool = True) -> bool:
    """Whether ``v_0..v_N`` (each ordered ``(y, u)``) is the start of a codeword.

    With ``terminated`` the word must also be complete: the state after the
    last block must lead to an all-zero tail.
    """
    p = sys.n - sys.k
    x = [0] * sys.s
    for v in blocks:
        if len(v) != sys.n:
            return False
        y, u = list(v[:p]), list(v[p:])
        x, y_model = sys.step(x, u)
        if y_model != y:
            return False
    if terminated and sys.s:
        return not any(termination_kernel(sys).apply(x))
    return True


# ---------------------------------------------------------------------------
# generator <-> system
# ---------------------------------------------------------------------------

def realize(G: PolyGenerator) -> StateSpace:
    """Controller-form realization with ``s = sum of column degrees``.

    Column ``j`` of degree ``d_j`` contributes the state entries
    ``m_{t-1}[j], ..., m_{t-d_j}[j]``.  The input block ``U_0`` of ``G_0``
    must be invertible so that messages can be read back from inputs.
    """
    degs, reduced = column_degrees_and_reduced(G)
    if not reduced:
        raise NotReduced("realize needs a column reduced generator")
    F = G.field
    n, k = G.n, G.k
    p = n - k
    U0 = G.coeffs[0].submatrix(range(p, n), range(k))
    if rank(U0) < k:
        raise NotRealizable("input block U_0 of G_0 is singular")
    U0inv = inverse(U0)
    Y0 = G.coeffs[0].submatrix(range(p), range(k))
    s = sum(degs)
    offsets = [sum(degs[:j]) for j in range(k)]
    shift = [[0] * s for _ in range(s)]
    inject = [[0] * k for _ in range(s)]
    Us = [[0] * s for _ in range(k)]
    Ys = [[0] * s for _ in range(p)]
    for j, d in enumerate(degs):
        off = offsets[j]
        if d:
            inject[off][j] = 1
        for r in range(1, d):
            shift[off + r][off + r - 1] = 1
        for r in range(1, d + 1):
            Gr = G.coeffs[r]
            for i in range(p):
                Ys[i][off + r - 1] = Gr[i, j]
            for i in range(k):
                Us[i][off + r - 1] = Gr[p + i, j]
    A0 = Matrix(F, shift, s)
    B0 = Matrix(F, inject, k)
    UsM = Matrix(F, Us, s)
    YsM = Matrix(F, Ys, s)
    K = U0inv @ UsM
    return StateSpace(A0 - B0 @ K, B0 @ U0inv, YsM - Y0 @ K, Y0 @ U0inv)


def _codeword_of_inputs(sys: StateSpace, us: list[list[int]]) -> list[list[int]]:
    _, ys = simulate(sys, [0] * sys.s, us)
    return [y + u for y, u in zip(ys, us)]


def generator_of(sys: StateSpace) -> PolyGenerator:
    """Minimal-degree polynomial basis of the code, columns by descending degree.

    Degree by degree, the input sequences ``u_0..u_d`` whose final state leads
    to a zero tail form a subspace ``W_d``; shifts of the generators found so
    far span part of it, and any complement supplies new generators.
    """
    F = sys.field
    k, s = sys.k, sys.s
    K = termination_kernel(sys)
    found: list[tuple[int, list[int]]] = []
    for d in range(s + 1):
        R = reachability_matrix(sys, d + 1)
        # reachability_matrix lists B first; inputs are ordered u_0..u_d, so
        # column block t must carry A^{d-t} B
        R = Matrix.hstack(*[R.submatrix(range(s), range((d - t) * k, (d - t + 1) * k)) for t in range(d + 1)]) if s else R
        W = nullspace(K @ R) if s else [[1 if i == j else 0 for i in range(k * (d + 1))] for j in range(k * (d + 1))]
        span: list[list[int]] = []
        for e, g in found:
            for sh in range(d - e + 1):
                span.append([0] * (k * sh) + g + [0] * (k * (d - e - sh)))
        current = rank(Matrix(F, span, k * (d + 1))) if span else 0
        for w in W:
            trial = span + [w]
            r = rank(Matrix(F, trial, k * (d + 1)))
            if r > current:
                span, current = trial, r
                found.append((d, w))
                if len(found) == k:
                    break
        if len(found) == k:
            break
    if len(found) < k:
        raise DegreeBound(f"found only {len(found)} of {k} generators up to degree {s}")
    found.sort(key=lambda item: -item[0])
    mu = found[0][0]
    cols = []
    for d, g in found:
        us = [g[t * k:(t + 1) * k] for t in range(d + 1)]
        word = _codeword_of_inputs(sys, us)
        word += [[0] * sys.n for _ in range(mu - d)]
        cols.append(word)
    coeffs = [Matrix(F, [[cols[j][t][i] for j in range(k)] for i in range(sys.n)], k) for t in range(mu + 1)]
    return PolyGenerator(coeffs)


# ---------------------------------------------------------------------------
# structural matrices
# ---------------------------------------------------------------------------

def compute_ell(sys: StateSpace) -> int:
    """Largest ``l`` with ``[A^{l-1}B ... B]`` of full column rank, else -1."""
    k = sys.k
    if rank(sys.B) < k or sys.s == 0:
        return -1
    ell = 1
    while (ell + 1) * k <= sys.s and rank(reachability_matrix(sys, ell + 1)) == (ell + 1) * k:
        ell += 1
    return ell


class StructuralCache:
    """Markov blocks, ``F_j``, observability stacks, ``R_l`` and ``ell``.

    Entries are computed on first use and never change afterwards.
    """

    def __init__(self, sys: StateSpace, T: int = 0) -> None:
        self.sys = sys
        self.field = sys.field
        self._powers: list[Matrix] = [Matrix.identity(sys.field, sys.s)]
        self._markov: list[Matrix] = [sys.D]
        self._F: dict[int, Matrix] = {}
        self._obs: dict[int, Matrix] = {}
        self._R: dict[int, Matrix] = {}
        self.ell = compute_ell(sys)
        for j in range(T + 1):
            self.F(j)
            self.obs(j)
        for l in range(1, sys.s + 1):
            self.R(l)

    def power(self, t: int) -> Matrix:
        while len(self._powers) <= t:
            self._powers.append(self._powers[-1] @ self.sys.A)
        return self._powers[t]

    def markov(self, t: int) -> Matrix:
        """``M_0 = D`` and ``M_t = C A^{t-1} B``."""
        while len(self._markov) <= t:
            self._markov.append(self.sys.C @ self.power(len(self._markov) - 1) @ self.sys.B)
        return self._markov[t]

    def F(self, j: int) -> Matrix:
        if j not in self._F:
            grid = [
                [self.markov(r - c) if r >= c else Matrix.zeros(self.field, self.sys.n - self.sys.k, self.sys.k)
                 for c in range(j + 1)]
                for r in range(j + 1)
            ]
            self._F[j] = Matrix.block(grid)
        return self._F[j]

    def obs(self, j: int) -> Matrix:
        """``[C; CA; ...; CA^j]``."""
        if j not in self._obs:
            self._obs[j] = Matrix.vstack(*[self.sys.C @ self.power(t) for t in range(j + 1)])
        return self._obs[j]

    def R(self, l: int) -> Matrix:
        """``[A^{l-1}B ... AB B]``."""
        if l not in self._R:
            self._R[l] = Matrix.hstack(*[self.power(l - 1 - t) @ self.sys.B for t in range(l)])
        return self._R[l]


class TerminationMatrix:
    """``E_w`` for ``w = 0..w_max`` over the inputs ``u_0..u_last``.

    Block ``(r, t)`` is ``C A^{last + r - t} B``; column ``t*k + c`` belongs to
    input component ``u_t[c]``.
    """

    def __init__(self, cache: StructuralCache, last: int, w_max: int) -> None:
        self.last = last
        self.w_max = w_max
        sys = cache.sys
        rows = [
            [cache.markov(last + r - t + 1) for t in range(last + 1)]
            for r in range(w_max + 1)
        ]
        self.full = Matrix.block(rows) if sys.k else Matrix.zeros(cache.field, (sys.n - sys.k) * (w_max + 1), 0)
        self.p = sys.n - sys.k
        self.labels = [(t, c) for t in range(last + 1) for c in range(sys.k)]
        self._E = [self.full.submatrix(range(self.p * (w + 1)), range(self.full.cols)) for w in range(w_max + 1)]

    def E(self, w: int) -> Matrix:
        return self._E[w]

    def column(self, t: int, c: int, k: int) -> int:
        return t * k + c


def build_structurals(sys: StateSpace, T: int, gamma: int, mu: int) -> tuple[StructuralCache, TerminationMatrix]:
    """Everything the decoder needs for delay bound ``T`` and frames ``u_0..u_{gamma+mu}``."""
    if T < 0 or gamma < 0:
        raise ValueError("T and gamma must be nonnegative")
    cache = StructuralCache(sys, T)
    return cache, TerminationMatrix(cache, gamma + mu, max(sys.s - 1, 0))


# ---------------------------------------------------------------------------
# MDP certificate and quality report
# ---------------------------------------------------------------------------

def F_pattern(sys: StateSpace, j: int) -> Pattern:
    return Pattern.lower_block_triangular(j + 1, sys.n - sys.k, sys.k)


def mdp_system_report(sys: StateSpace, L: int | None = None, *, sizes: str = "all", seed: int = 0,
                      stop_early: bool = True) -> MinorReport:
    """Classify the minors of ``F_L`` (``L`` from ``delta = s`` by default)."""
    if L is None:
        L = compute_L(sys.n, sys.k, sys.s)
        if L is None:
            raise ShapeError("L is undefined for n == k")
    cache = StructuralCache(sys, L)
    return classify_minors(cache.F(L), F_pattern(sys, L), sizes=sizes, seed=seed, stop_early=stop_early)


def is_mdp_system(sys: StateSpace, *, seed: int = 0) -> bool:
    return mdp_system_report(sys, seed=seed).ok


def property2_matrix(cache: StructuralCache, j: int) -> tuple[Matrix, Pattern]:
    sys = cache.sys
    M = Matrix.hstack(cache.obs(j), cache.F(j))
    pattern = Pattern.dense(M.rows, sys.s).hstack(F_pattern(sys, j))
    return M, pattern


def termination_coverage(term: TerminationMatrix, k: int, *, budget: int = 2000, seed: int = 0) -> dict:
    """Fraction of input-column subsets that some ``E_w`` resolves.

    Subsets of every size up to the row count of ``E_{w_max}`` are enumerated
    when there are at most ``budget`` of them, otherwise ``budget`` are drawn
    uniformly (size first, then the subset).
    """
    ncols = term.full.cols
    max_size = min(term.p * (term.w_max + 1), ncols)
    sizes = range(1, max_size + 1)
    total = sum(math.comb(ncols, r) for r in sizes)
    if total <= budget:
        subsets = [c for r in sizes for c in combinations(range(ncols), r)]
        sampled = False
    else:
        rng = random.Random(seed)
        subsets = []
        for _ in range(budget):
            r = rng.choice(list(sizes))
            subsets.append(tuple(sorted(rng.sample(range(ncols), r))))
        sampled = True
    good = 0
    for cols in subsets:
        for w in range(term.w_max + 1):
            if len(cols) <= term.p * (w + 1):
                sub = term.E(w).submatrix(range(term.p * (w + 1)), cols)
                if rank(sub) == len(cols):
                    good += 1
                    break
    return {"subsets": len(subsets), "independent": good, "fraction": good / len(subsets) if subsets else 1.0,
            "sampled": sampled}


def quality_report(sys: StateSpace, T: int, gamma: int, mu: int, *, budget: int = 2000, seed: int = 0) -> dict:
    """Properties 1-4 that make the low-delay decoder effective."""
    cache, term = build_structurals(sys, T, gamma, mu)
    prop1 = {}
    prop2 = {}
    for j in range(1, T + 1):
        prop1[j] = classify_minors(cache.F(j), F_pattern(sys, j), sizes="all", seed=seed).ok
        M, pattern = property2_matrix(cache, j)
        prop2[j] = classify_minors(M, pattern, sizes="all", seed=seed).ok
    return {
        "T": T,
        "property1": {str(j): v for j, v in prop1.items()},
        "property2": {str(j): v for j, v in prop2.items()},
        "property3": termination_coverage(term, sys.k, budget=budget, seed=seed),
        "ell": cache.ell,
    }


# ---------------------------------------------------------------------------
# the (5,3,2) example
# ---------------------------------------------------------------------------

EXAMPLE_THRESHOLD_BITS = 330


def default_field_spec() -> FieldSpec:
    """The vetted GF(2^331) spec shipped with the package."""
    text = resources.files("isoconv.data").joinpath("gf2_331.json").read_text()
    return FieldSpec.from_dict(json.loads(text))


def construct_example_532(spec: FieldSpec | None = None) -> StateSpace:
    """The MDP (5,3,2) system built from a 4x8 superregular matrix in powers of ``a``."""
    spec = default_field_spec() if spec is None else spec
    if spec.order <= 1 << EXAMPLE_THRESHOLD_BITS:
        raise FieldTooSmall(f"the example needs more than 2^{EXAMPLE_THRESHOLD_BITS} field elements")
    F = get_field(spec)
    a = spec.generator
    pw = lambda e: F.pow(a, e)  # noqa: E731
    a8m1 = F.sub(pw(8), 1)
    if not a8m1:
        raise DegenerateField("a^8 = 1")
    c = F.inv(a8m1)
    D = Matrix(F, [[pw(1), pw(2), pw(4)], [pw(2), pw(4), pw(8)]])
    C = Matrix(F, [[pw(8), pw(16)], [pw(16), pw(32)]])
    B = Matrix(F, [
        [1, 0, F.neg(F.mul(pw(32), F.add(pw(8), 1)))],
        [0, 1, F.mul(pw(16), F.add(F.add(pw(16), pw(8)), 1))],
    ])
    A = Matrix(F, [
        [F.sub(pw(64), pw(112)), F.sub(pw(128), pw(240))],
        [F.sub(pw(104), pw(48)), F.sub(pw(232), pw(112))],
    ]).scale(c)
    return StateSpace(A, B, C, D)


def example_superregular_matrix(sys: StateSpace) -> tuple[Matrix, Pattern]:
    """``[C D 0; CA CB D]`` with its zero pattern."""
    cache = StructuralCache(sys, 1)
    return property2_matrix(cache, 1)
