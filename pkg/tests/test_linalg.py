from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from isoconv.algebra import Matrix, gf, mat_vec, minor, nullspace, rank, rref, solve_determined
from isoconv.algebra.linalg import det, full_size_minors, inverse, solve_rows
from isoconv.errors import DivisionByZero, ShapeError

SMALL = [(2, 1), (3, 1), (2, 2)]


@st.composite
def matrices(draw, p=2, m=1, max_rows=4, max_cols=4):
    F = gf(p, m)
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    data = draw(st.lists(st.lists(st.integers(0, F.order - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(F, data)


def row_space_size(M: Matrix) -> int:
    F = M.field
    seen = set()
    for coeffs in itertools.product(list(F.elements()), repeat=M.rows):
        v = [0] * M.cols
        for a, row in zip(coeffs, M.tolist()):
            v = [F.add(x, F.mul(a, y)) for x, y in zip(v, row)]
        seen.add(tuple(v))
    return len(seen)


def leibniz(M: Matrix) -> int:
    F = M.field
    n = M.rows
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i, j in enumerate(perm):
            term = F.mul(term, M[i, j])
        total = F.sub(total, term) if inversions % 2 else F.add(total, term)
    return total


@pytest.mark.parametrize("p,m", SMALL)
def test_rank_matches_row_space_size(p, m):
    @settings(max_examples=60, deadline=None)
    @given(matrices(p, m, 3, 4))
    def check(M):
        assert M.field.order ** rank(M) == row_space_size(M)

    check()


@pytest.mark.parametrize("p,m", SMALL)
def test_rref_is_reduced_and_row_equivalent(p, m):
    @settings(max_examples=60, deadline=None)
    @given(matrices(p, m, 4, 5))
    def check(M):
        E = rref(M)
        R = E.matrix
        for r, c in enumerate(E.pivots):
            assert R[r, c] == 1
            assert all(R[i, c] == 0 for i in range(R.rows) if i != r)
            assert all(R[r, t] == 0 for t in range(c))
        assert all(not any(R.row(i)) for i in range(E.rank, R.rows))
        assert rank(Matrix.vstack(M, R)) == E.rank

    check()


@pytest.mark.parametrize("p,m", SMALL)
def test_solve_determinedness_matches_enumeration(p, m):
    F = gf(p, m)

    @settings(max_examples=60, deadline=None)
    @given(matrices(p, m, 4, 3), st.data())
    def check(A, data):
        b = data.draw(st.lists(st.integers(0, F.order - 1), min_size=A.rows, max_size=A.rows))
        sols = [x for x in itertools.product(list(F.elements()), repeat=A.cols) if A.apply(x) == b]
        out = solve_determined(A, b)
        assert out.consistent == bool(sols)
        if not sols:
            return
        for j in range(A.cols):
            vals = {x[j] for x in sols}
            if len(vals) == 1:
                assert out.values[j] == vals.pop()
            else:
                assert out.values[j] is None
        assert out.all_determined == (len(sols) == 1)

    check()


def test_solve_rows_counts_multiplications():
    F = gf(2, 8)
    out = solve_rows(F, [[1, 0, 5], [0, 1, 7]], 2)
    assert out.values == [5, 7] and out.mult_count == 0
    out = solve_rows(F, [[3, 0, 5]], 2)
    assert out.values == [F.div(5, 3), None]
    assert out.mult_count == 2  # one inversion, one scaled entry


def test_solve_shape_errors():
    F = gf(2, 2)
    A = Matrix(F, [[1, 0], [0, 1]])
    with pytest.raises(ShapeError):
        solve_determined(A, [1])
    with pytest.raises(ShapeError):
        solve_determined(A, Matrix(F, [[1, 1], [0, 0]]))


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_det_matches_leibniz(p, m):
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.data())
    def check(n, data):
        F = gf(p, m)
        rows = data.draw(st.lists(st.lists(st.integers(0, F.order - 1), min_size=n, max_size=n),
                                  min_size=n, max_size=n))
        M = Matrix(F, rows)
        assert det(M) == leibniz(M)

    check()


def test_det_needs_square():
    with pytest.raises(ShapeError):
        det(Matrix(gf(2, 1), [[1, 0]]))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (2, 64)])
def test_inverse_round_trip(p, m):
    F = gf(p, m)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.data())
    def check(n, data):
        rows = data.draw(st.lists(st.lists(st.integers(0, F.order - 1), min_size=n, max_size=n),
                                  min_size=n, max_size=n))
        M = Matrix(F, rows)
        if det(M) == 0:
            with pytest.raises(DivisionByZero):
                inverse(M)
        else:
            I = Matrix.identity(F, n)
            assert inverse(M) @ M == I
            assert M @ inverse(M) == I

    check()


@pytest.mark.parametrize("p,m", SMALL)
def test_nullspace_is_a_kernel_basis(p, m):
    @settings(max_examples=60, deadline=None)
    @given(matrices(p, m, 4, 5))
    def check(M):
        basis = nullspace(M)
        assert len(basis) == M.cols - rank(M)
        for v in basis:
            assert not any(M.apply(v))
        if basis:
            assert rank(Matrix(M.field, basis)) == len(basis)

    check()


def test_minor_indices_are_validated():
    F = gf(2, 2)
    M = Matrix(F, [[1, 2, 3], [2, 3, 1]])
    assert minor(M, [0, 1], [0, 2]) == det(M.submatrix([0, 1], [0, 2]))
    for rows, cols in ([[1, 0], [0, 1]], [[0, 1], [0, 3]], [[0], [0, 1]], [[0, 0], [1, 2]]):
        with pytest.raises(IndexError):
            minor(M, rows, cols)
    assert len(list(full_size_minors(M))) == 3
    assert len(list(full_size_minors(M.T))) == 3


def test_mat_vec_skips_trivial_products():
    F = gf(2, 8)
    M = Matrix(F, [[1, 0, 3], [2, 5, 0]])
    out, mults = mat_vec(M, [7, 1, 4])
    assert out == M.apply([7, 1, 4])
    # 1*7 is free, 3*4 costs one, 2*7 costs one, 5*1 is free
    assert mults == 2
    with pytest.raises(ShapeError):
        mat_vec(M, [1, 2])


def test_matrix_power_and_blocks():
    F = gf(3, 1)
    A = Matrix(F, [[1, 1], [0, 1]])
    assert A.power(3) == Matrix(F, [[1, 0], [0, 1]])
    assert A.power(0) == Matrix.identity(F, 2)
    B = Matrix.block([[A, Matrix.zeros(F, 2, 1)], [Matrix.zeros(F, 1, 2), Matrix.identity(F, 1)]])
    assert B.shape == (3, 3) and det(B) == 1
