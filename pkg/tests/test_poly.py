from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from isoconv.algebra import gf
from isoconv.algebra import poly as P
from isoconv.algebra.linalg import Matrix, det
from isoconv.errors import FieldTooSmall


def polys(F, max_deg=5):
    return st.lists(st.integers(0, F.order - 1), max_size=max_deg + 1).map(P.trim)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 3), (5, 1)])
def test_ring_identities_and_division(p, m):
    F = gf(p, m)

    @settings(max_examples=80, deadline=None)
    @given(polys(F), polys(F), polys(F))
    def check(a, b, c):
        assert P.mul(F, a, P.add(F, b, c)) == P.add(F, P.mul(F, a, b), P.mul(F, a, c))
        assert P.sub(F, P.add(F, a, b), b) == a
        if b:
            q, r = P.divmod_(F, a, b)
            assert P.add(F, P.mul(F, q, b), r) == a
            assert P.degree(r) < P.degree(b)
        else:
            with pytest.raises(ZeroDivisionError):
                P.divmod_(F, a, b)

    check()


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_gcd_divides_and_is_maximal(p, m):
    F = gf(p, m)

    @settings(max_examples=60, deadline=None)
    @given(polys(F, 4), polys(F, 4))
    def check(a, b):
        g = P.gcd(F, a, b)
        if not a and not b:
            assert g == []
            return
        assert g[-1] == 1
        for x in (a, b):
            assert P.divmod_(F, x, g)[1] == []
        # every monic common divisor of degree up to 4 divides g
        for d in range(1, 5):
            for tail in itertools.product(list(F.elements()), repeat=d):
                h = list(tail) + [1]
                if all(not P.divmod_(F, x, h)[1] for x in (a, b)):
                    assert not P.divmod_(F, g, h)[1]

    check()


def test_interpolation_recovers_polynomial():
    F = gf(2, 8)

    @settings(max_examples=60, deadline=None)
    @given(polys(F, 6))
    def check(a):
        xs = list(range(7))
        assert P.interpolate(F, xs, [P.evaluate(F, a, x) for x in xs]) == a

    check()


def _poly_matrices(F, n, max_deg):
    entry = polys(F, max_deg)
    return st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)


@pytest.mark.parametrize("p,m", [(2, 4), (3, 2), (2, 1)])
def test_det_poly_matches_cofactor_expansion(p, m):
    F = gf(p, m)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.data())
    def check(n, data):
        M = data.draw(_poly_matrices(F, n, 2))
        want = P.det_laplace(F, M)
        assert P.det_poly(F, M, 2 * n) == want
        # evaluation commutes with the determinant
        for x in range(min(F.order, 3)):
            assert P.evaluate(F, want, x) == det(Matrix(F, [[P.evaluate(F, e, x) for e in row] for row in M], n))

    check()


def test_det_poly_refuses_large_matrix_over_tiny_field():
    F = gf(2, 1)
    n = 8
    M = [[[1] if i == j else [] for j in range(n)] for i in range(n)]
    with pytest.raises(FieldTooSmall):
        P.det_poly(F, M, 20)


def test_degree_and_trim():
    assert P.degree([]) == -1
    assert P.degree([0, 0]) == -1
    assert P.trim([1, 0, 2, 0]) == [1, 0, 2]
    assert P.monic(gf(5, 1), [2, 4]) == [3, 1]
