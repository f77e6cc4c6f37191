from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from isoconv.algebra import FieldSpec, clmul, get_field, gf, is_irreducible
from isoconv.errors import DivisionByZero
from isoconv.sysrep import default_field_spec

FIELDS = [(2, 1), (2, 2), (2, 3), (2, 8), (3, 1), (3, 2), (5, 1), (7, 2), (2, 64), (3, 41), (2, 331)]


def naive_mul(p: int, modulus: tuple[int, ...], a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Schoolbook product of coefficient vectors reduced by the monic modulus."""
    m = len(modulus) - 1
    prod = [0] * (2 * m)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(2 * m - 1, m - 1, -1):
        c = prod[d]
        if c:
            for i, mc in enumerate(modulus):
                prod[d - m + i] = (prod[d - m + i] - c * mc) % p
    return tuple(prod[:m])


def elements(F):
    return st.integers(min_value=0, max_value=F.order - 1)


def brute_irreducible(p: int, modulus: tuple[int, ...]) -> bool:
    m = len(modulus) - 1
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            f = list(tail) + [1]
            r = list(modulus)
            for shift in range(m - d, -1, -1):
                c = r[shift + d]
                if c:
                    for i, fc in enumerate(f):
                        r[shift + i] = (r[shift + i] - c * fc) % p
            if not any(r):
                return False
    return True


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_axioms(p, m):
    F = gf(p, m)

    @settings(max_examples=60, deadline=None)
    @given(elements(F), elements(F), elements(F))
    def check(a, b, c):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(F.add(a, b), b) == a
        assert F.mul(a, 1) == a and F.mul(a, 0) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.div(F.mul(b, a), a) == b

    check()


@pytest.mark.parametrize("p,m", [(2, 3), (2, 8), (3, 2), (5, 1), (7, 2), (2, 64), (3, 41), (2, 331)])
def test_multiplication_matches_schoolbook(p, m):
    F = gf(p, m)
    mod = F.spec.modulus

    @settings(max_examples=40, deadline=None)
    @given(elements(F), elements(F))
    def check(a, b):
        want = naive_mul(p, mod, F.to_coeffs(a), F.to_coeffs(b))
        assert F.to_coeffs(F.mul(a, b)) == want

    check()


def test_inverse_of_zero_raises():
    for p, m in [(2, 4), (2, 64), (3, 41)]:
        with pytest.raises(DivisionByZero):
            gf(p, m).inv(0)


@pytest.mark.parametrize("p,m", [(2, 4), (3, 2), (5, 1)])
def test_multiplicative_group_is_cyclic_of_the_right_order(p, m):
    F = gf(p, m)
    for a in F.nonzero_elements():
        assert F.pow(a, F.order - 1) == 1
    orders = [next(e for e in range(1, F.order) if F.pow(a, e) == 1) for a in F.nonzero_elements()]
    assert max(orders) == F.order - 1


def test_pow_negative_and_zero():
    F = gf(2, 8)
    assert F.pow(7, 0) == 1
    assert F.mul(F.pow(7, -3), F.pow(7, 3)) == 1


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_agrees_with_trial_division(p, m):
    for tail in itertools.product(range(p), repeat=m):
        mod = tuple(tail) + (1,)
        assert is_irreducible(p, mod) == brute_irreducible(p, mod), mod


def test_clmul_matches_bit_loop():
    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2 ** 200), st.integers(0, 2 ** 200))
    def check(a, b):
        want = 0
        for i in range(b.bit_length()):
            if b >> i & 1:
                want ^= a << i
        assert clmul(a, b) == want

    check()


def test_hex_round_trip_and_width():
    F = gf(2, 331)
    assert F.spec.hex_width == 83
    for a in [0, 1, 2, (1 << 331) - 1, 0x445]:
        h = F.to_hex(a)
        assert len(h) == 83
        assert F.from_hex(h) == a
    with pytest.raises(ValueError):
        F.from_hex("f" * 84)


def test_spec_round_trip_and_validation():
    spec = default_field_spec()
    assert spec.degree == 331 and spec.characteristic == 2
    # x^331 + x^10 + x^6 + x^2 + 1
    assert [i for i, c in enumerate(spec.modulus) if c] == [0, 2, 6, 10, 331]
    assert FieldSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1)).validate()  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ValueError):
        FieldSpec(4, 1, (1, 1)).validate()
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 1, 1), generator=4).validate()


def test_elements_enumerate_the_field():
    F = gf(3, 2)
    assert list(F.elements()) == list(range(9))
    assert F.from_coeffs(F.to_coeffs(7)) == 7
    assert get_field(F.spec) is F
