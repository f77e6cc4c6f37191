"""Univariate polynomials over a finite field, as ascending coefficient lists.

The zero polynomial is ``[]``; every other polynomial has a nonzero last
coefficient.  Only what the generator-matrix code needs is provided: ring
operations, monic gcd, evaluation, interpolation and small determinants.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import FieldTooSmall
from .field import Field
from .linalg import det, Matrix

Poly = list


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def degree(a: Sequence[int]) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(trim(a)) - 1


def add(F: Field, a: Sequence[int], b: Sequence[int]) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = F.add(out[i], x)
    return trim(out)


def sub(F: Field, a: Sequence[int], b: Sequence[int]) -> Poly:
    return add(F, a, [F.neg(x) for x in b])


def mul(F: Field, a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F: Field, a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    q = [0] * max(len(r) - len(b) + 1, 0)
    lead_inv = F.inv(b[-1])
    while len(r) >= len(b):
        shift = len(r) - len(b)
        c = F.mul(r[-1], lead_inv)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, y))
        r = trim(r)
    return trim(q), r


def monic(F: Field, a: Sequence[int]) -> Poly:
    a = trim(a)
    if not a:
        return []
    inv = F.inv(a[-1])
    return [F.mul(x, inv) for x in a]


def gcd(F: Field, a: Sequence[int], b: Sequence[int]) -> Poly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def evaluate(F: Field, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def interpolate(F: Field, xs: Sequence[int], ys: Sequence[int]) -> Poly:
    """Lagrange interpolation through distinct points."""
    result: Poly = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        num: Poly = [1]
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                num = mul(F, num, [F.neg(xj), 1])
                den = F.mul(den, F.sub(xi, xj))
        result = add(F, result, [F.mul(c, F.div(yi, den)) for c in num])
    return result


def det_laplace(F: Field, M: Sequence[Sequence[Sequence[int]]]) -> Poly:
    """Determinant of a square polynomial matrix by cofactor expansion."""
    n = len(M)
    if n == 0:
        return [1]
    if n == 1:
        return trim(M[0][0])
    total: Poly = []
    for j in range(n):
        if not trim(M[0][j]):
            continue
        sub_m = [row[:j] + row[j + 1:] for row in M[1:]]
        term = mul(F, M[0][j], det_laplace(F, sub_m))
        total = add(F, total, term) if j % 2 == 0 else sub(F, total, term)
    return total


LAPLACE_MAX = 7


def det_poly(F: Field, M: Sequence[Sequence[Sequence[int]]], degree_bound: int) -> Poly:
    """Determinant of a square polynomial matrix whose determinant has degree
    at most ``degree_bound``.

    Evaluation at ``degree_bound + 1`` points followed by interpolation when
    the field is large enough, cofactor expansion otherwise.
    """
    n = len(M)
    points = degree_bound + 1
    if F.order >= points and n > 2:
        # the integer codes 0..points-1 are distinct field elements
        xs = list(range(points))
        ys = [det(Matrix(F, [[evaluate(F, e, x) for e in row] for row in M], n)) for x in xs]
        return interpolate(F, xs, ys)
    if n <= LAPLACE_MAX:
        return det_laplace(F, M)
    raise FieldTooSmall(
        f"need {points} evaluation points in a field of order {F.order} for a {n}x{n} determinant"
    )

