"""Finite fields GF(p^m) in a polynomial basis.

Elements are plain Python ints.  For ``p == 2`` the int is the packed
coefficient bitstring (bit ``i`` holds the coefficient of ``x^i``).  For odd
``p`` it is the base-``p`` number whose digits are the coefficients, least
significant digit first.  In both cases ``0`` is zero, ``1`` is one and
``range(order)`` enumerates the field, so small fields can be swept with a
plain loop.

Three arithmetic back ends are chosen at construction time:

* log/antilog tables when ``p^m <= 2^16``;
* carry-less multiplication with sparse-modulus folding for large binary
  fields (the GF(2^331) instance lives here);
* digit-vector arithmetic for large odd-characteristic fields.
"""

from __future__ import annotations

import functools
import operator
import random
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from ..errors import DivisionByZero

FieldElement = int

TABLE_LIMIT = 1 << 16

# Low-weight irreducible moduli over GF(2), as the exponents strictly between
# 0 and m (x^m and 1 are implied).  Every entry is re-verified with Rabin's
# test when a FieldSpec is validated.
_BINARY_MODULI: dict[int, tuple[int, ...]] = {
    1: (),
    2: (1,),
    3: (1,),
    4: (1,),
    5: (2,),
    6: (1,),
    7: (1,),
    8: (4, 3, 1),
    10: (3,),
    12: (3,),
    16: (5, 3, 1),
    32: (7, 3, 2),
    61: (5, 2, 1),
    64: (4, 3, 1),
    331: (10, 6, 2),
}


# ---------------------------------------------------------------------------
# GF(2)[x] on packed ints
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two packed GF(2) polynomials."""
    if a.bit_count() < b.bit_count():
        a, b = b, a
    if b.bit_count() <= 12:
        r = 0
        while b:
            low = b & -b
            r ^= a << (low.bit_length() - 1)
            b ^= low
        return r
    t = [0] * 16
    t[1] = a
    t[2] = a << 1
    t[4] = a << 2
    t[8] = a << 3
    t[3] = t[1] ^ t[2]
    t[5] = t[1] ^ t[4]
    t[6] = t[2] ^ t[4]
    t[7] = t[3] ^ t[4]
    for i in range(9, 16):
        t[i] = t[8] ^ t[i - 8]
    r = 0
    shift = 0
    while b:
        r ^= t[b & 15] << shift
        b >>= 4
        shift += 4
    return r


def gf2_mod(r: int, f: int) -> int:
    m = f.bit_length() - 1
    while r.bit_length() > m:
        r ^= f << (r.bit_length() - 1 - m)
    return r


def gf2_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise DivisionByZero("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


# ---------------------------------------------------------------------------
# GF(p)[x] on ascending coefficient lists
# ---------------------------------------------------------------------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % p
    return _ptrim(r)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    r = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(r)


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    b = _ptrim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = _ptrim(list(a))
    q = [0] * max(len(r) - len(b) + 1, 0)
    lead_inv = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        c = r[-1] * lead_inv % p
        s = len(r) - len(b)
        q[s] = c
        for i, bi in enumerate(b):
            r[s + i] = (r[s + i] - c * bi) % p
        _ptrim(r)
    return _ptrim(q), r


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == [n]


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Irreducibility test for a monic polynomial over GF(p).

    ``modulus`` is the ascending coefficient list of length ``m + 1``.
    """
    f = _ptrim([c % p for c in modulus])
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    if p == 2:
        fi = sum(1 << i for i, c in enumerate(f) if c)

        def frob(k: int) -> int:
            x = 2
            for _ in range(k):
                x = gf2_mod(clmul(x, x), fi)
            return x

        if frob(m) != 2:
            return False
        return all(gf2_gcd(frob(m // q) ^ 2, fi) == 1 for q in _prime_factors(m))

    def powmod(base: list[int], e: int) -> list[int]:
        result = [1]
        while e:
            if e & 1:
                result = _pdivmod(_pmul(result, base, p), f, p)[1]
            base = _pdivmod(_pmul(base, base, p), f, p)[1]
            e >>= 1
        return result

    # distinct-degree test: f is irreducible iff it has no factor of degree
    # i <= m/2, i.e. gcd(x^(p^i) - x, f) = 1; reducible inputs usually stop early
    x = [0, 1]
    for _ in range(m // 2):
        x = powmod(x, p)
        if len(_pgcd(_psub(x, [0, 1], p), f, p)) != 1:
            return False
    return True


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Deterministic search for a monic irreducible of degree ``m``, sparse when possible."""
    if p == 2 and m in _BINARY_MODULI:
        return _binary_modulus(m, _BINARY_MODULI[m])
    if m == 1:
        return (0, 1)
    if p == 2:
        for a in range(1, m):
            cand = _binary_modulus(m, (a,))
            if is_irreducible(2, cand):
                return cand
        for a in range(3, m):
            for b in range(2, a):
                for c in range(1, b):
                    cand = _binary_modulus(m, (a, b, c))
                    if is_irreducible(2, cand):
                        return cand
        raise ValueError(f"no sparse irreducible of degree {m} found")
    # odd p: x^m + a x + b first, then x^m + a x^2 + b x + c
    for a in range(p):
        for b in range(1, p):
            cand = [b, a] + [0] * (m - 2) + [1] if m > 2 else [b, a, 1]
            if is_irreducible(p, cand):
                return tuple(cand)
    for a in range(p):
        for b in range(p):
            for c in range(1, p):
                cand = [c, b, a] + [0] * (m - 3) + [1]
                if m > 3 and is_irreducible(p, cand):
                    return tuple(cand)
    # no sparse one: seeded dense candidates, about one in m is irreducible
    rng = random.Random(p * 1_000_003 + m)
    for _ in range(200 * m):
        cand = [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(m - 1)] + [1]
        if is_irreducible(p, cand):
            return tuple(cand)
    raise ValueError(f"no irreducible of degree {m} over GF({p}) found")


def _binary_modulus(m: int, middle: Sequence[int]) -> tuple[int, ...]:
    coeffs = [0] * (m + 1)
    coeffs[0] = coeffs[m] = 1
    for e in middle:
        coeffs[e] = 1
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# FieldSpec
# ---------------------------------------------------------------------------

def _encode_coeffs(coeffs: Sequence[int], p: int) -> int:
    if p == 2:
        return sum(1 << i for i, c in enumerate(coeffs) if c % 2)
    v = 0
    for c in reversed(coeffs):
        v = v * p + c % p
    return v


def _decode_coeffs(v: int, p: int, length: int) -> tuple[int, ...]:
    if p == 2:
        return tuple((v >> i) & 1 for i in range(length))
    out = []
    for _ in range(length):
        v, d = divmod(v, p)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True)
class FieldSpec:
    """Description of GF(p^m): characteristic, degree, modulus, generator.

    ``modulus`` is the ascending coefficient tuple of a monic irreducible of
    degree ``degree``.  ``generator`` is the element used as the primitive
    element candidate ``a`` (defaults to the class of ``x``).
    """

    characteristic: int
    degree: int
    modulus: tuple[int, ...]
    generator: FieldElement = dc_field(default=-1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modulus", tuple(int(c) % self.characteristic for c in self.modulus))
        if self.generator == -1:
            object.__setattr__(self, "generator", self._x_class())

    def _x_class(self) -> int:
        p, m = self.characteristic, self.degree
        if m > 1:
            return p
        # x mod (x + c) = -c
        return (-self.modulus[0]) % p if self.modulus else 0

    @property
    def order(self) -> int:
        return self.characteristic ** self.degree

    @classmethod
    def binary(cls, m: int) -> "FieldSpec":
        return cls(2, m, find_irreducible(2, m))

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        """GF(p) with modulus ``x - g`` so that ``x`` is a primitive root."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        g = _primitive_root(p)
        return cls(p, 1, ((-g) % p, 1))

    @classmethod
    def extension(cls, p: int, m: int) -> "FieldSpec":
        if m == 1:
            return cls.prime(p)
        return cls(p, m, find_irreducible(p, m))

    def validate(self) -> "FieldSpec":
        p, m = self.characteristic, self.degree
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be positive")
        if len(self.modulus) != m + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of the declared degree")
        if not _irreducible_cached(p, self.modulus):
            raise ValueError("modulus is reducible")
        if not 0 < self.generator < self.order:
            raise ValueError("generator candidate must be a nonzero field element")
        return self

    # -- hex interchange ---------------------------------------------------
    @property
    def hex_width(self) -> int:
        return max(1, -(-self.degree // 4)) if self.characteristic == 2 else len(f"{self.order - 1:x}")

    def to_dict(self) -> dict[str, object]:
        p = self.characteristic
        mod_int = _encode_coeffs(self.modulus, p)
        width = -(-(self.degree + 1) // 4) if p == 2 else len(f"{p ** (self.degree + 1) - 1:x}")
        return {
            "characteristic": p,
            "degree": self.degree,
            "modulus": f"{mod_int:0{width}x}",
            "generator": f"{self.generator:0{self.hex_width}x}",
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        p = int(d["characteristic"])
        m = int(d["degree"])
        modulus = _decode_coeffs(int(str(d["modulus"]), 16), p, m + 1)
        gen = int(str(d["generator"]), 16) if "generator" in d else -1
        return cls(p, m, modulus, gen).validate()

    def describe(self) -> str:
        return f"GF({self.characteristic}^{self.degree})" if self.degree > 1 else f"GF({self.characteristic})"


@functools.lru_cache(maxsize=None)
def _irreducible_cached(p: int, modulus: tuple[int, ...]) -> bool:
    return is_irreducible(p, modulus)


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError("no primitive root")  # pragma: no cover


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------

class Field:
    """Arithmetic in GF(p^m) over int-encoded elements.

    Use :func:`get_field` to obtain shared instances.
    """

    def __init__(self, spec: FieldSpec) -> None:
        spec.validate()
        self.spec = spec
        self.p = spec.characteristic
        self.m = spec.degree
        self.order = spec.order
        self.zero = 0
        self.one = 1
        self._mod_int = _encode_coeffs(spec.modulus, self.p)
        if self.p == 2:
            self.add = self.sub = operator.xor
            self.neg = _identity
        else:
            self.add = self._add_digits
            self.sub = self._sub_digits
            self.neg = self._neg_digits
        if self.order <= TABLE_LIMIT:
            self._build_tables()
            self.mul = self._mul_table
            self.inv = self._inv_table
        elif self.p == 2:
            self._mask = (1 << self.m) - 1
            self._low = self._mod_int ^ (1 << self.m)
            self._low_exps = [i for i in range(self.m) if self._low >> i & 1]
            self.mul = self._mul_gf2
            self.inv = self._inv_gf2
        else:
            self.mul = self._mul_generic
            self.inv = self._inv_generic
        if self.p != 2 and self.m == 1:
            p = self.p
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.neg = lambda a: (-a) % p

    def __repr__(self) -> str:
        return f"Field({self.spec.describe()})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    @property
    def name(self) -> str:
        return self.spec.describe()

    # -- digit arithmetic (odd p) -------------------------------------------
    def to_coeffs(self, a: FieldElement) -> tuple[int, ...]:
        return _decode_coeffs(a, self.p, self.m)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients")
        return _encode_coeffs(coeffs, self.p)

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        return _encode_coeffs([(x + y) % p for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))], p)

    def _sub_digits(self, a: int, b: int) -> int:
        p = self.p
        return _encode_coeffs([(x - y) % p for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))], p)

    def _neg_digits(self, a: int) -> int:
        p = self.p
        return _encode_coeffs([(-x) % p for x in self.to_coeffs(a)], p)

    # -- table back end -------------------------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        if self.p == 2:
            return gf2_mod(clmul(a, b), self._mod_int)
        prod = _pmul(self.to_coeffs(a), self.to_coeffs(b), self.p)
        rem = _pdivmod(prod, self.spec.modulus, self.p)[1]
        return _encode_coeffs(rem, self.p)

    def _build_tables(self) -> None:
        q = self.order
        g = self._find_primitive()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self._slow_mul(v, g)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log = exp, log
        self.primitive = g

    def _find_primitive(self) -> int:
        q = self.order
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._slow_pow(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise ValueError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _mul_table(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def _inv_table(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    # -- large binary back end ------------------------------------------------
    def _mul_gf2(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        r = clmul(a, b)
        m = self.m
        mask = self._mask
        exps = self._low_exps
        while r >> m:
            hi = r >> m
            r &= mask
            for e in exps:
                r ^= hi << e
        return r

    def _inv_gf2(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        # extended Euclid in GF(2)[x]: g1*a = u, g2*a = v (mod f)
        u, v = a, self._mod_int
        g1, g2 = 1, 0
        while u != 1:
            j = u.bit_length() - v.bit_length()
            if j < 0:
                u, v, g1, g2 = v, u, g2, g1
                j = -j
            u ^= v << j
            g1 ^= g2 << j
        return gf2_mod(g1, self._mod_int)

    # -- generic odd-p back end ----------------------------------------------
    def _mul_generic(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._slow_mul(a, b)

    def _inv_generic(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        p = self.p
        r0, r1 = list(self.spec.modulus), list(self.to_coeffs(a))
        _ptrim(r1)
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        c = pow(r1[0], p - 2, p)
        s = [x * c % p for x in s1]
        s = _pdivmod(s, self.spec.modulus, p)[1]
        return _encode_coeffs(s + [0] * (self.m - len(s)), p)

    # -- derived operations ---------------------------------------------------
    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.order <= TABLE_LIMIT:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        r = 1
        mul = self.mul
        while e:
            if e & 1:
                r = mul(r, a)
            a = mul(a, a)
            e >>= 1
        return r

    def elements(self) -> Iterator[FieldElement]:
        return iter(range(self.order))

    def nonzero_elements(self) -> Iterator[FieldElement]:
        return iter(range(1, self.order))

    def random(self, rng) -> FieldElement:
        """Uniform element; ``rng`` needs ``randrange`` (e.g. random.Random)."""
        return rng.randrange(self.order)

    def random_nonzero(self, rng) -> FieldElement:
        return 1 + rng.randrange(self.order - 1)

    # -- hex interchange ------------------------------------------------------
    def to_hex(self, a: FieldElement) -> str:
        return f"{a:0{self.spec.hex_width}x}"

    def from_hex(self, s: str) -> FieldElement:
        v = int(s, 16)
        if not 0 <= v < self.order:
            raise ValueError(f"hex value {s!r} is not an element of {self.name}")
        return v


def _identity(a: int) -> int:
    return a


@functools.lru_cache(maxsize=64)
def get_field(spec: FieldSpec) -> Field:
    return Field(spec)


def gf(p: int, m: int = 1) -> Field:
    """Shorthand: the default GF(p^m) instance."""
    return get_field(FieldSpec.extension(p, m))
