from __future__ import annotations

import itertools
import random

import pytest

from isoconv.algebra import FieldSpec, get_field
from isoconv.convcode import PolyGenerator, column_degrees_and_reduced, encode, random_generator, realizable_head
from isoconv.sysrep import construct_example_532, generator_of


@pytest.fixture(scope="session")
def example_system():
    return construct_example_532()


@pytest.fixture(scope="session")
def example_generator(example_system):
    return generator_of(example_system)


def small_field(p: int, m: int = 1):
    return get_field(FieldSpec.extension(p, m))


def realizable_generator(F, n, k, degrees, rng) -> PolyGenerator:
    """Random column reduced generator with invertible input block."""
    while True:
        G = random_generator(F, n, k, degrees, rng)
        if column_degrees_and_reduced(G)[1] and realizable_head(G):
            return G


def all_codewords(G: PolyGenerator, gamma: int) -> list[list[list[int]]]:
    """Every encoding of a message of degree at most ``gamma`` (tiny codes only)."""
    F = G.field
    words = []
    for flat in itertools.product(list(F.elements()), repeat=G.k * (gamma + 1)):
        msg = [list(flat[i * G.k:(i + 1) * G.k]) for i in range(gamma + 1)]
        words.append(encode(G, msg))
    return words


@pytest.fixture
def rng():
    return random.Random(12345)
