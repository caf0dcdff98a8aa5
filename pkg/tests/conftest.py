"""Shared fixtures and random generators for the test suite."""

from fractions import Fraction

import pytest

from heightdyn import DivisorClass, PullbackMap, QuadraticNumber
from heightdyn import registry


def qn(a, b=0, d=1):
    return QuadraticNumber(Fraction(a), Fraction(b), d)


def rand_fraction(rng, lo=1, hi=9):
    return Fraction(rng.randint(lo, hi), rng.randint(1, hi))


def rand_ample(rng, lattice):
    # strictly positive coordinates lie in the interior of both cone
    # variants used by the registry lattices
    return lattice.divisor(*(rand_fraction(rng) for _ in range(lattice.rank)))


def rand_orthant_dominant(rng, rank, top=4):
    # nonnegative integer matrix with a planted permutation, so every
    # row and every column has a positive entry (dominant on the orthant)
    rows = [[rng.randint(0, top - 1) for _ in range(rank)] for _ in range(rank)]
    perm = list(range(rank))
    rng.shuffle(perm)
    for col, row in enumerate(perm):
        rows[row][col] = rng.randint(1, top)
    return PullbackMap.from_rows(rows)


def rand_involution_word(rng, generators, identity_rank, max_len=4):
    word = PullbackMap.identity(identity_rank)
    for _ in range(rng.randint(1, max_len)):
        word = word @ rng.choice(generators)
    return word


def rand_k3_word(rng, max_len=4):
    return rand_involution_word(
        rng, [registry.k3_iota1(), registry.k3_iota2()], 2, max_len)


def rand_triple_word(rng, max_len=4):
    return rand_involution_word(
        rng, [registry.triple_line_iota(j) for j in range(3)], 3, max_len)


def divisor_of(*values):
    return DivisorClass.of(values)


@pytest.fixture
def k3():
    return registry.k3_lattice()


@pytest.fixture
def tri():
    return registry.triple_line_lattice()
