"""Exact Weil heights on products of projective spaces over the rationals."""

import math
import random
from fractions import Fraction

import pytest

from heightdyn import (
    BasePointError,
    DivisorClass,
    MultidegreeError,
    MultiHomogeneousMap,
    MultiPoint,
    ambient_height,
    enumerate_points,
    enumerate_projective,
    evaluate,
    height_wrt,
    multidegree_matrix,
    normalize,
    registry,
    weil_height,
)


def degenerate_map():
    # (x : y) -> (x^2 : x y), undefined where x = 0
    return MultiHomogeneousMap(
        signature=(1,),
        targets=((((1, (2, 0)),), ((1, (1, 1)),)),),
    )


def test_normalize_examples():
    assert normalize((3, 6)).coords == (1, 2)
    assert normalize((-2, 4)).coords == (1, -2)
    assert normalize((0, -5)).coords == (0, 1)
    assert normalize((4, -6, 10)).coords == (2, -3, 5)
    assert normalize((Fraction(1, 2), Fraction(3, 4))).coords == (2, 3)


def test_normalize_rejects_zero_vector():
    with pytest.raises(BasePointError):
        normalize((0, 0))
    with pytest.raises(BasePointError):
        normalize(())


def test_normalize_idempotent_random():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.choice([2, 3, 4])
        coords = [Fraction(rng.randint(-30, 30), rng.randint(1, 9))
                  for _ in range(n)]
        if all(c == 0 for c in coords):
            coords[0] = 1
        once = normalize(coords)
        assert normalize(once.coords) == once
        assert math.gcd(*once.coords) == 1
        assert next(c for c in once.coords if c != 0) > 0


def test_weil_height_examples():
    assert weil_height(normalize((1, 2))) == pytest.approx(math.log(2))
    assert weil_height(normalize((1, 1))) == 0.0
    assert weil_height(normalize((3, 7))) == pytest.approx(math.log(7))
    assert weil_height(normalize((0, 1))) == 0.0


def test_ambient_height_sums_factors():
    p = MultiPoint.of([(1, 2), (5, 3)])
    assert ambient_height(p) == pytest.approx(math.log(2) + math.log(5))


def test_height_wrt_weights_factors():
    point = MultiPoint.of([(0, 1), (7, 9)])
    assert height_wrt(DivisorClass.of([1, 0]), point) == 0.0
    assert height_wrt(DivisorClass.of([0, 1]), point) == pytest.approx(math.log(9))
    assert height_wrt(DivisorClass.of([2, 3]), point) == pytest.approx(3 * math.log(9))
    mixed = MultiPoint.of([(1, 2), (1, 3)])
    d = DivisorClass.of([Fraction(1, 2), 1])
    assert height_wrt(d, mixed) == pytest.approx(0.5 * math.log(2) + math.log(3))


def test_evaluate_examples():
    squaring = registry.squaring_map()
    assert evaluate(squaring, MultiPoint.of([(2, 3)])) == MultiPoint.of([(4, 9)])
    swap = registry.swap_product_map()
    assert (evaluate(swap, MultiPoint.of([(1, 2), (1, 3)]))
            == MultiPoint.of([(1, 9), (1, 8)]))
    sum_square = registry.sum_square_map()
    assert evaluate(sum_square, MultiPoint.of([(0, 1)])) == MultiPoint.of([(1, 0)])
    assert evaluate(sum_square, MultiPoint.of([(1, 1)])) == MultiPoint.of([(2, 1)])


def test_evaluate_normalizes_output():
    doubler = registry.power_product_map(2, 3)
    image = evaluate(doubler, MultiPoint.of([(2, 4), (3, 6)]))
    assert image == MultiPoint.of([(1, 4), (1, 8)])


def test_evaluate_base_point():
    with pytest.raises(BasePointError):
        evaluate(degenerate_map(), MultiPoint.of([(0, 1)]))


def test_multidegree_examples():
    rows, pullback = multidegree_matrix(registry.swap_product_map())
    assert rows == ((0, 3), (2, 0))
    assert pullback is not None
    assert pullback.apply(DivisorClass.of([1, 1])) == DivisorClass.of([3, 2])

    rows, _ = multidegree_matrix(registry.squaring_map())
    assert rows == ((2,),)

    rows, _ = multidegree_matrix(registry.power_product_map(2, 3))
    assert rows == ((2, 0), (0, 3))


def test_multidegree_rejects_mixed_degrees():
    # (x : y^2) is not multihomogeneous in the target factor
    with pytest.raises(MultidegreeError):
        MultiHomogeneousMap(
            signature=(1,),
            targets=((((1, (1, 0)),), ((1, (0, 2)),)),),
        )


def test_enumerate_projective_small():
    points = [p.coords for p in enumerate_projective(1, 1)]
    assert points == [(0, 1), (1, -1), (1, 0), (1, 1)]
    assert len(enumerate_projective(1, 2)) == 8


def test_enumerate_projective_complete():
    # oracle: brute force over coprime integer pairs, leading sign positive
    for bound in (1, 2, 3, 5, 8):
        expected = set()
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                if (a or b) and math.gcd(a, b) == 1:
                    if (a if a != 0 else b) > 0:
                        expected.add((a, b))
        got = [p.coords for p in enumerate_projective(1, bound)]
        assert set(got) == expected
        assert len(got) == len(expected)
        assert got == sorted(got)


def test_enumerate_projective_deterministic():
    assert enumerate_projective(2, 2) == enumerate_projective(2, 2)


def test_enumerate_points_product():
    points = list(enumerate_points([1, 1], 1))
    assert len(points) == 16
    line = enumerate_projective(1, 1)
    assert points == [MultiPoint((p, q)) for p in line for q in line]
    assert len(list(enumerate_points([2], 1))) == 13


def test_height_of_enumerated_points_bounded():
    for point in enumerate_points([1, 1], 3):
        assert ambient_height(point) <= 2 * math.log(3) + 1e-12
        assert all(p.height() <= math.log(3) + 1e-12 for p in point.factors)


def test_coprime_monomial_height_identity():
    # x -> x^2 multiplies the height of every point by exactly two
    squaring = registry.squaring_map()
    for p in enumerate_projective(1, 20):
        before = p.height()
        after = ambient_height(evaluate(squaring, MultiPoint((p,))))
        assert after == pytest.approx(2 * before, abs=1e-9)


def test_product_map_height_identity():
    # coprime monomial blocks: functorial height identity is exact
    swap = registry.swap_product_map()
    d = DivisorClass.of([1, 1])
    _, pullback = multidegree_matrix(swap)
    for point in enumerate_points([1, 1], 8):
        lhs = height_wrt(d, evaluate(swap, point))
        rhs = height_wrt(pullback.apply(d), point)
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_functorial_bound_is_stable():
    # |h(f(P)) - h_{f*D}(P)| stays bounded as the search height grows
    sum_square = registry.sum_square_map()
    d = DivisorClass.of([1])
    _, pullback = multidegree_matrix(sum_square)
    spreads = {}
    for bound in (50, 100, 200):
        worst = 0.0
        for point in enumerate_points([1], bound):
            gap = abs(height_wrt(d, evaluate(sum_square, point))
                      - height_wrt(pullback.apply(d), point))
            worst = max(worst, gap)
        spreads[bound] = worst
    assert spreads[200] <= spreads[100] * 1.10 + 1e-12
    # max(a^2+b^2) / max(a,b)^2 realizes its supremum 2 at (1 : 1)
    assert spreads[100] == pytest.approx(math.log(2), abs=1e-12)
    assert spreads[200] == pytest.approx(math.log(2), abs=1e-12)


def test_evaluate_deterministic_and_shape_preserving():
    rng = random.Random(13)
    swap = registry.swap_product_map()
    for _ in range(100):
        point = MultiPoint.of([(rng.randint(-9, 9), rng.randint(1, 9)),
                               (rng.randint(-9, 9), rng.randint(1, 9))])
        image = evaluate(swap, point)
        assert evaluate(swap, point) == image
        assert image.signature == point.signature
        assert all(normalize(f.coords) == f for f in image.factors)
