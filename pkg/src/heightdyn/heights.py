"""Exact Weil heights on products of projective spaces over Q.

A rational point of P^n is stored by its canonical integer
representative: coprime coordinates whose first nonzero entry is
positive.  The standard height is then literally

    h(x0 : ... : xn) = log max_i |x_i|        (natural log)

with no places to sum over, so every height in this module is the exact
log of an explicit integer.  Heights on a product are weighted sums of
factor heights; the weight vector is a divisor class on the orthant
Picard lattice of the product.

Morphisms between products are tuples of multihomogeneous polynomial
maps with integer coefficients, evaluated exactly.  The block degrees
of the target coordinates form the multidegree matrix, which is the
pullback action on divisor classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iter_product
from typing import Iterator, Sequence

from .coefficients import PullbackMap
from .lattice import DivisorClass

Term = tuple[int, tuple[int, ...]]  # coefficient, flat exponent vector
Polynomial = tuple[Term, ...]


class BasePointError(ValueError):
    """The map is undefined at the point (a coordinate block vanished)."""


class SignatureError(ValueError):
    """Point or divisor data does not fit the space's signature."""


class MultidegreeError(ValueError):
    """Coordinates of one target factor disagree on block degrees."""


@dataclass(frozen=True)
class ProjectivePoint:
    """Canonical integer representative of a rational point of P^n."""

    coords: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def height(self) -> float:
        return math.log(max(abs(c) for c in self.coords))

    def __str__(self) -> str:
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


def normalize(coords: Sequence[int | Fraction]) -> ProjectivePoint:
    """Reduce exact rational coordinates to the canonical representative:
    clear denominators, divide by the gcd and make the first nonzero
    coordinate positive."""
    fracs = [Fraction(c) for c in coords]
    if not fracs or all(c == 0 for c in fracs):
        raise BasePointError("all coordinates vanish")
    scale = math.lcm(*(c.denominator for c in fracs))
    ints = [int(c * scale) for c in fracs]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    return ProjectivePoint(tuple(ints))


def weil_height(P: ProjectivePoint) -> float:
    """log of the largest coordinate magnitude; exactly 0 iff every
    coordinate is -1, 0 or 1."""
    return P.height()


@dataclass(frozen=True)
class MultiPoint:
    """A rational point of a product of projective spaces."""

    factors: tuple[ProjectivePoint, ...]

    @staticmethod
    def of(raw: Sequence[Sequence[int]]) -> "MultiPoint":
        return MultiPoint(tuple(normalize(block) for block in raw))

    @property
    def signature(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.factors)

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.coords for p in self.factors)

    def __str__(self) -> str:
        return " x ".join(str(p) for p in self.factors)


def ambient_height(P: MultiPoint) -> float:
    """Height for the weight-one divisor: the sum of factor heights."""
    return sum(p.height() for p in P.factors)


def height_wrt(D: DivisorClass | Sequence[float], P: MultiPoint) -> float:
    """Weighted height sum(a_i * h(P_i)) for real weights a_i."""
    weights = [c.to_float() for c in D.coeffs] if isinstance(D, DivisorClass) \
        else [float(c) for c in D]
    if len(weights) != len(P.factors):
        raise SignatureError(
            f"divisor has {len(weights)} weights for {len(P.factors)} factors")
    total = 0.0
    for w, p in zip(weights, P.factors):
        total += w * p.height()
    return total


# ----------------------------------------------------------------------
# multihomogeneous maps


def _block_slices(signature: Sequence[int]) -> list[tuple[int, int]]:
    slices = []
    offset = 0
    for n in signature:
        slices.append((offset, offset + n + 1))
        offset += n + 1
    return slices


def _block_degrees(exponents: tuple[int, ...],
                   slices: list[tuple[int, int]]) -> tuple[int, ...]:
    return tuple(sum(exponents[a:b]) for a, b in slices)


@dataclass(frozen=True)
class MultiHomogeneousMap:
    """A polynomial map between products of projective spaces.

    signature lists the source factor dimensions.  targets[j] holds the
    coordinate polynomials of the j-th target factor; each polynomial is
    a tuple of (coefficient, exponent-vector) terms over the flattened
    source variables.  Every coordinate of one target factor must share
    a single block-degree vector, which is checked at construction.
    """

    signature: tuple[int, ...]
    targets: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self) -> None:
        if not self.signature or any(n < 0 for n in self.signature):
            raise SignatureError("source signature must list dimensions >= 0")
        if not self.targets:
            raise SignatureError("map needs at least one target factor")
        slices = _block_slices(self.signature)
        nvars = slices[-1][1]
        for j, polys in enumerate(self.targets):
            if len(polys) < 1:
                raise SignatureError(f"target factor {j} has no coordinates")
            factor_degree: tuple[int, ...] | None = None
            for poly in polys:
                if not any(c != 0 for c, _ in poly):
                    raise MultidegreeError(
                        f"target factor {j} has an identically zero coordinate")
                for c, exps in poly:
                    if len(exps) != nvars:
                        raise SignatureError(
                            f"term in target factor {j} has {len(exps)} exponents, "
                            f"expected {nvars}")
                    if any(e < 0 for e in exps):
                        raise SignatureError("negative exponent")
                    if c == 0:
                        continue
                    deg = _block_degrees(exps, slices)
                    if factor_degree is None:
                        factor_degree = deg
                    elif deg != factor_degree:
                        raise MultidegreeError(
                            f"target factor {j} mixes block degrees "
                            f"{factor_degree} and {deg}")

    @property
    def target_signature(self) -> tuple[int, ...]:
        return tuple(len(polys) - 1 for polys in self.targets)

    @property
    def is_endomorphism(self) -> bool:
        return self.target_signature == self.signature

    @cached_property
    def multidegrees(self) -> tuple[tuple[int, ...], ...]:
        """Matrix d[i][j]: degree of target factor j in source block i."""
        slices = _block_slices(self.signature)
        columns = []
        for polys in self.targets:
            # degrees agree across the factor, so read them off any term
            exps = next(e for c, e in polys[0] if c != 0)
            columns.append(_block_degrees(exps, slices))
        return tuple(tuple(col[i] for col in columns)
                     for i in range(len(self.signature)))

    def evaluate(self, P: MultiPoint) -> MultiPoint:
        return evaluate(self, P)


def evaluate(f: MultiHomogeneousMap, P: MultiPoint) -> MultiPoint:
    """Exact image of P; raises BasePointError where the map is undefined."""
    if P.signature != f.signature:
        raise SignatureError(
            f"point signature {P.signature} does not match map source {f.signature}")
    flat: list[int] = []
    for p in P.factors:
        flat.extend(p.coords)
    blocks = []
    for j, polys in enumerate(f.targets):
        values = []
        for poly in polys:
            acc = 0
            for c, exps in poly:
                if c == 0:
                    continue
                term = c
                for x, e in zip(flat, exps):
                    if e:
                        term *= x ** e
                acc += term
            values.append(acc)
        if all(v == 0 for v in values):
            raise BasePointError(f"map undefined at {P}: target factor {j} vanishes")
        blocks.append(values)
    return MultiPoint.of(blocks)


def multidegree_matrix(f: MultiHomogeneousMap) -> tuple[tuple[tuple[int, ...], ...],
                                                        PullbackMap | None]:
    """The integer matrix d[i][j] of block degrees, and the induced
    PullbackMap (None when the map is not between equal-length products,
    where the action on classes is not a square matrix)."""
    rows = f.multidegrees
    pullback = None
    if len(f.targets) == len(f.signature):
        pullback = PullbackMap.from_rows(rows)
    return rows, pullback


# ----------------------------------------------------------------------
# point enumeration

def enumerate_projective(n: int, H: int) -> list[ProjectivePoint]:
    """All canonical representatives of P^n(Q) with max |x_i| <= H,
    sorted lexicographically by coordinates."""
    if n < 0 or H < 1:
        raise SignatureError("need n >= 0 and H >= 1")
    points: list[ProjectivePoint] = []
    for lead in range(n + 1):
        head = (0,) * lead
        for first in range(1, H + 1):
            if n == lead:
                if first == 1:
                    points.append(ProjectivePoint(head + (1,)))
                continue
            for tail in iter_product(range(-H, H + 1), repeat=n - lead):
                if math.gcd(first, *tail) == 1:
                    points.append(ProjectivePoint(head + (first,) + tail))
    points.sort(key=lambda p: p.coords)
    return points


def enumerate_points(signature: Sequence[int], H: int) -> Iterator[MultiPoint]:
    """Stream every rational point of the product whose factors all have
    multiplicative height at most H, in row-major lexicographic order."""
    factor_lists: dict[int, list[ProjectivePoint]] = {}
    for n in signature:
        if n not in factor_lists:
            factor_lists[n] = enumerate_projective(n, H)
    for combo in iter_product(*(factor_lists[n] for n in signature)):
        yield MultiPoint(tuple(combo))


def coordinate_power_map(signature: Sequence[int],
                         degrees: Sequence[int]) -> MultiHomogeneousMap:
    """The diagonal product map raising each factor's coordinates to the
    given power: (x -> x^d_1) x ... x (x -> x^d_k)."""
    signature = tuple(signature)
    if len(degrees) != len(signature) or any(d < 1 for d in degrees):
        raise SignatureError("one positive degree per factor required")
    slices = _block_slices(signature)
    nvars = slices[-1][1]
    targets = []
    for (a, b), d in zip(slices, degrees):
        polys = []
        for v in range(a, b):
            exps = [0] * nvars
            exps[v] = d
            polys.append(((1, tuple(exps)),))
        targets.append(tuple(polys))
    return MultiHomogeneousMap(signature, tuple(targets))
