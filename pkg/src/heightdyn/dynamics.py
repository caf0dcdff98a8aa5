"""Orbits and empirical height inequalities for product endomorphisms.

The two-sided comparison this module measures, for an endomorphism phi
with coefficients mu1 <= mu2 relative to an ample D and any eps > 0, is

    h_D(phi(P)) >= (mu1 - eps) h_D(P) - C1
    h_D(phi(P)) <= (mu2 + eps) h_D(P) + C2

for constants C1, C2 independent of P.  verify_weak_northcott scans all
rational points up to an enumeration bound and reports the smallest
constants that work on the sample, which should stabilise as the bound
grows if the inequality is genuine.

When every target factor of the map reads from a single source block
(true for product maps), heights of P and phi(P) both decompose into
per-factor contributions.  The scans then aggregate each factor's
(height, image height) profile first and iterate over profile
combinations instead of raw points, which keeps full product
enumerations at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iter_product
from typing import Iterator, Sequence

from .heights import (
    BasePointError,
    MultiHomogeneousMap,
    MultiPoint,
    SignatureError,
    _block_slices,
    ambient_height,
    enumerate_points,
    enumerate_projective,
    evaluate,
    height_wrt,
    normalize,
)
from .lattice import DivisorClass


class DynamicsError(ValueError):
    """A dynamical computation was invoked outside its contract."""


@dataclass
class OrbitRecord:
    """Forward orbit of a point under exact iteration.

    status is "periodic" (an exact repeat was found; points[tail] ==
    points[tail + period]), "escaped" (the ambient height passed the
    ceiling at index escaped_at), or "truncated" (max_iter applications
    of the map decided nothing).
    """

    points: list[MultiPoint]
    heights: list[float]
    status: str
    tail: int | None = None
    period: int | None = None
    escaped_at: int | None = None


def orbit(f: MultiHomogeneousMap, P: MultiPoint, max_iter: int = 64,
          ceiling: float = math.inf) -> OrbitRecord:
    """Iterate f on P until an exact repeat, escape or truncation."""
    if not f.is_endomorphism:
        raise DynamicsError("orbits need an endomorphism")
    if max_iter < 1:
        raise DynamicsError("max_iter must be at least 1")
    points = [P]
    heights = [ambient_height(P)]
    first_seen = {P: 0}
    if heights[0] > ceiling:
        return OrbitRecord(points, heights, "escaped", escaped_at=0)
    while len(points) <= max_iter:
        nxt = evaluate(f, points[-1])
        points.append(nxt)
        heights.append(ambient_height(nxt))
        if nxt in first_seen:
            tail = first_seen[nxt]
            return OrbitRecord(points, heights, "periodic",
                               tail=tail, period=len(points) - 1 - tail)
        first_seen[nxt] = len(points) - 1
        if heights[-1] > ceiling:
            return OrbitRecord(points, heights, "escaped",
                               escaped_at=len(points) - 1)
    return OrbitRecord(points, heights, "truncated")


# ----------------------------------------------------------------------
# sample scans


@dataclass(frozen=True)
class FactorProfile:
    """Aggregated per-factor data: distinct (weighted height, weighted
    image height) pairs with multiplicity and the lexicographically
    first factor point realising each pair."""

    pairs: tuple[tuple[float, float, int, tuple[int, ...]], ...]
    size: int


def _single_block_sources(f: MultiHomogeneousMap) -> list[int] | None:
    """source block feeding each target factor, or None if any target
    mixes blocks (or is constant)."""
    degrees = f.multidegrees
    sources = []
    for j in range(len(f.targets)):
        feeding = [i for i in range(len(f.signature)) if degrees[i][j] > 0]
        if len(feeding) != 1:
            return None
        sources.append(feeding[0])
    return sources


def _weights(D: DivisorClass | Sequence[float], k: int) -> list[float]:
    ws = [c.to_float() for c in D.coeffs] if isinstance(D, DivisorClass) \
        else [float(c) for c in D]
    if len(ws) != k:
        raise SignatureError(f"divisor has {len(ws)} weights for {k} factors")
    return ws


def _factor_profiles(f: MultiHomogeneousMap, weights: list[float],
                     H: int) -> list[FactorProfile] | None:
    sources = _single_block_sources(f)
    if sources is None or not f.is_endomorphism:
        return None
    signature = f.signature
    fed_targets: list[list[int]] = [[] for _ in signature]
    for j, i in enumerate(sources):
        fed_targets[i].append(j)
    slices = _block_slices(signature)
    by_dim: dict[int, list] = {}
    profiles = []
    for i, n in enumerate(signature):
        if n not in by_dim:
            by_dim[n] = enumerate_projective(n, H)
        pts = by_dim[n]
        seen: dict[tuple[float, float], tuple[int, tuple[int, ...]]] = {}
        for p in pts:
            w = weights[i] * p.height()
            g = 0.0
            for j in fed_targets[i]:
                image = _evaluate_block(f, j, slices[i], p.coords)
                g += weights[j] * image.height()
            key = (w, g)
            if key in seen:
                count, rep = seen[key]
                seen[key] = (count + 1, rep)
            else:
                seen[key] = (1, p.coords)
        pairs = tuple(sorted((w, g, count, rep)
                             for (w, g), (count, rep) in seen.items()))
        profiles.append(FactorProfile(pairs, len(pts)))
    return profiles


def _evaluate_block(f: MultiHomogeneousMap, target: int, span: tuple[int, int],
                    coords: tuple[int, ...]):
    """Evaluate one single-block target factor on one source block."""
    a, b = span
    values = []
    for poly in f.targets[target]:
        acc = 0
        for c, exps in poly:
            if c == 0:
                continue
            term = c
            for v in range(a, b):
                e = exps[v]
                if e:
                    term *= coords[v - a] ** e
            acc += term
        values.append(acc)
    if all(v == 0 for v in values):
        raise BasePointError(
            f"map undefined on an enumerated point (target factor {target})")
    return normalize(values)


def _height_pairs(f: MultiHomogeneousMap, D: DivisorClass | Sequence[float],
                  H: int) -> Iterator[tuple[float, float, int, MultiPoint]]:
    """Yield (h_D(P), h_D(phi(P)), multiplicity, representative) over the
    full enumeration up to H.  With the per-factor profile decomposition
    one yielded tuple covers every point sharing the same height data;
    the representative is the lexicographically first of them."""
    weights = _weights(D, len(f.signature))
    profiles = _factor_profiles(f, weights, H)
    if profiles is not None:
        for combo in iter_product(*(p.pairs for p in profiles)):
            w = sum(c[0] for c in combo)
            g = sum(c[1] for c in combo)
            count = math.prod(c[2] for c in combo)
            rep = MultiPoint.of([c[3] for c in combo])
            yield (w, g, count, rep)
        return
    for P in enumerate_points(f.signature, H):
        w = height_wrt(weights, P)
        image = evaluate(f, P)
        g = height_wrt(weights, image)
        yield (w, g, 1, P)


@dataclass
class NorthcottReport:
    """Empirical constants for the two-sided height comparison."""

    epsilon: float
    mu1: float
    mu2: float
    c1_emp: float
    c2_emp: float
    sample_size: int
    height_bound: float
    bucket_maxima: dict[int, tuple[float, float]] = field(default_factory=dict)
    argmax_expand: MultiPoint | None = None
    argmax_contract: MultiPoint | None = None


def verify_weak_northcott(f: MultiHomogeneousMap, D: DivisorClass | Sequence[float],
                          mu1: float, mu2: float, epsilon: float,
                          H: int) -> NorthcottReport:
    """Scan all points up to H and report the empirical constants

        c1_emp = max (mu1 - eps) h_D(P) - h_D(phi(P))
        c2_emp = max h_D(phi(P)) - (mu2 + eps) h_D(P)

    together with per-integer-bucket maxima and the points attaining
    the global maxima (lexicographically first on ties).
    """
    if epsilon <= 0:
        raise DynamicsError("epsilon must be positive")
    if mu1 - epsilon <= 0:
        raise DynamicsError("mu1 - epsilon must be positive for the lower bound")
    c1 = -math.inf
    c2 = -math.inf
    arg1: MultiPoint | None = None
    arg2: MultiPoint | None = None
    buckets: dict[int, tuple[float, float]] = {}
    total = 0
    for w, g, count, rep in _height_pairs(f, D, H):
        total += count
        v1 = (mu1 - epsilon) * w - g
        v2 = g - (mu2 + epsilon) * w
        if v1 > c1 or (v1 == c1 and _lex_before(rep, arg1)):
            c1, arg1 = v1, rep
        if v2 > c2 or (v2 == c2 and _lex_before(rep, arg2)):
            c2, arg2 = v2, rep
        b = math.floor(w)
        if b in buckets:
            m1, m2 = buckets[b]
            buckets[b] = (max(m1, v1), max(m2, v2))
        else:
            buckets[b] = (v1, v2)
    if total == 0:
        raise DynamicsError("no sample points")
    return NorthcottReport(epsilon=epsilon, mu1=mu1, mu2=mu2,
                           c1_emp=c1, c2_emp=c2, sample_size=total,
                           height_bound=float(H), bucket_maxima=buckets,
                           argmax_expand=arg1, argmax_contract=arg2)


def _lex_before(candidate: MultiPoint | None, incumbent: MultiPoint | None) -> bool:
    if candidate is None:
        return False
    if incumbent is None:
        return True
    return candidate.sort_key() < incumbent.sort_key()


def estimate_silverman_mu(f: MultiHomogeneousMap, D: DivisorClass | Sequence[float],
                          H: int, h_min: float) -> float:
    """min h_D(phi(P)) / h_D(P) over enumerated points with
    h_D(P) >= h_min: a finite-sample proxy for the liminf ratio."""
    if h_min <= 0:
        raise DynamicsError("h_min must be positive to keep the ratio defined")
    best = math.inf
    seen = False
    for w, g, _, _ in _height_pairs(f, D, H):
        if w >= h_min:
            seen = True
            ratio = g / w
            if ratio < best:
                best = ratio
    if not seen:
        raise DynamicsError(f"no sample points with height at least {h_min}")
    return best


# ----------------------------------------------------------------------
# preperiodic points


def preperiodic_height_bound(mu1: float, C: float) -> float:
    """Height bound C (1 + eps) / eps for preperiodic points when
    mu1 > 1, with the midpoint choice eps = (mu1 - 1) / 2."""
    if mu1 <= 1:
        raise DynamicsError(
            "no bound: the expansion coefficient must exceed 1")
    eps = (mu1 - 1) / 2
    return C * (1 + eps) / eps


def default_escape_ceiling(f: MultiHomogeneousMap, H: int) -> float:
    """Heuristic orbit-escape ceiling for points enumerated up to H.

    Uses the coarse growth rate max_j sum_i d_ij (total degree of a
    target factor) to estimate the additive constant on a small sample,
    then allows four times the enumerated height range on top.  Not a
    certificate; orbits that pass it are reported as escaped without
    proof.
    """
    degrees = f.multidegrees
    rate = max(sum(degrees[i][j] for i in range(len(f.signature)))
               for j in range(len(f.targets)))
    slack = 0.0
    probe = min(H, 20)
    ones = [1.0] * len(f.signature)
    for w, g, _, _ in _height_pairs(f, ones, probe):
        slack = max(slack, g - (rate + 0.5) * w)
    return 4.0 * len(f.signature) * math.log(max(H, 2)) + slack + 1.0


@dataclass
class PreperiodicSearch:
    preperiodic: list[MultiPoint]
    undetermined: list[MultiPoint]
    max_height: float


def find_preperiodic(f: MultiHomogeneousMap, H: int, max_iter: int = 64,
                     ceiling: float | None = None) -> PreperiodicSearch:
    """Classify every rational point up to H by its orbit: exactly
    periodic tails are preperiodic, escapes are discarded, truncated
    orbits are returned as undetermined."""
    if not f.is_endomorphism:
        raise DynamicsError("preperiodic search needs an endomorphism")
    if ceiling is None:
        ceiling = default_escape_ceiling(f, H)
    preperiodic: list[MultiPoint] = []
    undetermined: list[MultiPoint] = []
    max_height = 0.0
    for P in enumerate_points(f.signature, H):
        record = orbit(f, P, max_iter=max_iter, ceiling=ceiling)
        if record.status == "periodic":
            preperiodic.append(P)
            max_height = max(max_height, ambient_height(P))
        elif record.status == "truncated":
            undetermined.append(P)
    return PreperiodicSearch(preperiodic, undetermined, max_height)
