"""Divisor classes, ample cones and exact cone-line intersections.

A Picard lattice here is a free Z-module of finite rank with a fixed
basis, together with a membership test for the ample cone.  Two cone
shapes cover every case we compute with:

* Orthant: all basis coefficients strictly positive (products of
  projective spaces).
* Quadratic: v^T G v > 0 and l . v > 0 for a rational symmetric Gram
  matrix G and a rational linear functional l picking the positive
  sheet (rank >= 2 lattices of Lorentzian type).

The nef cone is the closure: replace every strict inequality by >=.

The central operation is cone_interval: the set of t for which
base + t * direction is ample.  Convexity of the cone makes this set an
interval; for the quadratic shape its endpoints are roots of a rational
quadratic, extracted exactly into Q(sqrt(d)) by sqrt_decompose.  When
the data along the line is itself irrational the closed form would need
nested radicals, so cone_interval raises ExactnessError and callers
fall back to cone_interval_bisection, which only ever evaluates the
exact membership predicate at rational points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence, Union

from .scalars import QuadraticNumber, ScalarLike, as_scalar, sqrt_decompose

Endpoint = Union[QuadraticNumber, float, None]  # None encodes an infinite end


class LatticeError(ValueError):
    """Invalid lattice data or an operation outside its contract."""


class DimensionMismatchError(LatticeError):
    """Vector length does not match the lattice rank."""


class EmptyConeError(LatticeError):
    """The declared ample cone has no interior point to witness it."""


class ExactnessError(LatticeError):
    """Closed-form endpoints would leave the quadratic field."""


@dataclass(frozen=True)
class DivisorClass:
    """An R-divisor class written in the fixed basis, exact coefficients."""

    coeffs: tuple[QuadraticNumber, ...]

    @staticmethod
    def of(values: Sequence[ScalarLike]) -> "DivisorClass":
        return DivisorClass(tuple(as_scalar(v) for v in values))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[QuadraticNumber]:
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> QuadraticNumber:
        return self.coeffs[i]

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if len(self) != len(other):
            raise DimensionMismatchError("divisor ranks differ")
        return DivisorClass(tuple(x + y for x, y in zip(self, other)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-x for x in self.coeffs))

    def scale(self, c: ScalarLike) -> "DivisorClass":
        s = as_scalar(c)
        return DivisorClass(tuple(s * x for x in self.coeffs))

    def __mul__(self, c: ScalarLike) -> "DivisorClass":
        return self.scale(c)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.coeffs) + ")"


@dataclass(frozen=True)
class OrthantCone:
    """Ample iff every coefficient is strictly positive."""

    kind = "orthant"

    def contains(self, coeffs: Sequence[QuadraticNumber], closed: bool = False) -> bool:
        if closed:
            return all(c.sign() >= 0 for c in coeffs)
        return all(c.sign() > 0 for c in coeffs)


@dataclass(frozen=True)
class QuadraticCone:
    """Ample iff v^T G v > 0 and l . v > 0 (one sheet of a quadric)."""

    kind = "quadratic"
    gram: tuple[tuple[Fraction, ...], ...] = field(default=())
    linear: tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.gram)
        for row in self.gram:
            if len(row) != n:
                raise LatticeError("Gram matrix is not square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError("Gram matrix is not symmetric")
        if len(self.linear) != n:
            raise LatticeError("linear functional length does not match Gram size")
        if all(c == 0 for c in self.linear):
            raise LatticeError("linear functional must be nonzero")

    @staticmethod
    def of(gram: Sequence[Sequence[int | Fraction]],
           linear: Sequence[int | Fraction]) -> "QuadraticCone":
        return QuadraticCone(
            gram=tuple(tuple(Fraction(x) for x in row) for row in gram),
            linear=tuple(Fraction(x) for x in linear),
        )

    def bilinear(self, u: Sequence[QuadraticNumber],
                 v: Sequence[QuadraticNumber]) -> QuadraticNumber:
        total = QuadraticNumber(0)
        for i, row in enumerate(self.gram):
            for j, gij in enumerate(row):
                if gij:
                    total = total + u[i] * v[j] * gij
        return total

    def quad(self, v: Sequence[QuadraticNumber]) -> QuadraticNumber:
        return self.bilinear(v, v)

    def lin(self, v: Sequence[QuadraticNumber]) -> QuadraticNumber:
        total = QuadraticNumber(0)
        for c, x in zip(self.linear, v):
            if c:
                total = total + x * c
        return total

    def contains(self, coeffs: Sequence[QuadraticNumber], closed: bool = False) -> bool:
        q = self.quad(coeffs).sign()
        l = self.lin(coeffs).sign()
        if closed:
            return q >= 0 and l >= 0
        return q > 0 and l > 0


Cone = Union[OrthantCone, QuadraticCone]


@dataclass(frozen=True)
class ConeInterval:
    """The parameter interval {t : base + t*direction in cone}.

    Endpoints are exact QuadraticNumbers when produced by the closed
    form, floats when produced by bisection; None means unbounded on
    that side.  The interval is open for the ample cone and closed for
    the nef cone; endpoints themselves are recorded either way.
    """

    lower: Endpoint
    upper: Endpoint
    empty: bool = False
    exact: bool = True
    closed: bool = False


# sentinel-free bound comparisons: None on the left means -inf, on the
# right means +inf, depending on which helper is used

def _max_lower(current: Endpoint, candidate: QuadraticNumber) -> Endpoint:
    if current is None or candidate > current:
        return candidate
    return current


def _min_upper(current: Endpoint, candidate: QuadraticNumber) -> Endpoint:
    if current is None or candidate < current:
        return candidate
    return current


def _interval_is_empty(lower: Endpoint, upper: Endpoint, closed: bool) -> bool:
    if lower is None or upper is None:
        return False
    if closed:
        return lower > upper
    return lower >= upper


@dataclass(frozen=True)
class PicardLattice:
    """Fixed-basis Picard lattice with an explicit ample-cone test.

    witness must lie in the open cone; it certifies that the declared
    cone has nonempty interior and seeds the bisection and sampling
    routines.
    """

    rank: int
    labels: tuple[str, ...]
    cone: Cone
    witness: DivisorClass
    field_d: int = 1

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise LatticeError("rank must be at least 1")
        if len(self.labels) != self.rank or len(set(self.labels)) != self.rank:
            raise LatticeError("labels must be distinct and match the rank")
        if isinstance(self.cone, QuadraticCone) and len(self.cone.gram) != self.rank:
            raise LatticeError("Gram matrix size does not match the rank")
        if len(self.witness) != self.rank:
            raise DimensionMismatchError("witness length does not match the rank")
        if not self.cone.contains(self.witness.coeffs, closed=False):
            raise EmptyConeError("witness is not in the open cone")

    @classmethod
    def orthant(cls, rank: int, labels: Sequence[str] | None = None,
                field_d: int = 1) -> "PicardLattice":
        if labels is None:
            labels = tuple(f"E{i + 1}" for i in range(rank))
        return cls(rank, tuple(labels), OrthantCone(),
                   DivisorClass.of([1] * rank), field_d)

    def divisor(self, *values: ScalarLike) -> DivisorClass:
        if len(values) != self.rank:
            raise DimensionMismatchError(
                f"expected {self.rank} coefficients, got {len(values)}")
        return DivisorClass.of(values)

    def _check(self, D: DivisorClass) -> DivisorClass:
        if len(D) != self.rank:
            raise DimensionMismatchError(
                f"divisor has {len(D)} coefficients, lattice rank is {self.rank}")
        return D

    def is_ample(self, D: DivisorClass) -> bool:
        return self.cone.contains(self._check(D).coeffs, closed=False)

    def is_nef(self, D: DivisorClass) -> bool:
        return self.cone.contains(self._check(D).coeffs, closed=True)

    # ------------------------------------------------------------------

    def cone_interval(self, base: DivisorClass, direction: DivisorClass,
                      closed: bool = False) -> ConeInterval:
        """Exact interval {t : base + t*direction in the (open) cone}.

        Raises ExactnessError when the endpoints would not lie in a
        single quadratic field.
        """
        self._check(base)
        self._check(direction)
        if isinstance(self.cone, OrthantCone):
            return self._interval_orthant(base, direction, closed)
        return self._interval_quadratic(base, direction, closed)

    def _interval_orthant(self, base: DivisorClass, direction: DivisorClass,
                          closed: bool) -> ConeInterval:
        lower: Endpoint = None
        upper: Endpoint = None
        for b, d in zip(base, direction):
            s = d.sign()
            if s == 0:
                ok = b.sign() >= 0 if closed else b.sign() > 0
                if not ok:
                    return ConeInterval(None, None, empty=True, closed=closed)
            elif s > 0:
                lower = _max_lower(lower, -b / d)
            else:
                upper = _min_upper(upper, -b / d)
        empty = _interval_is_empty(lower, upper, closed)
        if empty:
            return ConeInterval(None, None, empty=True, closed=closed)
        return ConeInterval(lower, upper, closed=closed)

    def _interval_quadratic(self, base: DivisorClass, direction: DivisorClass,
                            closed: bool) -> ConeInterval:
        cone = self.cone
        assert isinstance(cone, QuadraticCone)
        data = [cone.quad(direction.coeffs),
                cone.bilinear(base.coeffs, direction.coeffs),
                cone.quad(base.coeffs),
                cone.lin(direction.coeffs),
                cone.lin(base.coeffs)]
        if any(not x.is_rational for x in data):
            raise ExactnessError(
                "interval endpoints leave the quadratic field; use bisection")
        qd, bq, qb, ld, lb = (x.to_fraction() for x in data)

        pieces = _solve_quadratic_positive(qd, bq, qb, closed)
        half_line = _solve_linear_positive(ld, lb, closed)
        survivors = []
        for lo, hi in pieces:
            piece = _intersect_piece((lo, hi), half_line, closed)
            if piece is not None:
                survivors.append(piece)
        if not survivors:
            return ConeInterval(None, None, empty=True, closed=closed)
        if len(survivors) > 1:
            raise LatticeError("cone is not convex along the given line")
        lo, hi = survivors[0]
        return ConeInterval(lo, hi, closed=closed)

    # ------------------------------------------------------------------

    def cone_interval_bisection(self, base: DivisorClass, direction: DivisorClass,
                                tol: float = 1e-12) -> ConeInterval:
        """Numeric interval via bisection on the exact membership test.

        Probes a geometric grid of rational parameters for an interior
        point, falling back to a denominator-ordered sweep of small
        rationals, then bisects each endpoint to width tol.  Unbounded
        ends are declared when membership still holds at |t| = 2**60.
        The result is a cross-check, not a certificate: an interval
        narrower than the sweep resolution can be misreported as empty.

        Membership is evaluated through the exact restriction of the
        cone inequalities to the line, so each probe costs a handful of
        scalar operations; no roots are ever extracted.
        """
        self._check(base)
        self._check(direction)
        member = self._line_membership(base, direction)

        inside = None
        for t in _probe_parameters():
            if member(t):
                inside = t
                break
        if inside is None:
            for t in _dense_probe_parameters():
                if member(t):
                    inside = t
                    break
        if inside is None:
            return ConeInterval(None, None, empty=True, exact=False)

        cap = Fraction(2) ** 60
        upper: Endpoint
        lower: Endpoint
        if member(inside + cap):
            upper = None
        else:
            upper = float(_bisect_edge(member, inside, inside + cap, tol))
        if member(inside - cap):
            lower = None
        else:
            lower = float(_bisect_edge(member, inside, inside - cap, tol))
        return ConeInterval(lower, upper, exact=False)

    def _line_membership(self, base: DivisorClass, direction: DivisorClass):
        """Open-cone membership of base + t*direction as a predicate in t."""
        if isinstance(self.cone, OrthantCone):
            pairs = list(zip(base.coeffs, direction.coeffs))

            def member(t: Fraction) -> bool:
                return all((b + d * t).sign() > 0 for b, d in pairs)
        else:
            cone = self.cone
            qb = cone.quad(base.coeffs)
            qd = cone.quad(direction.coeffs)
            bb = cone.bilinear(base.coeffs, direction.coeffs)
            two_b = bb + bb
            lb = cone.lin(base.coeffs)
            ld = cone.lin(direction.coeffs)

            def member(t: Fraction) -> bool:
                if ((qd * t + two_b) * t + qb).sign() <= 0:
                    return False
                return (lb + ld * t).sign() > 0
        return member

    # ------------------------------------------------------------------

    def dominance_scale(self, D1: DivisorClass, D2: DivisorClass) -> QuadraticNumber:
        """The least t with t*D1 - D2 ample, for ample D1 and D2.

        Both inputs must be ample; the admissible set is then an open
        ray upwards, so the interval of t is (value, +inf).
        """
        if not self.is_ample(D1) or not self.is_ample(D2):
            raise LatticeError("dominance_scale requires ample inputs")
        interval = self.cone_interval(-D2, D1)
        if interval.empty or interval.lower is None or interval.upper is not None:
            raise LatticeError("dominance interval is not an upward ray; "
                               "the declared cone is malformed")
        assert isinstance(interval.lower, QuadraticNumber)
        return interval.lower


# ----------------------------------------------------------------------
# rational quadratic / linear inequalities along a line

Piece = tuple[Endpoint, Endpoint]


def _solve_linear_positive(ld: Fraction, lb: Fraction, closed: bool) -> Piece | None:
    """Solve ld*t + lb > 0 (or >= 0): a half line, everything, or nothing."""
    if ld == 0:
        ok = lb >= 0 if closed else lb > 0
        return (None, None) if ok else None
    root = QuadraticNumber(-lb / ld)
    if ld > 0:
        return (root, None)
    return (None, root)


def _solve_quadratic_positive(qd: Fraction, bq: Fraction, qb: Fraction,
                              closed: bool) -> list[Piece]:
    """Solve qd*t^2 + 2*bq*t + qb > 0 (or >= 0) over the reals.

    Returns up to two maximal pieces; endpoints are exact elements of
    Q(sqrt(core(disc))).
    """
    if qd == 0:
        piece = _solve_linear_positive(2 * bq, qb, closed)
        return [piece] if piece is not None else []
    disc = bq * bq - qd * qb  # quarter discriminant
    if disc < 0:
        return [(None, None)] if qd > 0 else []
    if disc == 0:
        root = QuadraticNumber(-bq / qd)
        if qd > 0:
            if closed:
                return [(None, None)]
            return [(None, root), (root, None)]
        return [(root, root)] if closed else []
    c, core = sqrt_decompose(disc)
    sq = QuadraticNumber(0, c, core)
    r1 = (QuadraticNumber(-bq) - sq) / qd
    r2 = (QuadraticNumber(-bq) + sq) / qd
    lo, hi = (r1, r2) if r1 < r2 else (r2, r1)
    if qd > 0:
        return [(None, lo), (hi, None)]
    return [(lo, hi)]


def _intersect_piece(piece: Piece, other: Piece | None, closed: bool) -> Piece | None:
    if other is None:
        return None
    lo = piece[0]
    if other[0] is not None:
        lo = other[0] if lo is None else _max_lower(lo, other[0])
    hi = piece[1]
    if other[1] is not None:
        hi = other[1] if hi is None else _min_upper(hi, other[1])
    if _interval_is_empty(lo, hi, closed):
        return None
    return (lo, hi)


def _probe_parameters() -> Iterator[Fraction]:
    yield Fraction(0)
    for k in range(0, 61):
        t = Fraction(2) ** k
        yield t
        yield -t
    for k in range(1, 31):
        t = Fraction(1, 2 ** k)
        yield t
        yield -t


def _dense_probe_parameters(window: int = 24,
                            max_denominator: int = 24) -> Iterator[Fraction]:
    """Reduced rationals p/q with |p/q| <= window, by increasing q.

    Catches narrow intervals that the geometric grid steps over; the
    resolution inside the window is 1/max_denominator.
    """
    for q in range(1, max_denominator + 1):
        for p in range(-window * q, window * q + 1):
            if gcd(p, q) == 1:
                yield Fraction(p, q)


def _bisect_edge(member, t_in: Fraction, t_out: Fraction, tol: float) -> Fraction:
    """Shrink [t_in, t_out] across the cone boundary to width tol."""
    while abs(t_out - t_in) > tol:
        mid = (t_in + t_out) / 2
        if member(mid):
            t_in = mid
        else:
            t_out = mid
    return (t_in + t_out) / 2
