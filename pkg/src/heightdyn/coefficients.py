"""Expansion and contraction coefficients of a pullback action.

For a dominant endomorphism phi with pullback matrix M on the Picard
lattice and an ample class D,

    mu1 = sup { alpha : phi^* D - alpha D is ample }
    mu2 = inf { alpha : alpha D - phi^* D is ample }

Both are endpoints of an exact cone-line intersection, so on the
registry lattices they come out as explicit elements of a quadratic
field.  mu2 is a genuine infimum over an open set: the endpoint itself
is never ample.

Matrix convention: column j of M holds the coefficients of phi^* E_j in
the basis {E_i}.  Composition therefore reverses order on matrices,
M(phi o psi) = M(psi) . M(phi), because (phi o psi)^* = psi^* o phi^*.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import (
    DimensionMismatchError,
    DivisorClass,
    ExactnessError,
    OrthantCone,
    PicardLattice,
    QuadraticCone,
)
from .scalars import QuadraticNumber, ScalarLike, as_scalar


class CoefficientError(ValueError):
    """A coefficient computation was invoked outside its contract."""


class NotDominantError(CoefficientError):
    """The pullback does not behave like that of a dominant map."""


@dataclass(frozen=True)
class PullbackMap:
    """Linear action on the Picard lattice; entries[i][j] is the
    E_i-coefficient of the pullback of E_j."""

    entries: tuple[tuple[QuadraticNumber, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise CoefficientError("pullback matrix must be square and nonempty")

    @property
    def rank(self) -> int:
        return len(self.entries)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[ScalarLike]]) -> "PullbackMap":
        return PullbackMap(tuple(tuple(as_scalar(x) for x in row) for row in rows))

    @staticmethod
    def identity(rank: int) -> "PullbackMap":
        return PullbackMap.from_rows(
            [[1 if i == j else 0 for j in range(rank)] for i in range(rank)])

    @staticmethod
    def diagonal(values: Sequence[ScalarLike]) -> "PullbackMap":
        n = len(values)
        return PullbackMap.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def column(self, j: int) -> tuple[QuadraticNumber, ...]:
        return tuple(row[j] for row in self.entries)

    def apply(self, D: DivisorClass) -> DivisorClass:
        if len(D) != self.rank:
            raise DimensionMismatchError(
                f"divisor has {len(D)} coefficients, matrix rank is {self.rank}")
        out = []
        for row in self.entries:
            acc = QuadraticNumber(0)
            for m, c in zip(row, D):
                if m:
                    acc = acc + m * c
            out.append(acc)
        return DivisorClass(tuple(out))

    def __matmul__(self, other: "PullbackMap") -> "PullbackMap":
        if self.rank != other.rank:
            raise DimensionMismatchError("matrix ranks differ")
        n = self.rank
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = QuadraticNumber(0)
                for k in range(n):
                    x = self.entries[i][k]
                    y = other.entries[k][j]
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            rows.append(tuple(row))
        return PullbackMap(tuple(rows))

    def __pow__(self, n: int) -> "PullbackMap":
        if n < 0:
            raise CoefficientError("negative matrix powers are not supported")
        result = PullbackMap.identity(self.rank)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result


def apply_pullback(M: PullbackMap, D: DivisorClass) -> DivisorClass:
    return M.apply(D)


def compose(outer: PullbackMap, inner: PullbackMap) -> PullbackMap:
    """Pullback of the composite map outer o inner: inner^* then outer^*
    on classes, which is the matrix product M(inner) . M(outer)."""
    return inner @ outer


@dataclass(frozen=True)
class CoefficientResult:
    """A computed coefficient, exact when the closed form applied."""

    value: QuadraticNumber | float
    exact: bool
    method: str  # "closed_form" or "bisection"

    def as_float(self) -> float:
        if isinstance(self.value, QuadraticNumber):
            return self.value.to_float()
        return float(self.value)

    def __str__(self) -> str:
        return f"{self.value} ({self.method})"


def _require_ample(L: PicardLattice, D: DivisorClass) -> None:
    if not L.is_ample(D):
        raise CoefficientError(f"divisor {D} is not ample")


def _endpoint_result(M: PullbackMap, D: DivisorClass, L: PicardLattice,
                     method: str, want_upper: bool, closed: bool) -> CoefficientResult:
    phi_D = M.apply(D)
    base, direction = (phi_D, -D) if want_upper else (-phi_D, D)
    if method not in ("auto", "closed_form", "bisection"):
        raise CoefficientError(f"unknown method {method!r}")
    if method in ("auto", "closed_form"):
        try:
            interval = L.cone_interval(base, direction, closed=closed)
        except ExactnessError:
            if method == "closed_form":
                raise
        else:
            value = interval.upper if want_upper else interval.lower
            if interval.empty:
                raise NotDominantError(
                    "admissible set is empty; pullback is not dominant for this divisor")
            if value is None:
                raise CoefficientError(
                    "coefficient is unbounded; the declared cone is not salient")
            return CoefficientResult(value, exact=True, method="closed_form")
    interval = L.cone_interval_bisection(base, direction)
    value = interval.upper if want_upper else interval.lower
    if interval.empty:
        raise NotDominantError(
            "admissible set is empty; pullback is not dominant for this divisor")
    if value is None:
        raise CoefficientError(
            "coefficient is unbounded; the declared cone is not salient")
    return CoefficientResult(value, exact=False, method="bisection")


def mu1(M: PullbackMap, D: DivisorClass, L: PicardLattice,
        method: str = "auto") -> CoefficientResult:
    """sup { alpha : phi^* D - alpha D ample }: the height expansion rate."""
    _require_ample(L, D)
    return _endpoint_result(M, D, L, method, want_upper=True, closed=False)


def mu2(M: PullbackMap, D: DivisorClass, L: PicardLattice,
        method: str = "auto") -> CoefficientResult:
    """inf { alpha : alpha D - phi^* D ample }: the height contraction rate.

    The infimum is over an open set, so the value itself is never an
    admissible alpha.
    """
    _require_ample(L, D)
    return _endpoint_result(M, D, L, method, want_upper=False, closed=False)


def seshadri_lower(M: PullbackMap, D: DivisorClass, L: PicardLattice,
                   method: str = "auto") -> CoefficientResult:
    """sup { alpha : phi^* D - alpha D nef }; agrees with mu1 because the
    nef cone is the closure of the ample cone."""
    _require_ample(L, D)
    if method == "bisection":
        # open and closed intervals share their endpoints
        return _endpoint_result(M, D, L, method, want_upper=True, closed=False)
    return _endpoint_result(M, D, L, method, want_upper=True, closed=True)


def polarization_check(M: PullbackMap, D: DivisorClass) -> QuadraticNumber | None:
    """The scalar q with M D = q D, or None if D is not an eigenvector."""
    if all(c.sign() == 0 for c in D):
        raise CoefficientError("polarization_check requires a nonzero divisor")
    image = M.apply(D)
    pivot = next(i for i, c in enumerate(D) if c.sign() != 0)
    q = image[pivot] / D[pivot]
    for c, ic in zip(D, image):
        if not (ic == q * c):
            return None
    return q


def validate_dominant_pullback(M: PullbackMap, L: PicardLattice) -> bool:
    """Whether M carries the ample witness to an ample class.  For an
    actual morphism pullback this does not depend on the witness:
    dominant maps carry some ample class to an ample class exactly when
    they carry every ample class to one."""
    if M.rank != L.rank:
        raise DimensionMismatchError("matrix rank does not match the lattice")
    return L.is_ample(M.apply(L.witness))


# ----------------------------------------------------------------------
# heuristic search for the global coefficient mu = sup_D mu1(phi, D)


@dataclass(frozen=True)
class GlobalMuConfig:
    samples: int = 10_000
    refine_steps: int = 20
    seed: int = 0


@dataclass(frozen=True)
class GlobalMuResult:
    """Best mu1 value found by sampling; a certified lower bound for the
    supremum over ample classes, with no matching upper bound."""

    value: float
    best: DivisorClass
    lower_bound: bool = True


def _mu1_float(M: PullbackMap, D: DivisorClass, L: PicardLattice) -> float:
    try:
        return mu1(M, D, L).as_float()
    except ExactnessError:
        return mu1(M, D, L, method="bisection").as_float()


def _normalized(L: PicardLattice, coeffs: list[Fraction]) -> DivisorClass | None:
    """Scale onto the search slice: coefficient sum 1 on the orthant,
    l . v = 1 on a quadratic cone.  None if not ample."""
    D = DivisorClass.of(coeffs)
    if not L.is_ample(D):
        return None
    if isinstance(L.cone, OrthantCone):
        total = sum(coeffs, Fraction(0))
        return D.scale(1 / total)
    assert isinstance(L.cone, QuadraticCone)
    level = L.cone.lin(D.coeffs).to_fraction()
    return D.scale(1 / level)


def _sample_slice(L: PicardLattice, rng: random.Random, count: int) -> list[DivisorClass]:
    samples: list[DivisorClass] = []
    witness = [c.to_fraction() if c.is_rational else Fraction(c.to_float()).limit_denominator(10**6)
               for c in L.witness]
    normalized_witness = _normalized(L, witness)
    if normalized_witness is not None:
        samples.append(normalized_witness)
    if isinstance(L.cone, OrthantCone) and L.rank == 2:
        # deterministic grid on the open segment x + y = 1
        for i in range(1, count + 1):
            x = Fraction(i, count + 1)
            samples.append(DivisorClass.of([x, 1 - x]))
        return samples
    resolution = 10_000
    for _ in range(count):
        if isinstance(L.cone, OrthantCone):
            coeffs = [Fraction(rng.randint(1, resolution), resolution)
                      for _ in range(L.rank)]
        else:
            # perturb the witness; the ample filter discards escapes
            coeffs = [w + Fraction(rng.randint(-resolution, resolution), resolution)
                      for w in witness]
        D = _normalized(L, coeffs)
        if D is not None:
            samples.append(D)
    return samples


def _refine(M: PullbackMap, L: PicardLattice, best: DivisorClass, value: float,
            steps: int) -> tuple[DivisorClass, float]:
    step = Fraction(1, 4)
    for _ in range(steps):
        improved = False
        coeffs = [c.to_fraction() for c in best if c.is_rational]
        if len(coeffs) != len(best):
            break  # irrational incumbent: leave as is
        for i in range(len(coeffs)):
            for factor in (1 + step, 1 - step):
                if coeffs[i] * factor <= 0:
                    continue
                trial = list(coeffs)
                trial[i] = coeffs[i] * factor
                D = _normalized(L, trial)
                if D is None:
                    continue
                v = _mu1_float(M, D, L)
                if v > value:
                    best, value, coeffs = D, v, [c.to_fraction() for c in D]
                    improved = True
        if not improved:
            step = step / 2
    return best, value


def global_mu(M: PullbackMap, L: PicardLattice,
              cfg: GlobalMuConfig | None = None) -> GlobalMuResult:
    """Heuristic maximisation of mu1 over the ample cone.

    Samples the normalised slice (a grid for rank-2 orthants, seeded
    random draws otherwise), then refines the best point by coordinate
    perturbation with a shrinking step.  Every reported value is the
    exact mu1 of some ample class, hence a true lower bound for the
    supremum; no upper bound is claimed.
    """
    cfg = cfg or GlobalMuConfig()
    if not validate_dominant_pullback(M, L):
        raise NotDominantError("pullback does not preserve ampleness")
    rng = random.Random(cfg.seed)
    best: DivisorClass | None = None
    value = float("-inf")
    for D in _sample_slice(L, rng, cfg.samples):
        v = _mu1_float(M, D, L)
        if v > value:
            best, value = D, v
    if best is None:
        raise CoefficientError("no ample sample points found")
    best, value = _refine(M, L, best, value, cfg.refine_steps)
    return GlobalMuResult(value=value, best=best)
