"""Built-in worked examples with exact expected coefficients.

Two geometric sources drive the registry.

K3 family: a surface carrying two involutions whose composition phi has
pullback diag(beta^-2, beta^2) on a rank-2 sublattice spanned by the
classes E+ and E-, where beta = 2 + sqrt(3).  The involutions swap and
scale the two classes:

    iota1^* : E+ -> beta E-,        E- -> beta^-1 E+
    iota2^* : E+ -> beta^-1 E-,     E- -> beta E+

so in columns, M(iota1) = [[0, beta^-1], [beta, 0]].  The ample cone on
this sublattice is the positive orthant.  For D = E+ + E-:

    mu1(iota1, D) = 2 - sqrt(3)     mu2(iota1, D) = 2 + sqrt(3)
    mu1(phi,  D) = 7 - 4 sqrt(3)    mu2(phi,  D) = 7 + 4 sqrt(3)

Triple product of lines: on (P^1)^3 with hyperplane classes E1, E2, E3,
the intersection pairing has Gram matrix with zero diagonal and ones
off the diagonal; ampleness of a1 E1 + a2 E2 + a3 E3 is q(v) > 0
together with a positive sum.  The involution iota_j from the double
cover structure acts by E_j -> -E_j + 2 sum_{i != j} E_i; in columns

    M(iota1) = [[-1, 0, 0], [2, 1, 0], [2, 0, 1]].

For the ample class E_a = E1 + E2 + E3 and phi12 = iota2 o iota1 (matrix
M(iota1) . M(iota2)):

    mu1(iota1, E_a) = 1/3            mu2(iota1, E_a) = 3
    mu1(phi12, E_a) = (11 - 4 sqrt(7)) / 3
    mu2(phi12, E_a) = (11 + 4 sqrt(7)) / 3

the last pair being the roots of 3 t^2 - 22 t + 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coefficients import CoefficientResult, PullbackMap, mu1, mu2
from .heights import MultiHomogeneousMap, coordinate_power_map, multidegree_matrix
from .lattice import DivisorClass, OrthantCone, PicardLattice, QuadraticCone
from .scalars import QuadraticNumber

BETA = QuadraticNumber(2, 1, 3)
BETA_INV = QuadraticNumber(2, -1, 3)  # (2 + sqrt 3)(2 - sqrt 3) = 1


def k3_lattice() -> PicardLattice:
    return PicardLattice(rank=2, labels=("E+", "E-"), cone=OrthantCone(),
                         witness=DivisorClass.of([1, 1]), field_d=3)


def k3_iota1() -> PullbackMap:
    return PullbackMap.from_rows([[0, BETA_INV], [BETA, 0]])


def k3_iota2() -> PullbackMap:
    return PullbackMap.from_rows([[0, BETA], [BETA_INV, 0]])


def k3_phi() -> PullbackMap:
    # phi = iota2 o iota1, so M(phi) = M(iota1) . M(iota2)
    return k3_iota1() @ k3_iota2()


def triple_line_lattice() -> PicardLattice:
    gram = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    return PicardLattice(
        rank=3,
        labels=("E1", "E2", "E3"),
        cone=QuadraticCone.of(gram, [1, 1, 1]),
        witness=DivisorClass.of([1, 1, 1]),
        field_d=7,
    )


def triple_line_iota(j: int) -> PullbackMap:
    """E_j -> -E_j + 2 E_i for i != j; other basis classes fixed."""
    if j not in (0, 1, 2):
        raise ValueError("factor index must be 0, 1 or 2")
    rows = [[Fraction(1 if i == v else 0) for v in range(3)] for i in range(3)]
    for i in range(3):
        rows[i][j] = Fraction(-1 if i == j else 2)
    return PullbackMap.from_rows(rows)


def triple_line_phi12() -> PullbackMap:
    # phi12 = iota2 o iota1
    return triple_line_iota(0) @ triple_line_iota(1)


def squaring_map() -> MultiHomogeneousMap:
    """(x : y) -> (x^2 : y^2) on P^1."""
    return coordinate_power_map([1], [2])


def power_product_map(d1: int, d2: int) -> MultiHomogeneousMap:
    """(x, u) -> (x^d1, u^d2) on P^1 x P^1, factorwise coordinate powers."""
    return coordinate_power_map([1, 1], [d1, d2])


def swap_product_map(d_from_second: int = 2, d_from_first: int = 3) -> MultiHomogeneousMap:
    """((x0 : x1), (y0 : y1)) -> ((y0^2 : y1^2), (x0^3 : x1^3)):
    the factor-swapping product map with multidegree [[0, 3], [2, 0]]."""
    a, b = d_from_second, d_from_first
    return MultiHomogeneousMap(
        signature=(1, 1),
        targets=(
            (((1, (0, 0, a, 0)),), ((1, (0, 0, 0, a)),)),
            (((1, (b, 0, 0, 0)),), ((1, (0, b, 0, 0)),)),
        ),
    )


def sum_square_map() -> MultiHomogeneousMap:
    """(x : y) -> (x^2 + y^2 : x y) on P^1, a degree-2 endomorphism with
    no rational point of indeterminacy."""
    return MultiHomogeneousMap(
        signature=(1,),
        targets=(
            (((1, (2, 0)), (1, (0, 2))), ((1, (1, 1)),)),
        ),
    )


@dataclass(frozen=True)
class ExampleCase:
    name: str
    lattice: PicardLattice
    pullback: PullbackMap
    divisor: DivisorClass
    expected_mu1: QuadraticNumber
    expected_mu2: QuadraticNumber
    morphism: MultiHomogeneousMap | None = None
    note: str = ""


def example_cases() -> tuple[ExampleCase, ...]:
    k3 = k3_lattice()
    triple = triple_line_lattice()
    orthant2 = PicardLattice.orthant(2)
    return (
        ExampleCase(
            name="polarized-five",
            lattice=orthant2,
            pullback=PullbackMap.diagonal([5, 5]),
            divisor=DivisorClass.of([1, 2]),
            expected_mu1=QuadraticNumber(5),
            expected_mu2=QuadraticNumber(5),
            note="pullback fixes every class up to the factor 5",
        ),
        ExampleCase(
            name="k3-involution",
            lattice=k3,
            pullback=k3_iota1(),
            divisor=DivisorClass.of([1, 1]),
            expected_mu1=BETA_INV,
            expected_mu2=BETA,
        ),
        ExampleCase(
            name="k3-composed-involutions",
            lattice=k3,
            pullback=k3_phi(),
            divisor=DivisorClass.of([1, 1]),
            expected_mu1=QuadraticNumber(7, -4, 3),
            expected_mu2=QuadraticNumber(7, 4, 3),
            note="diag(beta^-2, beta^2); coefficients are beta^-2 and beta^2",
        ),
        ExampleCase(
            name="triple-line-involution",
            lattice=triple,
            pullback=triple_line_iota(0),
            divisor=DivisorClass.of([1, 1, 1]),
            expected_mu1=QuadraticNumber(Fraction(1, 3)),
            expected_mu2=QuadraticNumber(3),
        ),
        ExampleCase(
            name="triple-line-composed",
            lattice=triple,
            pullback=triple_line_phi12(),
            divisor=DivisorClass.of([1, 1, 1]),
            expected_mu1=QuadraticNumber(Fraction(11, 3), Fraction(-4, 3), 7),
            expected_mu2=QuadraticNumber(Fraction(11, 3), Fraction(4, 3), 7),
            note="roots of 3 t^2 - 22 t + 3",
        ),
        ExampleCase(
            name="product-powers-2-3",
            lattice=orthant2,
            pullback=PullbackMap.diagonal([2, 3]),
            divisor=DivisorClass.of([1, 1]),
            expected_mu1=QuadraticNumber(2),
            expected_mu2=QuadraticNumber(3),
            morphism=power_product_map(2, 3),
        ),
        ExampleCase(
            name="product-swap-2-3",
            lattice=orthant2,
            pullback=PullbackMap.from_rows([[0, 3], [2, 0]]),
            divisor=DivisorClass.of([1, 1]),
            expected_mu1=QuadraticNumber(2),
            expected_mu2=QuadraticNumber(3),
            morphism=swap_product_map(),
        ),
    )


@dataclass
class CaseResult:
    name: str
    passed: bool
    expected_mu1: QuadraticNumber
    expected_mu2: QuadraticNumber
    computed_mu1: CoefficientResult
    computed_mu2: CoefficientResult
    bisect_error: float
    detail: str = ""


@dataclass
class RegistryReport:
    cases: list[CaseResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)


def run_paper_examples(bisection_tolerance: float = 1e-9) -> RegistryReport:
    """Recompute every registry case and compare exactly; also confirm
    the bisection fallback lands within bisection_tolerance of the exact
    value, and that any attached morphism reproduces the pullback."""
    results = []
    for case in example_cases():
        r1 = mu1(case.pullback, case.divisor, case.lattice)
        r2 = mu2(case.pullback, case.divisor, case.lattice)
        exact_ok = (r1.exact and r2.exact
                    and r1.value == case.expected_mu1
                    and r2.value == case.expected_mu2)
        b1 = mu1(case.pullback, case.divisor, case.lattice, method="bisection")
        b2 = mu2(case.pullback, case.divisor, case.lattice, method="bisection")
        bisect_error = max(abs(b1.as_float() - r1.as_float()),
                           abs(b2.as_float() - r2.as_float()))
        detail = ""
        morphism_ok = True
        if case.morphism is not None:
            _, pullback = multidegree_matrix(case.morphism)
            morphism_ok = pullback is not None and pullback == case.pullback
            if not morphism_ok:
                detail = "morphism multidegrees disagree with the pullback"
        passed = exact_ok and bisect_error <= bisection_tolerance and morphism_ok
        if not exact_ok and not detail:
            detail = (f"expected ({case.expected_mu1}, {case.expected_mu2}), "
                      f"computed ({r1.value}, {r2.value})")
        results.append(CaseResult(
            name=case.name, passed=passed,
            expected_mu1=case.expected_mu1, expected_mu2=case.expected_mu2,
            computed_mu1=r1, computed_mu2=r2,
            bisect_error=bisect_error, detail=detail))
    return RegistryReport(results)
