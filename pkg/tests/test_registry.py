"""The worked-example registry recomputes and cross-checks itself."""

from fractions import Fraction

from heightdyn import (
    QuadraticNumber,
    multidegree_matrix,
    registry,
)


def test_example_suite_passes():
    report = registry.run_paper_examples()
    assert report.passed
    assert len(report.cases) == 7
    for case in report.cases:
        assert case.passed, f"{case.name}: {case.detail}"
        assert case.detail == ""


def test_example_suite_names_are_stable():
    names = [case.name for case in registry.example_cases()]
    assert names == [
        "polarized-five",
        "k3-involution",
        "k3-composed-involutions",
        "triple-line-involution",
        "triple-line-composed",
        "product-powers-2-3",
        "product-swap-2-3",
    ]


def test_bisection_error_is_tiny_everywhere():
    report = registry.run_paper_examples()
    for case in report.cases:
        assert case.bisect_error <= 1e-9
        assert case.computed_mu1.exact and case.computed_mu2.exact


def test_expected_values_are_the_published_ones():
    by_name = {c.name: c for c in registry.example_cases()}
    assert by_name["k3-involution"].expected_mu1 == QuadraticNumber(2, -1, 3)
    assert by_name["k3-composed-involutions"].expected_mu1 == QuadraticNumber(7, -4, 3)
    assert by_name["k3-composed-involutions"].expected_mu2 == QuadraticNumber(7, 4, 3)
    assert by_name["triple-line-involution"].expected_mu1 == QuadraticNumber(Fraction(1, 3))
    assert by_name["triple-line-involution"].expected_mu2 == QuadraticNumber(3)
    assert by_name["triple-line-composed"].expected_mu1 == QuadraticNumber(
        Fraction(11, 3), Fraction(-4, 3), 7)


def test_attached_morphisms_match_their_pullbacks():
    attached = 0
    for case in registry.example_cases():
        if case.morphism is None:
            continue
        attached += 1
        _, pullback = multidegree_matrix(case.morphism)
        assert pullback == case.pullback
    assert attached == 2


def test_tolerance_knob_is_honest():
    # an impossible tolerance must fail instead of being clamped
    report = registry.run_paper_examples(bisection_tolerance=0.0)
    strict = [c for c in report.cases if c.bisect_error > 0.0]
    assert any(not c.passed for c in strict) or all(
        c.bisect_error == 0.0 for c in report.cases)
