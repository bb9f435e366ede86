import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chargepage.asymptotics import (AdditivityComparison, additivity_curve, catalan,
                                    closed_form_counting, closed_form_gap, convergence_exponent,
                                    exact_counting, exact_counting_commuting,
                                    exact_counting_noncommuting, exact_page, leading_counting_term,
                                    log_catalan, log_multinomial, multinomial, page_baseline,
                                    unconstrained_page)
from chargepage.entanglement import PageCurveEstimate, state_counting_entropy
from chargepage.sectors import microcanonical_commuting, microcanonical_noncommuting


def lattice_paths(a, b):
    """Up/down paths with a ups and b downs that never dip below zero."""
    def walk(ups, downs, height):
        if ups == 0 and downs == 0:
            return 1
        total = 0
        if ups:
            total += walk(ups - 1, downs, height + 1)
        if downs and height > 0:
            total += walk(ups, downs - 1, height - 1)
        return total
    return walk(a, b, 0)


def test_catalan_examples():
    assert catalan(2, 2) == 2
    assert catalan(4, 4) == 14
    assert all(catalan(n, 0) == 1 for n in range(8))
    with pytest.raises(ValueError):
        catalan(1, 2)


def test_catalan_matches_path_counting():
    for a in range(13):
        for b in range(min(a, 12 - a) + 1):
            assert catalan(a, b) == lattice_paths(a, b)


@given(st.integers(0, 200), st.integers(0, 200))
def test_log_catalan_matches_exact(a, b):
    a, b = max(a, b), min(a, b)
    assert math.isclose(log_catalan(a, b), math.log(catalan(a, b)), rel_tol=1e-12, abs_tol=1e-9)


def test_multinomial():
    assert multinomial(4, [1, 1, 1, 1]) == 24
    assert multinomial(8, [2, 2, 2, 2]) == 2520
    assert math.isclose(log_multinomial(40, [10] * 4), math.log(multinomial(40, [10] * 4)))
    with pytest.raises(ValueError):
        multinomial(4, [1, 1])


def test_unconstrained_page_examples():
    assert unconstrained_page(0, 3) == -0.5 * 4.0 ** -3
    assert math.isclose(unconstrained_page(2, 2), 2 * math.log(4) - 0.5)
    assert math.isclose(unconstrained_page(1, 7), math.log(4) - 4.0 ** -6 / 2)
    with pytest.raises(ValueError):
        unconstrained_page(3, 1)


def test_baseline_mirrors_about_midpoint():
    for n_a in range(9):
        for kind in ("eq4", "exact-page"):
            assert page_baseline(n_a, 8, kind) == page_baseline(8 - n_a, 8, kind)
    with pytest.raises(ValueError):
        page_baseline(1, 4, "other")


def test_exact_page_small_cases():
    # 2 x 2: Page's value is 1/3 exactly
    assert math.isclose(exact_page(2, 2), 1 / 3)
    assert exact_page(1, 16) == 0
    # digamma branch (m n > 10^6) against a direct harmonic sum
    m, n = 1024, 1024
    direct = math.fsum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2 * n)
    assert math.isclose(exact_page(m, n), direct, rel_tol=1e-12)


def test_exact_page_approaches_eq4():
    assert abs(exact_page(4 ** 3, 4 ** 5) - unconstrained_page(3, 5)) < 1e-3


def test_trivial_counting_values():
    assert exact_counting_commuting(4, 0).value == 0
    assert exact_counting_noncommuting(4, 0).value == 0
    assert math.isclose(exact_counting_commuting(4, 4).value, math.log(24))
    assert math.isclose(exact_counting_noncommuting(4, 4).value, math.log(32))


def test_counting_errors():
    with pytest.raises(ValueError):
        exact_counting_commuting(6, 2)
    with pytest.raises(ValueError):
        exact_counting_noncommuting(5, 2)
    with pytest.raises(ValueError):
        exact_counting("other", 4, 2)
    with pytest.raises(ValueError):
        closed_form_counting("commuting", 8, 0)


@pytest.mark.parametrize("model", ["noncommuting", "commuting"])
def test_exact_sums_match_dense_n4(model):
    basis = microcanonical_noncommuting(4) if model == "noncommuting" else microcanonical_commuting(4)
    for n_a in range(5):
        assert abs(exact_counting(model, 4, n_a).value - state_counting_entropy(basis, n_a)) < 1e-9


@pytest.mark.parametrize("model", ["noncommuting", "commuting"])
def test_exact_sums_match_dense_n8(model):
    basis = microcanonical_noncommuting(8) if model == "noncommuting" else microcanonical_commuting(8)
    for n_a in (1, 2, 3):
        assert abs(exact_counting(model, 8, n_a).value - state_counting_entropy(basis, n_a)) < 1e-9


@pytest.mark.parametrize("model", ["noncommuting", "commuting"])
def test_exact_sums_bounded(model):
    for n in (8, 12, 16):
        log_dim = exact_counting(model, n, n).value
        for k in range(n + 1):
            value = exact_counting(model, n, k).value
            assert -1e-12 <= value <= min(k * math.log(4), log_dim) + 1e-12


def test_log_gamma_branch_continuous():
    # N = 24 uses log-gamma; compare with an exact big-integer evaluation done by hand
    n, n_a = 24, 6
    from chargepage import asymptotics
    old = asymptotics.EXACT_LIMIT
    try:
        asymptotics.EXACT_LIMIT = 100
        exact = [exact_counting(m, n, n_a).value for m in ("noncommuting", "commuting")]
    finally:
        asymptotics.EXACT_LIMIT = old
    approx = [exact_counting(m, n, n_a).value for m in ("noncommuting", "commuting")]
    assert np.allclose(exact, approx, rtol=1e-12)


@pytest.mark.parametrize("n,n_a", [(8, 2), (32, 8), (64, 16), (128, 100)])
def test_closed_form_gap_identity(n, n_a):
    nc = closed_form_counting("noncommuting", n, n_a).value
    c = closed_form_counting("commuting", n, n_a).value
    assert abs((nc - c) - n_a ** 2 / (n ** 2 * (n - n_a))) < 1e-12
    assert closed_form_gap(n, n_a) == n_a ** 2 / (n ** 2 * (n - n_a))
    # dropping the sign term leaves the same value for both
    common = leading_counting_term(n, n_a) + 3 * n_a / (4 * n ** 2)
    assert math.isclose((nc + c) / 2, common, rel_tol=1e-14)


@pytest.mark.parametrize("model", ["noncommuting", "commuting"])
def test_closed_form_converges(model):
    sizes = (32, 64, 128)
    errors = [closed_form_counting(model, n, n // 4).value - exact_counting(model, n, n // 4).value
              for n in sizes]
    assert all(abs(e) < 1e-3 for e in errors)
    assert convergence_exponent(sizes, errors) <= -1.4
    scaled = [abs(e) * n ** 1.5 for e, n in zip(errors, sizes)]
    assert max(scaled) < 2 * max(scaled[0], 1e-12)


def test_convergence_exponent_of_power_law():
    sizes = [10, 20, 40]
    assert math.isclose(convergence_exponent(sizes, [3 * n ** -2.0 for n in sizes]), -2.0)


def test_additivity_curve():
    assert additivity_curve(4, 2, 1.9, 2.0) == pytest.approx(2.0 - 3 * 0.1)
    # no lowering from the single charge means no lowering at all
    assert additivity_curve(4, 2, 2.0, 2.0) == 2.0
    est = PageCurveEstimate("x", 4, 0, {2: (1.9, 0.01, 100)})
    assert additivity_curve(4, 2, est, 2.0) == pytest.approx(1.7)


def test_additivity_comparison_flags():
    cmp = AdditivityComparison(2, ansatz=1.0, noncommuting=1.1, commuting=0.9)
    assert cmp.noncommuting_superadditive and cmp.commuting_subadditive
