import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ginv import analytic
from ginv.errors import DomainError, RangeError


@pytest.mark.parametrize("s", [1.05, 1.3, 2.0, 3.5, 10.0, 45.0, 80.0])
def test_zeta_against_mpmath(s):
    exact = mpmath.zeta(s) - 1
    assert analytic.zeta_minus_one(s) == pytest.approx(float(exact), rel=1e-13)


@pytest.mark.parametrize("s", [1.1, 1.39943, 2.0, 3.0, 7.0])
def test_prime_zeta_against_mpmath(s):
    assert analytic.prime_zeta(s) == pytest.approx(float(mpmath.primezeta(s)), rel=1e-12)


def test_prime_zeta_brackets_direct_sum():
    head, tail = analytic.prime_zeta_direct(2.0, 10**5)
    assert head < analytic.prime_zeta(2.0) < head + tail


def test_domain_errors():
    with pytest.raises(DomainError):
        analytic.zeta(1.0)
    with pytest.raises(DomainError):
        analytic.prime_zeta(0.5)
    with pytest.raises(DomainError):
        analytic.gamma_upper(-1.5, 2.0)
    with pytest.raises(DomainError):
        analytic.gamma_upper(2.5, -1.0)
    with pytest.raises(DomainError):
        analytic.g_hat(2.5)
    with pytest.raises(DomainError):
        analytic.g_cal(2.0)
    with pytest.raises(DomainError):
        analytic.lemma_a3_report(4.0)
    with pytest.raises(DomainError):
        analytic.Precision(rel_tol=1e-3)
    with pytest.raises(RangeError):
        analytic.b_poly_recurrence(31)


def test_sigma1_is_root():
    s1 = analytic.sigma1()
    assert analytic.prime_zeta(s1) == pytest.approx(1.0, abs=1e-11)
    assert s1 == pytest.approx(1.39943, abs=1e-4)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=0.1, max_value=40), st.floats(min_value=0.01, max_value=200))
def test_gamma_upper_against_mpmath(a, z):
    exact = mpmath.gammainc(a, z)
    if exact < mpmath.mpf("1e-300"):
        return
    assert analytic.gamma_upper(a, z) == pytest.approx(float(exact), rel=1e-10)


@pytest.mark.parametrize("a,z", [(2.5, 1000.0), (1e4, 1e4), (500.0, 1000.0), (100.0, 50.0)])
def test_log_gamma_upper_beyond_double_range(a, z):
    exact = mpmath.log(mpmath.gammainc(a, z))
    assert analytic.log_gamma_upper(a, z) == pytest.approx(float(exact), rel=1e-12)


def test_log_gamma_lower():
    exact = mpmath.log(mpmath.gammainc(1000, 0, 500))
    assert analytic.log_gamma_lower(1000.0, 500.0) == pytest.approx(float(exact), rel=1e-12)


@pytest.mark.parametrize("n,z", [(3, -2.0), (7, -4.5), (5, -10.0)])
def test_integer_a_accepts_negative_z(n, z):
    assert analytic.gamma_upper(n, z) == pytest.approx(float(mpmath.gammainc(n, z)), rel=1e-12)


def test_gamma_upper_int_negative_exact():
    n, t = 4, 3
    exact = float(analytic.gamma_upper_int_negative(n, t)) * math.exp(t)
    assert exact == pytest.approx(float(mpmath.gammainc(n, -t)), rel=1e-12)


def test_gamma_asym_reports_all_within_tolerance():
    reps = analytic.gamma_asym_reports()
    assert {r.name for r in reps} == {"gamma_fixed_a", "gamma_diagonal", "gamma_lambda_gt1",
                                      "gamma_lambda_lt1", "gamma_reflected"}
    assert all(r.passed for r in reps)
    # the diagonal error shrinks like z^(-1/2)
    diag = sorted((r for r in reps if r.name == "gamma_diagonal"), key=lambda r: r.params["z"])
    gaps = [abs(r.ratio - 1) * math.sqrt(r.params["z"]) for r in diag]
    assert max(gaps) / min(gaps) < 1.2


def test_b_polynomials():
    assert analytic.b_poly_recurrence(0) == [1]
    assert analytic.b_poly_recurrence(1) == [0, 1]
    assert analytic.b_poly_recurrence(2) == [0, 1, 2]
    assert analytic.b_poly_recurrence(3) == [0, 1, 8, 6]
    assert analytic.second_order_eulerian_row(3) == (1, 8, 6, 0)
    assert all(analytic.b_poly_recurrence(n) == analytic.b_poly_eulerian(n) for n in range(31))
    assert analytic.b_lambda(3, Fraction(1, 2)) == Fraction(1, 2) + 2 + Fraction(3, 4)
    assert analytic.b_lambda(2, 2.0) == pytest.approx(10.0)


def test_erfi_and_normal_cdf():
    for z in (0.3, 2.0, 5.0):
        assert analytic.erfi(z) == pytest.approx(float(mpmath.erfi(z)), rel=1e-13)
    assert analytic.erfi_asymptotic(20.0) == pytest.approx(float(mpmath.erfi(20)), rel=1e-8)
    with pytest.raises(OverflowError):
        analytic.erfi(30.0)
    assert analytic.normal_cdf(0.0) == 0.5
    assert analytic.normal_cdf(1.96) == pytest.approx(0.9750021, abs=1e-7)


def test_euler_product_values():
    assert analytic.g_hat(0.0) == 1.0
    assert analytic.g_hat(1.0) == pytest.approx(0.418611, abs=1e-6)
    assert analytic.g_hat(2.0) == pytest.approx(0.097027, abs=1e-6)
    assert analytic.g_cal(1.0) == pytest.approx(1.0, abs=1e-12)
    assert analytic.g_tilde(1.0) == pytest.approx(1.0, abs=1e-10)
    assert analytic.g_cal(0.0) == analytic.g_tilde(0.0) == 1.0
    assert analytic.f_hat(2.0, 0.7) == pytest.approx(analytic.f_hat_product(2.0, 0.7), rel=1e-6)


def test_g_cal_insensitive_to_prime_cut():
    # with the tail correction, cutting the explicit product at 10^4 or 10^6 agrees
    z = 0.6
    p = analytic.Precision(prime_cut=10**4)
    assert analytic.g_cal(z, p) == pytest.approx(analytic.g_cal(z), rel=1e-9)


def test_euler_product_functions_domain():
    out = analytic.euler_product_functions(2.0)
    assert out["G_cal"] is None and out["G_tilde"] is None
    assert out["G_hat"] == pytest.approx(0.097027, abs=1e-6)


@pytest.mark.parametrize("t", [7.5, 20.0, 50.0, 100.0])
def test_lemma_a3(t):
    r = analytic.lemma_a3_report(t)
    assert abs(r.ratio - 1) <= 5 / t
    assert r.extra["sign_ok"]


def test_alternating_sum_small_case():
    # t = 3: -1 + 3 - 9/2 = -5/2
    assert float(analytic.alternating_partial_sum(3.0)) == pytest.approx(-2.5)
