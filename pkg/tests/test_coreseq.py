import math

import pytest
from hypothesis import given, strategies as st

import oracles
from ginv.coreseq import (
    build_core,
    c_k_table,
    c_omega,
    elementary_symmetric,
    exponent_signature,
    extremal_bounds_check,
    extremal_rows,
    g_inverse_symmetric,
    squarefree_bound,
)
from ginv.errors import DomainError
from ginv.sieve import factorize

N = 2000


@pytest.fixture(scope="module")
def core():
    return build_core(N)


def test_published_values(core):
    assert core.g_inv.head(24) == [1, -2, -2, 2, -2, 5, -2, -2, 2, 5, -2, -7, -2, 5, 5, 2,
                                   -2, -7, -2, -7, 5, 5, -2, 9]
    assert core.g_inv[30] == -16
    assert core.g_inv[210] == 65
    assert core.f_hat1[30] == 16
    assert [core.c_omega[n] for n in (4, 6, 9, 10, 12)] == [1, 2, 1, 2, 3]


def test_against_divisor_recursion(core):
    assert core.g_inv.head(N) == oracles.ginv_brute(N)[1:]


def test_abs_and_sign(core):
    for n in range(1, N + 1):
        assert core.abs_g_inv[n] == abs(core.g_inv[n])
        assert (core.g_inv[n] > 0) == (oracles.liouville(n) > 0)


@given(st.integers(min_value=2, max_value=N))
def test_symmetric_polynomial_formula(n):
    core = build_core(N)
    assert g_inverse_symmetric(factorize(core.basic.sieve, n)) == core.g_inv[n]


def test_symmetric_formula_rejects_one(core):
    with pytest.raises(DomainError):
        g_inverse_symmetric(factorize(core.basic.sieve, 1))


def test_squarefree_value_is_f_hat1(core):
    for n in range(1, N + 1):
        if core.basic.mu_sq[n]:
            assert core.abs_g_inv[n] == core.f_hat1[n]
    assert [squarefree_bound(k) for k in range(5)] == [1, 2, 5, 16, 65]


def test_c_omega_helpers(core):
    f = factorize(core.basic.sieve, 720)  # 2^4 3^2 5
    assert c_omega(f) == math.factorial(7) // (math.factorial(4) * math.factorial(2))
    assert exponent_signature(f) == (4, 2, 1)
    assert elementary_symmetric((4, 2, 1)) == [1, 7, 14, 8]


def test_c_k_table_values(core):
    c0 = c_k_table(core.basic.sieve, 0)
    assert c0.head(4) == [1, 0, 0, 0]
    c1 = c_k_table(core.basic.sieve, 1)
    assert c1.head(12) == [0] + [oracles.omega(n) for n in range(2, 13)]
    c2 = c_k_table(core.basic.sieve, 2)
    assert c2[12] == sum(oracles.omega(d) * oracles.omega(12 // d) for d in oracles.divisors(12))
    with pytest.raises(DomainError):
        c_k_table(core.basic.sieve, -1)


def test_extremal_bounds(core):
    assert extremal_bounds_check(core, 10)
    rows = {r.k: r for r in extremal_rows(core, 4)}
    assert rows[2].observed_max == 5 and rows[2].observed_min == 2
    assert rows[3].observed_max == 16
