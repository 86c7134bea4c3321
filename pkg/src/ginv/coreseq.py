"""The multinomial sequence C_Omega, the inverse g^{-1} = (omega + 1)^{-1}, and friends.

``C_Omega(n) = Omega(n)! / prod_{p^a || n} a!`` is the multinomial
coefficient of the exponent multiset of ``n``.  The inverse of ``omega + 1``
is built from it by a squarefree divisor sum::

    |g^{-1}(n)| = sum_{d | n} mu(n/d)^2 C_Omega(d),   g^{-1}(n) = lambda(n) |g^{-1}(n)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dirichlet import convolve_int
from .errors import DomainError
from .sieve import (
    BasicTables,
    FactorSieve,
    Factorization,
    FunTable,
    Peeled,
    basic_tables,
    make_table,
    peel_factorizations,
)

ExponentSignature = tuple[int, ...]


def c_omega(fact: Factorization) -> int:
    """Multinomial ``Omega(n)! / prod a!`` of the exponents in ``fact``."""
    out = math.factorial(fact.big_omega)
    for a in fact.exponents:
        out //= math.factorial(a)
    return out


def squarefree_bound(k: int) -> int:
    """``sum_{j=0}^k binom(k, j) j!``: the value of ``|g^{-1}|`` at squarefree n with k primes."""
    return sum(math.comb(k, j) * math.factorial(j) for j in range(k + 1))


def exponent_signature(fact: Factorization) -> ExponentSignature:
    """Prime exponents of ``n`` as a descending tuple; ``()`` for ``n = 1``."""
    return tuple(sorted(fact.exponents, reverse=True))


@dataclass(frozen=True)
class CoreTables:
    """Dense tables of C_Omega, g^{-1}, |g^{-1}| and f_hat_1 over ``[1, N]``."""

    basic: BasicTables
    c_omega: FunTable
    g_inv: FunTable
    abs_g_inv: FunTable
    f_hat1: FunTable

    @property
    def limit(self) -> int:
        return self.basic.limit


def c_omega_table(s: FactorSieve, peeled: Peeled | None = None) -> FunTable:
    pk = peeled if peeled is not None else peel_factorizations(s)
    return make_table("c_omega", pk.multinomial)


def g_inverse_tables(s: FactorSieve, basic: BasicTables | None = None) -> CoreTables:
    """Build C_Omega, g^{-1}, |g^{-1}| and f_hat_1 for every ``n <= s.limit``."""
    pk = peel_factorizations(s)
    basic = basic if basic is not None else basic_tables(s, pk)
    c = pk.multinomial
    absg = convolve_int(basic.mu_sq.values, c)
    g = absg * basic.liouville.values
    max_w = int(pk.omega.max(initial=0))
    f1_by_omega = np.array([squarefree_bound(w) for w in range(max_w + 1)], dtype=np.int64)
    f1 = f1_by_omega[pk.omega]
    return CoreTables(
        basic=basic,
        c_omega=make_table("c_omega", c),
        g_inv=make_table("g_inv", g),
        abs_g_inv=make_table("abs_g_inv", absg),
        f_hat1=make_table("f_hat1", f1),
    )


def build_core(limit: int) -> CoreTables:
    """Sieve, basic tables and core tables in one call."""
    from .sieve import build_factor_sieve

    return g_inverse_tables(build_factor_sieve(limit))


def c_k_table(s: FactorSieve, k: int, omega: FunTable | None = None) -> FunTable:
    """``C_k``: the k-fold Dirichlet self-convolution of omega (``C_0 = eps``)."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if omega is None:
        omega = make_table("omega", peel_factorizations(s).omega)
    ck = np.zeros(s.limit + 1, dtype=np.int64)
    ck[1] = 1
    for _ in range(k):
        ck = convolve_int(omega.values, ck)
    return make_table(f"C_{k}", ck)


def c_k_tables(s: FactorSieve, kmax: int, omega: FunTable | None = None) -> list[FunTable]:
    """``[C_0, ..., C_kmax]``, each built from the previous one."""
    if omega is None:
        omega = make_table("omega", peel_factorizations(s).omega)
    ck = np.zeros(s.limit + 1, dtype=np.int64)
    ck[1] = 1
    out = [make_table("C_0", ck)]
    for k in range(1, kmax + 1):
        ck = convolve_int(omega.values, ck)
        out.append(make_table(f"C_{k}", ck))
    return out


def elementary_symmetric(exponents: tuple[int, ...]) -> list[int]:
    """Coefficients ``e_0, e_1, ...`` of ``prod (1 + a t)`` over the exponents."""
    coeffs = [1]
    for a in exponents:
        nxt = coeffs + [0]
        for i, c in enumerate(coeffs):
            nxt[i + 1] += a * c
        coeffs = nxt
    return coeffs


def power_sum(exponents: tuple[int, ...], k: int) -> int:
    return sum(a**k for a in exponents)


def g_inverse_symmetric(fact: Factorization) -> int:
    """g^{-1}(n) from the elementary symmetric polynomials of the exponents.

    ``g^{-1}(n) = lambda(n) C_Omega(n) sum_k e_k / (binom(Omega, k) k!)``,
    evaluated in exact rationals; a non-integral result is rejected.
    """
    if not fact.pairs:
        raise DomainError("symmetric formula needs n >= 2")
    big = fact.big_omega
    e = elementary_symmetric(fact.exponents)
    total = sum(
        (Fraction(ek, math.comb(big, k) * math.factorial(k)) for k, ek in enumerate(e)),
        Fraction(0),
    )
    value = (-1) ** big * c_omega(fact) * total
    if value.denominator != 1:
        raise ArithmeticError(f"symmetric formula gave non-integer {value} for {fact}")
    return int(value)


@dataclass(frozen=True)
class ExtremalRow:
    k: int
    upper: int
    observed_max: int | None
    observed_min: int | None
    max_all_squarefree: bool
    min_all_prime_powers: bool
    within_bounds: bool


def extremal_rows(core: CoreTables, kmax: int) -> list[ExtremalRow]:
    """Observed extremes of ``|g^{-1}(n)|`` over ``2 <= n <= N`` with ``Omega(n) = k``."""
    b = core.basic
    big = b.big_omega.values
    absg = core.abs_g_inv.values
    sqf = b.mu_sq.values.astype(bool)
    ppow = b.omega.values == 1
    rows = []
    for k in range(1, kmax + 1):
        idx = np.flatnonzero(big == k)
        idx = idx[idx >= 2]
        upper = squarefree_bound(k)
        if idx.size == 0:
            rows.append(ExtremalRow(k, upper, None, None, True, True, True))
            continue
        vals = absg[idx]
        vmax, vmin = int(vals.max()), int(vals.min())
        at_max = idx[vals == vmax]
        at_min = idx[vals == vmin]
        rows.append(ExtremalRow(
            k, upper, vmax, vmin,
            bool(sqf[at_max].all()),
            bool(ppow[at_min].all()),
            bool(vmin >= 2 and vmax <= upper),
        ))
    return rows


def extremal_bounds_check(core: CoreTables, kmax: int) -> bool:
    """Bounds ``2 <= |g^{-1}(n)| <= sum binom(k,j) j!`` and where the extremes sit.

    When a squarefree witness with ``omega = k`` lies in range the maximum must
    equal the upper bound and be attained only at squarefree ``n``; the
    minimum must be 2 and be attained only at prime powers.
    """
    b = core.basic
    big = b.big_omega.values
    sqf = b.mu_sq.values.astype(bool)
    for row in extremal_rows(core, kmax):
        if row.observed_max is None:
            continue
        if not row.within_bounds:
            return False
        has_sqf = bool(np.any(sqf & (big == row.k)))
        if has_sqf and (row.observed_max != row.upper or not row.max_all_squarefree):
            return False
        if 2**row.k <= core.limit and (row.observed_min != 2 or not row.min_all_prime_powers):
            return False
    return True
