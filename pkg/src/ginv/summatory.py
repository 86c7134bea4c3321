"""Partial sums of g^{-1} and the exact formulas tying them to M(x) and L(x).

Each identity evaluator works on a single ``x`` and uses numpy vectors over
``k = 1..x``, so checking every ``x <= 10**4`` takes well under a second per
formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coreseq import CoreTables
from .errors import CapacityError, DomainError, RangeError
from .sieve import BasicTables, PrefixTable, make_table


@dataclass(frozen=True)
class SummatorySet:
    """Prefix tables of g^{-1}, |g^{-1}|, their sign-split parts, and (-1)^omega."""

    core: CoreTables
    Ginv: PrefixTable
    absGinv: PrefixTable
    GinvPlus: PrefixTable
    GinvMinus: PrefixTable
    Lomega: PrefixTable

    @property
    def limit(self) -> int:
        return self.core.limit

    @property
    def basic(self) -> BasicTables:
        return self.core.basic


def build_summatory(core: CoreTables) -> SummatorySet:
    g = core.g_inv.values
    pos = np.where(g > 0, g, 0)
    neg = np.where(g < 0, g, 0)
    lam_omega = np.where(core.basic.omega.values % 2 == 0, 1, -1)
    return SummatorySet(
        core=core,
        Ginv=PrefixTable.of(core.g_inv, "Ginv"),
        absGinv=PrefixTable.of(core.abs_g_inv, "absGinv"),
        GinvPlus=PrefixTable.of(make_table("g_inv_plus", pos), "GinvPlus"),
        GinvMinus=PrefixTable.of(make_table("g_inv_minus", neg), "GinvMinus"),
        Lomega=PrefixTable.of(make_table("lambda_omega", lam_omega), "Lomega"),
    )


def _check_x(s: SummatorySet, x: int) -> None:
    if not 1 <= x <= s.limit:
        raise RangeError(f"x={x} outside [1, {s.limit}]")


def _dot(a: np.ndarray, b: np.ndarray) -> int:
    if a.dtype == object or b.dtype == object:
        return int(sum(int(u) * int(v) for u, v in zip(a, b)))
    return int(np.dot(a, b))


def mertens_via_key_identity(s: SummatorySet, x: int) -> int:
    """``M(x) = sum_{k <= x} g^{-1}(k) (pi(x // k) + 1)``."""
    _check_x(s, x)
    k = np.arange(1, x + 1)
    return _dot(s.core.g_inv.values[1 : x + 1], s.basic.pi.sums[x // k] + 1)


def mertens_via_prop51(s: SummatorySet, x: int) -> int:
    """``M(x) = G(x) + sum_{k <= x//2} G(k) (pi(x // k) - pi(x // (k + 1)))``."""
    _check_x(s, x)
    h = x // 2
    k = np.arange(1, h + 1)
    pi = s.basic.pi.sums
    return s.Ginv(x) + _dot(s.Ginv.sums[1 : h + 1], pi[x // k] - pi[x // (k + 1)])


def mertens_via_prime_sum(s: SummatorySet, x: int) -> int:
    """``M(x) = G(x) + sum_{p <= x} G(x // p)``."""
    _check_x(s, x)
    primes = s.basic.sieve.primes
    ps = primes[: np.searchsorted(primes, x, side="right")]
    return s.Ginv(x) + int(s.Ginv.sums[x // ps].sum())


def ginv_from_mertens(s: SummatorySet, x: int) -> int:
    """``G(x) = sum_{d <= x} lambda(d) C_Omega(d) M(x // d)``."""
    _check_x(s, x)
    d = np.arange(1, x + 1)
    lc = s.basic.liouville.values[1 : x + 1] * s.core.c_omega.values[1 : x + 1]
    return _dot(lc, s.basic.M.sums[x // d])


def absginv_from_Q(s: SummatorySet, x: int) -> int:
    """``|G|(x) = sum_{d <= x} C_Omega(d) Q(x // d)``."""
    _check_x(s, x)
    d = np.arange(1, x + 1)
    return _dot(s.core.c_omega.values[1 : x + 1], s.basic.Q.sums[x // d])


def abel_identity_check(s: SummatorySet, x: int) -> bool:
    """``G(x) == L(x)|g(x)| - sum_{n < x} L(n) (|g(n+1)| - |g(n)|)``."""
    _check_x(s, x)
    a = s.core.abs_g_inv.values
    L = s.basic.L.sums
    rhs = int(L[x]) * int(a[x]) - _dot(L[1:x], a[2 : x + 1] - a[1:x])
    return rhs == s.Ginv(x)


def l_star(s: SummatorySet, t: int) -> int:
    """``sum_{n <= t, omega(n) <= 1.5 loglog t} (-1)^omega(n)`` (natural logs)."""
    if t < 3:
        raise DomainError(f"l_star needs t >= 3, got {t}")
    _check_x(s, t)
    thr = 1.5 * math.log(math.log(t))
    w = s.basic.omega.values[1 : t + 1]
    keep = w <= thr
    return int(np.where(w[keep] % 2 == 0, 1, -1).sum())


def sign_densities(s: SummatorySet, n: int) -> tuple[float, float]:
    """Fractions of ``k <= n`` with ``lambda(k) = +1`` and ``-1``."""
    _check_x(s, n)
    plus = (n + s.basic.L(n)) // 2
    return plus / n, (n - plus) / n


@dataclass(frozen=True)
class PrimorialRow:
    m: int
    primorial: int
    ginv: int
    factorial: int
    ratio: float
    sign_ok: bool
    divided: tuple[tuple[int, int, float, bool], ...]
    """``(p_k, G(P / p_k), ratio to (4m)!, G(P / p_k) > 0)`` for k = 1..4m+1."""


def primorial_report(s: SummatorySet, mmax: int) -> list[PrimorialRow]:
    """``G((4m+1)#)`` against ``(4m+1)!`` and ``G((4m+1)# / p_k)`` against ``(4m)!``.

    Values and ratios are reported; the expected signs (negative for the
    primorial, positive for the quotients) are recorded, not enforced.

    Raises:
        CapacityError: if ``(4m+1)#`` exceeds the table limit for some ``m <= mmax``.
    """
    primes = [int(p) for p in s.basic.sieve.primes[: 4 * mmax + 1]]
    rows = []
    for m in range(1, mmax + 1):
        ps = primes[: 4 * m + 1]
        if len(ps) < 4 * m + 1:
            raise CapacityError(f"not enough primes for m={m}")
        P = math.prod(ps)
        if P > s.limit:
            raise CapacityError(f"({4 * m + 1})# = {P} exceeds table limit {s.limit}")
        G = s.Ginv(P)
        fact = math.factorial(4 * m + 1)
        sub = math.factorial(4 * m)
        divided = tuple(
            (p, s.Ginv(P // p), s.Ginv(P // p) / sub, s.Ginv(P // p) > 0) for p in ps
        )
        rows.append(PrimorialRow(m, P, G, fact, G / fact, G < 0, divided))
    return rows
