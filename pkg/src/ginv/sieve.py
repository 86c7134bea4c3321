"""Smallest-prime-factor sieve and dense tables of elementary arithmetic functions.

Every table is a numpy ``int64`` array of length ``N + 1`` indexed directly by
``n``; slot 0 is unused and holds 0.  Tables are frozen (non-writeable) once
built so they can be shared freely between readers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import CapacityError, RangeError

# 10**8 needs roughly 3.5 GB across spf + all int64 tables; the documented budget.
DEFAULT_CAPACITY = 10**8

_INT64_GUARD = 2**62


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FactorSieve:
    """Smallest prime factor of every integer in ``[1, limit]``.

    Attributes:
        limit: Largest integer covered.
        spf: ``spf[n]`` is the smallest prime dividing ``n``; ``spf[1] == 1``.
        primes: All primes ``<= limit`` in increasing order.
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray

    def __contains__(self, n: int) -> bool:
        return 1 <= n <= self.limit


class Factorization(NamedTuple):
    """Prime factorization ``n = prod p**a`` as ascending ``(p, a)`` pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return math.prod(p**a for p, a in self.pairs)

    @property
    def omega(self) -> int:
        return len(self.pairs)

    @property
    def big_omega(self) -> int:
        return sum(a for _, a in self.pairs)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:  # type: ignore[override]
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        if not self.pairs:
            return "1^1"
        return " ".join(f"{p}^{a}" for p, a in self.pairs)


def build_factor_sieve(limit: int, capacity: int = DEFAULT_CAPACITY) -> FactorSieve:
    """Build the smallest-prime-factor array for ``1 <= n <= limit``.

    Raises:
        CapacityError: if ``limit`` is below 1 or above ``capacity``.
    """
    limit = int(limit)
    if limit < 1:
        raise CapacityError(f"sieve limit must be >= 1, got {limit}")
    if limit > capacity:
        raise CapacityError(f"sieve limit {limit} exceeds capacity {capacity}")
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    spf[1] = 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p]:
            continue
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    primes = np.flatnonzero(spf[: limit + 1] == np.arange(limit + 1, dtype=dtype))
    primes = primes[primes >= 2].astype(np.int64)
    return FactorSieve(limit, _freeze(spf), _freeze(primes))


def factorize(s: FactorSieve, n: int) -> Factorization:
    """Factor ``n`` by repeated division by its smallest prime factor."""
    n = int(n)
    if not 1 <= n <= s.limit:
        raise RangeError(f"n={n} outside [1, {s.limit}]")
    pairs: list[tuple[int, int]] = []
    spf = s.spf
    while n > 1:
        p = int(spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        pairs.append((p, a))
    return Factorization(tuple(pairs))


@dataclass(frozen=True)
class FunTable:
    """Dense table ``f(1..limit)`` of exact integers.

    ``values`` has length ``limit + 1`` with ``values[0] == 0`` so that
    ``values[n]`` is ``f(n)``.
    """

    name: str
    values: np.ndarray

    @property
    def limit(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise RangeError(f"{self.name}: n={n} outside [1, {self.limit}]")
        return int(self.values[n])

    def __len__(self) -> int:
        return self.limit

    def head(self, count: int) -> list[int]:
        return [int(v) for v in self.values[1 : count + 1]]


@dataclass(frozen=True)
class PrefixTable:
    """Exact prefix sums ``F(x) = sum_{n <= x} f(n)`` for ``0 <= x <= limit``."""

    name: str
    sums: np.ndarray

    @property
    def limit(self) -> int:
        return len(self.sums) - 1

    def __call__(self, x: int) -> int:
        if not 0 <= x <= self.limit:
            raise RangeError(f"{self.name}: x={x} outside [0, {self.limit}]")
        return int(self.sums[x])

    @classmethod
    def of(cls, f: FunTable, name: str | None = None) -> PrefixTable:
        return cls(name or f.name.upper(), _freeze(checked_cumsum(f.values)))


def checked_cumsum(values: np.ndarray) -> np.ndarray:
    """Cumulative sum with slot 0 forced to zero; falls back to Python ints on overflow risk."""
    if values.dtype != object:
        bound = int(np.abs(values).max(initial=0)) * len(values)
        if bound < _INT64_GUARD:
            out = np.cumsum(values, dtype=np.int64)
            out -= out[0]
            return out
    out = np.cumsum(values.astype(object))
    return out - out[0]


def make_table(name: str, values: np.ndarray) -> FunTable:
    values = np.asarray(values)
    if values.dtype != object:
        values = values.astype(np.int64)
    else:
        values = values.copy()
    values[0] = 0
    return FunTable(name, _freeze(values))


class Peeled(NamedTuple):
    """Per-n data collected while stripping prime factors in increasing order."""

    omega: np.ndarray
    big_omega: np.ndarray
    squarefree: np.ndarray
    multinomial: np.ndarray


def peel_factorizations(s: FactorSieve) -> Peeled:
    """Strip prime factors from every ``n <= N`` at once, smallest prime first.

    After ``j`` steps the stripped part of ``n`` has exponent multiset with
    multinomial ``j! / prod(a!)``; each step multiplies it by ``j / run`` where
    ``run`` is the current exponent of the prime being removed.  That gives
    ``Omega(n)! / prod a!`` without forming any factorial.
    """
    N = s.limit
    omega = np.zeros(N + 1, dtype=np.int64)
    big_omega = np.zeros(N + 1, dtype=np.int64)
    squarefree = np.ones(N + 1, dtype=bool)
    squarefree[0] = False
    multinomial = np.ones(N + 1, dtype=np.int64)
    multinomial[0] = 0

    idx = np.arange(2, N + 1, dtype=np.int64)
    rem = idx.copy()
    prev = np.zeros_like(idx)
    run = np.zeros_like(idx)
    mult = np.ones_like(idx)
    steps = np.zeros_like(idx)
    while idx.size:
        p = s.spf[rem].astype(np.int64)
        same = p == prev
        run = np.where(same, run + 1, 1)
        steps += 1
        mult = mult * steps // run
        omega[idx] += ~same
        big_omega[idx] += 1
        squarefree[idx[same]] = False
        rem //= p
        prev = p
        done = rem == 1
        if done.any():
            multinomial[idx[done]] = mult[done]
            keep = ~done
            idx, rem, prev, run, mult, steps = (
                idx[keep], rem[keep], prev[keep], run[keep], mult[keep], steps[keep])
    return Peeled(omega, big_omega, squarefree, multinomial)


@dataclass(frozen=True)
class BasicTables:
    """Elementary function tables and their prefix sums over ``[1, N]``."""

    sieve: FactorSieve
    mu: FunTable
    liouville: FunTable
    omega: FunTable
    big_omega: FunTable
    mu_sq: FunTable
    chi_prime: FunTable
    M: PrefixTable
    L: PrefixTable
    Q: PrefixTable
    pi: PrefixTable

    @property
    def limit(self) -> int:
        return self.sieve.limit


def basic_tables(s: FactorSieve, peeled: Peeled | None = None) -> BasicTables:
    """Tables of mu, lambda, omega, Omega, mu^2, the prime indicator, and M, L, Q, pi."""
    pk = peeled if peeled is not None else peel_factorizations(s)
    N = s.limit
    liouville = np.where(pk.big_omega % 2 == 0, 1, -1).astype(np.int64)
    mu_sq = pk.squarefree.astype(np.int64)
    mu = np.where(pk.omega % 2 == 0, 1, -1) * mu_sq
    chi = np.zeros(N + 1, dtype=np.int64)
    chi[s.primes] = 1

    mu_t = make_table("mu", mu)
    lam_t = make_table("lambda", liouville)
    q_t = make_table("mu_sq", mu_sq)
    chi_t = make_table("chi_prime", chi)
    return BasicTables(
        sieve=s,
        mu=mu_t,
        liouville=lam_t,
        omega=make_table("omega", pk.omega),
        big_omega=make_table("big_omega", pk.big_omega),
        mu_sq=q_t,
        chi_prime=chi_t,
        M=PrefixTable.of(mu_t, "M"),
        L=PrefixTable.of(lam_t, "L"),
        Q=PrefixTable.of(q_t, "Q"),
        pi=PrefixTable.of(chi_t, "pi"),
    )


def liouville_from_mertens(t: BasicTables, x: int) -> int:
    """``L(x)`` via the square-divisor sum of Mertens values."""
    if not 1 <= x <= t.limit:
        raise RangeError(f"x={x} outside [1, {t.limit}]")
    d = np.arange(1, math.isqrt(x) + 1, dtype=np.int64)
    return int(t.M.sums[x // (d * d)].sum())
