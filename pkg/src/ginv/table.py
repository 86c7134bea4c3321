"""The 13-column table of g^{-1}(n), its partial sums and related quantities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirichlet import convolve_int
from .sieve import factorize
from .summatory import SummatorySet

COLUMNS = (
    "n", "primes", "sqfree", "ppower", "ginv", "lambda_ginv_minus_f1", "divsum_ratio",
    "dens_plus", "dens_minus", "Ginv", "Ginv_plus", "Ginv_minus", "abs_Ginv",
)


@dataclass(frozen=True)
class TableRow:
    n: int
    primes: str
    sqfree: bool
    ppower: bool
    ginv: int
    lambda_ginv_minus_f1: int
    divisor_sum: int
    dens_plus_count: int
    Ginv: int
    Ginv_plus: int
    Ginv_minus: int
    abs_Ginv: int

    @property
    def divsum_ratio(self) -> float:
        return self.divisor_sum / abs(self.ginv)

    @property
    def dens_plus(self) -> float:
        return self.dens_plus_count / self.n

    @property
    def dens_minus(self) -> float:
        return (self.n - self.dens_plus_count) / self.n

    def formatted(self) -> list[str]:
        """Cells as printed: flags ``Y``/``N``, ratio to 7 decimals, densities to 6."""
        return [
            str(self.n), self.primes, "Y" if self.sqfree else "N", "Y" if self.ppower else "N",
            str(self.ginv), str(self.lambda_ginv_minus_f1), f"{self.divsum_ratio:.7f}",
            _density(self.dens_plus_count, self.n), _density(self.n - self.dens_plus_count, self.n),
            str(self.Ginv), str(self.Ginv_plus), str(self.Ginv_minus), str(self.abs_Ginv),
        ]


def _density(count: int, n: int) -> str:
    # an exact zero is printed bare, as in the published table
    return "0" if count == 0 else f"{count / n:.6f}"


def build_table(s: SummatorySet, nmax: int = 500) -> list[TableRow]:
    """Rows ``1..nmax`` of the table."""
    core = s.core
    b = core.basic
    ones = np.ones(s.limit + 1, dtype=np.int64)
    divsum = convolve_int(ones, core.c_omega.values)
    rows = []
    for n in range(1, nmax + 1):
        fact = factorize(b.sieve, n)
        g = core.g_inv[n]
        rows.append(TableRow(
            n=n,
            primes=str(fact),
            sqfree=bool(b.mu_sq[n]),
            ppower=fact.omega == 1,
            ginv=g,
            lambda_ginv_minus_f1=b.liouville[n] * g - core.f_hat1[n],
            divisor_sum=int(divsum[n]),
            dens_plus_count=(n + b.L(n)) // 2,
            Ginv=s.Ginv(n),
            Ginv_plus=s.GinvPlus(n),
            Ginv_minus=s.GinvMinus(n),
            abs_Ginv=s.absGinv(n),
        ))
    return rows


def table_records(rows: list[TableRow]) -> list[dict[str, str]]:
    return [dict(zip(COLUMNS, r.formatted())) for r in rows]
