"""Exact Dirichlet convolution, inversion and the summatory inversion formulas.

Two layers live here:

* a generic engine over :class:`fractions.Fraction` (``RationalFunTable``)
  used for identity checking on small limits, where ``f(1)`` may be any
  nonzero rational;
* numpy integer kernels (``convolve_int``, ``inverse_int``) used to build the
  large production tables.  They fall back to Python integers whenever an
  ``int64`` overflow cannot be excluded up front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import LimitMismatchError, RangeError, ZeroLeadingValueError

Number = int | Fraction

_INT64_GUARD = 2**62


@dataclass(frozen=True)
class RationalFunTable:
    """Arithmetic function on ``[1, limit]`` with exact rational values.

    ``values[0]`` is a placeholder so ``values[n]`` is ``f(n)``.
    """

    values: tuple[Fraction, ...]

    @classmethod
    def from_values(cls, vals: Iterable[Number]) -> RationalFunTable:
        """Build from ``f(1), f(2), ...``."""
        return cls((Fraction(0),) + tuple(Fraction(v) for v in vals))

    @classmethod
    def from_function(cls, f: Callable[[int], Number], limit: int) -> RationalFunTable:
        return cls.from_values(f(n) for n in range(1, limit + 1))

    @property
    def limit(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= self.limit:
            raise RangeError(f"n={n} outside [1, {self.limit}]")
        return self.values[n]

    def prefix(self, x: int) -> Fraction:
        """Summatory function ``sum_{n <= x} f(n)``; zero for ``x = 0``."""
        if not 0 <= x <= self.limit:
            raise RangeError(f"x={x} outside [0, {self.limit}]")
        return sum(self.values[1 : x + 1], Fraction(0))

    def prefix_sums(self) -> list[Fraction]:
        out = [Fraction(0)]
        acc = Fraction(0)
        for v in self.values[1:]:
            acc += v
            out.append(acc)
        return out

    def as_list(self) -> list[Fraction]:
        return list(self.values[1:])


def epsilon(limit: int) -> RationalFunTable:
    """The convolution identity ``eps(n) = [n == 1]``."""
    return RationalFunTable.from_values(1 if n == 1 else 0 for n in range(1, limit + 1))


def _check_limits(*tables: RationalFunTable) -> int:
    limits = {t.limit for t in tables}
    if len(limits) != 1:
        raise LimitMismatchError(f"table limits differ: {sorted(limits)}")
    return limits.pop()


def convolve(f: RationalFunTable, g: RationalFunTable) -> RationalFunTable:
    """Dirichlet convolution ``(f * g)(n) = sum_{d | n} f(d) g(n/d)``."""
    N = _check_limits(f, g)
    out = [Fraction(0)] * (N + 1)
    fv, gv = f.values, g.values
    for d in range(1, N + 1):
        a = fv[d]
        if not a:
            continue
        for e in range(1, N // d + 1):
            if gv[e]:
                out[d * e] += a * gv[e]
    return RationalFunTable(tuple(out))


def dirichlet_inverse(f: RationalFunTable) -> RationalFunTable:
    """The unique ``f^{-1}`` with ``f * f^{-1} = eps`` on ``[1, N]``.

    Uses ``f^{-1}(n) = -(1/f(1)) sum_{d | n, d > 1} f(d) f^{-1}(n/d)``,
    accumulated forward so each ``n`` costs its number of multiples.
    """
    N = f.limit
    f1 = f.values[1]
    if f1 == 0:
        raise ZeroLeadingValueError("f(1) = 0 has no Dirichlet inverse")
    fv = f.values
    if f1 in (1, -1) and all(v.denominator == 1 for v in fv):
        inv = _inverse_unit_int([int(v) for v in fv], int(f1))
        return RationalFunTable(tuple(Fraction(v) for v in inv))
    acc = [Fraction(0)] * (N + 1)
    inv = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        inv[n] = ((1 if n == 1 else 0) - acc[n]) / f1
        if inv[n]:
            for d in range(2, N // n + 1):
                if fv[d]:
                    acc[n * d] += fv[d] * inv[n]
    return RationalFunTable(tuple(inv))


def _inverse_unit_int(fv: list[int], f1: int) -> list[int]:
    N = len(fv) - 1
    acc = [0] * (N + 1)
    inv = [0] * (N + 1)
    for n in range(1, N + 1):
        v = ((1 if n == 1 else 0) - acc[n]) * f1
        inv[n] = v
        if v:
            for d in range(2, N // n + 1):
                if fv[d]:
                    acc[n * d] += fv[d] * v
    return inv


def _scaled(t: RationalFunTable) -> tuple[list[int], int]:
    """Integer numerators over a common denominator: ``values[n] == ints[n] / scale``."""
    scale = math.lcm(*(v.denominator for v in t.values))
    return [v.numerator * (scale // v.denominator) for v in t.values], scale


def _prefix(ints: list[int]) -> list[int]:
    out = [0] * len(ints)
    acc = 0
    for n in range(1, len(ints)):
        acc += ints[n]
        out[n] = acc
    return out


def _divisor_sum(rs: list[int], H: list[int], x: int) -> int:
    return sum(rs[d] * H[x // d] for d in range(1, x + 1))


def _by_parts_sum(H: list[int], R: list[int], x: int) -> int:
    return sum(H[k] * (R[x // k] - R[x // (k + 1)]) for k in range(1, x + 1))


class PartialSumForms(NamedTuple):
    """Three evaluations of ``sum_{n <= x} (r * h)(n)``."""

    double_sum: Fraction
    divisor_form: Fraction
    by_parts_form: Fraction


def conv_partial_sum(r: RationalFunTable, h: RationalFunTable, x: int) -> PartialSumForms:
    """Partial sum of ``r * h`` up to ``x``, by direct double sum and both closed forms.

    ``divisor_form`` is ``sum_{d <= x} r(d) H(x // d)`` and ``by_parts_form``
    is ``sum_{k <= x} H(k) (R(x // k) - R(x // (k + 1)))``.  Arithmetic runs on
    integers over a common denominator, so results are exact.
    """
    N = _check_limits(r, h)
    if not 1 <= x <= N:
        raise RangeError(f"x={x} outside [1, {N}]")
    rs, a = _scaled(r)
    hs, b = _scaled(h)
    R, H = _prefix(rs), _prefix(hs)
    direct = sum(rs[d] * hs[n // d] for n in range(1, x + 1) for d in _divisors(n))
    den = a * b
    return PartialSumForms(Fraction(direct, den), Fraction(_divisor_sum(rs, H, x), den),
                           Fraction(_by_parts_sum(H, R, x), den))


def conv_partial_sum_all(r: RationalFunTable, h: RationalFunTable,
                         xmax: int | None = None) -> list[PartialSumForms]:
    """``conv_partial_sum`` for every ``1 <= x <= xmax``; entry ``x - 1`` belongs to ``x``.

    The double sum is accumulated once as a running total of ``(r * h)(n)``.
    """
    N = _check_limits(r, h)
    xmax = N if xmax is None else xmax
    if not 1 <= xmax <= N:
        raise RangeError(f"xmax={xmax} outside [1, {N}]")
    rs, a = _scaled(r)
    hs, b = _scaled(h)
    R, H = _prefix(rs), _prefix(hs)
    conv = [0] * (xmax + 1)
    for d in range(1, xmax + 1):
        if rs[d]:
            for e in range(1, xmax // d + 1):
                conv[d * e] += rs[d] * hs[e]
    direct = _prefix(conv)
    den = a * b
    return [PartialSumForms(Fraction(direct[x], den), Fraction(_divisor_sum(rs, H, x), den),
                            Fraction(_by_parts_sum(H, R, x), den)) for x in range(1, xmax + 1)]


class InversionForms(NamedTuple):
    """Two reconstructions of ``H(x)`` from the partial sums of ``r * h``."""

    difference_form: Fraction
    divisor_form: Fraction


def _inversion_ints(rinv: RationalFunTable, pis: list[Fraction], x: int,
                    ) -> tuple[int, int, int]:
    ris, a = _scaled(rinv)
    scale_p = math.lcm(*(p.denominator for p in pis))
    ps = [p.numerator * (scale_p // p.denominator) for p in pis]
    Rinv = _prefix(ris)
    diff = sum(ps[j] * (Rinv[x // j] - Rinv[x // (j + 1)]) for j in range(1, x + 1))
    div = sum(ris[k] * ps[x // k] for k in range(1, x + 1))
    return diff, div, a * scale_p


def invert_summatory(
    r: RationalFunTable, pi_rh: Callable[[int], Number], x: int,
    r_inverse: RationalFunTable | None = None,
) -> InversionForms:
    """Recover ``H(x) = sum_{n <= x} h(n)`` from ``pi_rh(y) = sum_{n <= y} (r * h)(n)``.

    ``difference_form`` is ``sum_j pi_rh(j) (Rinv(x // j) - Rinv(x // (j + 1)))``
    and ``divisor_form`` is ``sum_k rinv(k) pi_rh(x // k)``, with ``Rinv`` the
    summatory function of the Dirichlet inverse of ``r``.  Pass ``r_inverse``
    to reuse an already computed inverse.
    """
    N = r.limit
    if not 1 <= x <= N:
        raise RangeError(f"x={x} outside [1, {N}]")
    rinv = r_inverse if r_inverse is not None else dirichlet_inverse(r)
    pis = [Fraction(0)] + [Fraction(pi_rh(y)) for y in range(1, x + 1)]
    diff, div, den = _inversion_ints(rinv, pis, x)
    return InversionForms(Fraction(diff, den), Fraction(div, den))


def invert_summatory_all(
    r: RationalFunTable, pi_values: Sequence[Number], xmax: int | None = None,
    r_inverse: RationalFunTable | None = None,
) -> list[InversionForms]:
    """``invert_summatory`` for every ``1 <= x <= xmax`` given ``pi_values[y]`` for ``y <= xmax``."""
    N = r.limit
    xmax = N if xmax is None else xmax
    if not 1 <= xmax <= N or len(pi_values) <= xmax:
        raise RangeError(f"xmax={xmax} outside [1, {min(N, len(pi_values) - 1)}]")
    rinv = r_inverse if r_inverse is not None else dirichlet_inverse(r)
    ris, a = _scaled(rinv)
    pis = [Fraction(v) for v in pi_values[: xmax + 1]]
    scale_p = math.lcm(*(p.denominator for p in pis))
    ps = [p.numerator * (scale_p // p.denominator) for p in pis]
    Rinv = _prefix(ris)
    den = a * scale_p
    out = []
    for x in range(1, xmax + 1):
        diff = sum(ps[j] * (Rinv[x // j] - Rinv[x // (j + 1)]) for j in range(1, x + 1))
        div = sum(ris[k] * ps[x // k] for k in range(1, x + 1))
        out.append(InversionForms(Fraction(diff, den), Fraction(div, den)))
    return out


def triple_sum_identity_check(
    h: RationalFunTable, q: RationalFunTable, r: RationalFunTable, x: int
) -> bool:
    """Check ``sum_{n<=x} h(n)(q*r)(n) == sum_{n<=x} q(n) sum_{k<=x/n} r(k) h(kn)``."""
    N = _check_limits(h, q, r)
    if not 1 <= x <= N:
        raise RangeError(f"x={x} outside [1, {N}]")
    hs, _ = _scaled(h)
    qs, _ = _scaled(q)
    rs, _ = _scaled(r)
    # both sides carry the same denominator, so comparing numerators suffices
    left = sum(hs[n] * sum(qs[d] * rs[n // d] for d in _divisors(n)) for n in range(1, x + 1))
    right = sum(qs[n] * sum(rs[k] * hs[k * n] for k in range(1, x // n + 1))
                for n in range(1, x + 1))
    return left == right


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


# ---------------------------------------------------------------------------
# numpy integer kernels
# ---------------------------------------------------------------------------

def _max_abs(a: np.ndarray) -> int:
    if a.dtype == object:
        return max((abs(int(v)) for v in a), default=0)
    return int(np.abs(a).max(initial=0))


def convolve_int(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Dirichlet convolution of two dense integer arrays (slot 0 ignored).

    Pairs ``(d, e)`` with ``d * e <= N`` are split at ``S = isqrt(N)``: all
    pairs with ``d <= S`` are added one ``d`` at a time along the stride
    ``d``, the rest (``e < S``) one ``e`` at a time over the vector of
    ``d > S``.  That is ``~2 S`` vector operations in total.
    """
    if len(f) != len(g):
        raise LimitMismatchError(f"table limits differ: {len(f) - 1} vs {len(g) - 1}")
    N = len(f) - 1
    S = math.isqrt(N)
    # |out(n)| <= max|f| max|g| tau(n) and tau(n) <= 2 sqrt(n).
    exact = _max_abs(f) * _max_abs(g) * 2 * (S + 1) >= _INT64_GUARD
    dtype = object if exact or f.dtype == object or g.dtype == object else np.int64
    f = f.astype(dtype)
    g = g.astype(dtype)
    out = np.zeros(N + 1, dtype=dtype)
    for d in range(1, S + 1):
        a = f[d]
        if a:
            m = N // d
            out[d : d * m + 1 : d] += a * g[1 : m + 1]
    for e in range(1, N // (S + 1) + 1):
        b = g[e]
        if b:
            ds = np.arange(S + 1, N // e + 1, dtype=np.int64)
            out[ds * e] += f[S + 1 : N // e + 1] * b
    out[0] = 0
    return out


def inverse_int(f: np.ndarray) -> np.ndarray:
    """Dirichlet inverse of a dense integer array with ``f[1] == +-1``."""
    N = len(f) - 1
    f1 = int(f[1])
    if f1 == 0:
        raise ZeroLeadingValueError("f(1) = 0 has no Dirichlet inverse")
    if f1 not in (1, -1):
        raise ValueError("integer inverse requires f(1) = +-1; use dirichlet_inverse")
    dtype = object if f.dtype == object else np.int64
    f = f.astype(dtype)
    acc = np.zeros(N + 1, dtype=dtype)
    inv = np.zeros(N + 1, dtype=dtype)
    half = N // 2
    for n in range(1, half + 1):
        v = ((1 if n == 1 else 0) - acc[n]) * f1
        inv[n] = v
        if v:
            m = N // n
            acc[2 * n : n * m + 1 : n] += f[2 : m + 1] * v
            if dtype != object and np.abs(acc[2 * n : n * m + 1 : n]).max(initial=0) >= _INT64_GUARD:
                return inverse_int(f.astype(object))
    lo = max(half + 1, 2)
    inv[lo:] = -acc[lo:] * f1
    if N >= 1 and half < 1:
        inv[1] = f1
    inv[0] = 0
    return inv


def as_rational(values: Sequence[int] | np.ndarray) -> RationalFunTable:
    """Wrap a dense integer array (slot 0 ignored) as a rational table."""
    return RationalFunTable((Fraction(0),) + tuple(Fraction(int(v)) for v in values[1:]))
