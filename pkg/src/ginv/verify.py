"""Exact identity suite over the production tables.

Every check compares two independently computed quantities and, on failure,
reports the first ``n`` (or ``x``) where they disagree.  ``inject_fault``
produces a copy of the tables with one ``g^{-1}`` entry negated so the
harness itself can be tested.
"""

from __future__ import annotations

import dataclasses
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dirichlet as dr
from .coreseq import CoreTables, c_k_tables, exponent_signature, extremal_bounds_check
from .distribution import k_profile
from .sieve import factorize, liouville_from_mertens, make_table
from .summatory import (
    SummatorySet,
    abel_identity_check,
    absginv_from_Q,
    build_summatory,
    ginv_from_mertens,
    mertens_via_key_identity,
    mertens_via_prime_sum,
    mertens_via_prop51,
    primorial_report,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    checked: int
    first_failure: int | None = None
    detail: str = ""
    seconds: float = 0.0
    gating: bool = True


def _first_mismatch(a: np.ndarray, b: np.ndarray, offset: int = 1) -> int | None:
    bad = np.flatnonzero(np.asarray(a != b))
    return int(bad[0]) + offset if bad.size else None


def _array_check(name: str, a: np.ndarray, b: np.ndarray) -> CheckResult:
    """Compare two tables over slots ``1..N``."""
    first = _first_mismatch(a[1:], b[1:])
    detail = "" if first is None else f"n={first}: {a[first]} != {b[first]}"
    return CheckResult(name, first is None, len(a) - 1, first, detail)


def _per_x_check(name: str, n_max: int, lhs: Callable[[int], int],
                 rhs: Callable[[int], int]) -> CheckResult:
    for x in range(1, n_max + 1):
        left, right = lhs(x), rhs(x)
        if left != right:
            return CheckResult(name, False, x, x, f"x={x}: {left} != {right}")
    return CheckResult(name, True, n_max)


def inject_fault(s: SummatorySet, n: int) -> SummatorySet:
    """Copy of ``s`` with ``g^{-1}(n)`` negated and all partial sums rebuilt."""
    core = s.core
    g = core.g_inv.values.copy()
    g[n] = -g[n]
    bad_core = dataclasses.replace(core, g_inv=make_table("g_inv", g))
    return build_summatory(bad_core)


def _independent_inverse(core: CoreTables) -> np.ndarray:
    """``(omega + 1)^{-1}`` by the generic push inverse, not the squarefree formula."""
    w1 = core.basic.omega.values + 1
    w1[0] = 0
    return dr.inverse_int(w1)


def identity_checks(s: SummatorySet, per_x_limit: int = 10**4,
                    lm_limit: int = 10**5, class_limit: int = 10**5,
                    ck_limit: int = 10**4, engine_pairs: int = 20,
                    seed: int = 20240101) -> list[CheckResult]:
    """Run every exact identity; ranges are clipped to the table limit."""
    core, b = s.core, s.basic
    N = s.limit
    px = min(N, per_x_limit)
    out: list[CheckResult] = []

    def timed(fn: Callable[[], CheckResult]) -> None:
        t0 = time.perf_counter()
        r = fn()
        out.append(dataclasses.replace(r, seconds=time.perf_counter() - t0))

    M = b.M
    timed(lambda: _per_x_check("mertens_key_identity", px, lambda x: mertens_via_key_identity(s, x), M))
    timed(lambda: _per_x_check("mertens_prop51", px, lambda x: mertens_via_prop51(s, x), M))
    timed(lambda: _per_x_check("mertens_prime_sum", px, lambda x: mertens_via_prime_sum(s, x), M))
    timed(lambda: _per_x_check("liouville_from_mertens", min(N, lm_limit),
                               lambda x: liouville_from_mertens(b, x), b.L))

    g = core.g_inv.values
    timed(lambda: _array_check("g_inverse_independent", g, _independent_inverse(core)))
    timed(lambda: _array_check("sign_law", np.sign(g), b.liouville.values))

    def signature_classes() -> CheckResult:
        lim = min(N, class_limit)
        seen: dict[tuple[int, ...], tuple[int, int]] = {}
        for n in range(1, lim + 1):
            sig = exponent_signature(factorize(b.sieve, n))
            v = int(g[n])
            if sig in seen and seen[sig][1] != v:
                m = seen[sig][0]
                return CheckResult("signature_invariance", False, n, n,
                                   f"g^-1({n})={v} but g^-1({m})={seen[sig][1]}, signature {sig}")
            seen.setdefault(sig, (n, v))
        return CheckResult("signature_invariance", True, lim, detail=f"{len(seen)} classes")
    timed(signature_classes)

    mu, lam, musq = b.mu.values, b.liouville.values, b.mu_sq.values
    c = core.c_omega.values
    lc = lam * c
    ones = np.ones(N + 1, dtype=np.int64)
    timed(lambda: _array_check("abs_ginv_is_musq_conv_c", np.abs(g), dr.convolve_int(musq, c)))
    timed(lambda: _array_check("ginv_is_mu_conv_lambda_c", g, dr.convolve_int(mu, lc)))
    timed(lambda: _array_check("ginv_conv_one_is_lambda_c", dr.convolve_int(g, ones), lc))
    timed(lambda: _per_x_check("abs_Ginv_from_Q", px, lambda x: absginv_from_Q(s, x), s.absGinv))
    timed(lambda: _per_x_check("Ginv_from_M", px, lambda x: ginv_from_mertens(s, x), s.Ginv))
    timed(lambda: _per_x_check("abel_identity", px, lambda x: int(abel_identity_check(s, x)),
                               lambda x: 1))

    def ck_diagonal() -> CheckResult:
        lim = min(N, ck_limit)
        sub = make_table("omega", b.omega.values[: lim + 1])
        sieve = dataclasses.replace(b.sieve, limit=lim, spf=b.sieve.spf[: lim + 1])
        big = b.big_omega.values[: lim + 1]
        tables = c_k_tables(sieve, int(big.max(initial=0)), sub)
        diag = np.array([0] + [int(tables[big[n]].values[n]) for n in range(1, lim + 1)])
        return _array_check("c_k_diagonal", diag, c[: lim + 1])
    timed(ck_diagonal)

    def restricted_sums() -> CheckResult:
        # C_hat_{1,*}(x) is minus the number of primes up to x, for every x
        w, bg = b.omega.values, b.big_omega.values
        signed = np.where(w % 2 == 0, c, -c) * (bg == 1)
        first = _first_mismatch(np.cumsum(signed)[1:], -b.pi.sums[1:])
        if first is not None:
            return CheckResult("c_hat_star_1_is_minus_pi", False, N, first, f"x={first}")
        prof = k_profile(core, N)
        total = sum(v[0] for v in prof.by_omega.values())
        ok = total == N - 1
        return CheckResult("c_hat_star_1_is_minus_pi", ok, N, None if ok else N,
                           "" if ok else f"sum pi_hat_k = {total} != {N - 1}")
    timed(restricted_sums)

    def extremal() -> CheckResult:
        ok = extremal_bounds_check(core, int(b.big_omega.values.max(initial=1)))
        return CheckResult("extremal_bounds", ok, N)
    timed(extremal)

    def engine() -> CheckResult:
        rng = random.Random(seed)
        lim = 60
        for trial in range(engine_pairs):
            r = dr.RationalFunTable.from_values(
                [rng.choice((1, -1, 2, -2))] + [rng.randint(-3, 3) for _ in range(lim - 1)])
            h = dr.RationalFunTable.from_values(rng.randint(-3, 3) for _ in range(lim))
            rh = dr.convolve(r, h)
            PI = rh.prefix_sums()
            rinv = dr.dirichlet_inverse(r)
            H = h.prefix_sums()
            for x in range(1, lim + 1):
                forms = dr.conv_partial_sum(r, h, x)
                inv = dr.invert_summatory(r, lambda y: PI[y], x, rinv)
                if not (forms.double_sum == forms.divisor_form == forms.by_parts_form == PI[x]
                        and inv.difference_form == inv.divisor_form == H[x]):
                    return CheckResult("inversion_engine", False, trial, x,
                                       f"trial {trial}, x={x}")
        return CheckResult("inversion_engine", True, engine_pairs)
    timed(engine)

    return out


def primorial_check(s: SummatorySet) -> CheckResult:
    """Sign pattern at ``11# = 2310`` (reported, not part of the exit status)."""
    if s.limit < 2310:
        return CheckResult("primorial_signs", True, 0, detail="skipped: nmax < 2310", gating=False)
    row = primorial_report(s, 1)[0]
    ok = row.sign_ok and all(d[3] for d in row.divided)
    vals = ", ".join(f"G({row.primorial}/{p})={v}" for p, v, _, _ in row.divided)
    return CheckResult("primorial_signs", ok, 1, None if ok else row.primorial,
                       f"G({row.primorial})={row.ginv}; {vals}", gating=False)


def run_suite(s: SummatorySet, quick: bool = False) -> list[CheckResult]:
    if quick:
        res = identity_checks(s, per_x_limit=500, lm_limit=500, class_limit=500,
                              ck_limit=500, engine_pairs=2)
    else:
        res = identity_checks(s)
    res.append(primorial_check(s))
    return res


def suite_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results if r.gating)


def elapsed_summary(results: list[CheckResult]) -> str:
    total = math.fsum(r.seconds for r in results)
    bad = [r.name for r in results if r.gating and not r.passed]
    return f"{len(results)} checks, {len(bad)} failed, {total:.2f}s" + (
        f" ({', '.join(bad)})" if bad else "")
