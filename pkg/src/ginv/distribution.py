"""Restricted counts and sums by number of prime factors, average orders,
implied-constant estimates, and empirical Erdos-Kac style experiments.

Everything that is an exact count is computed in integers.  The asymptotic
statements only hold as ``loglog x -> inf`` and ``loglog 10**6`` is about
2.6, so those comparisons are emitted as reports rather than assertions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import special

from . import analytic
from .analytic import AsymReport, Precision, DEFAULT_PRECISION
from .coreseq import CoreTables
from .errors import DomainError, RangeError
from .summatory import SummatorySet


def loglog(x: float) -> float:
    return math.log(math.log(x))


def _check_x(core: CoreTables, x: int, low: int = 1) -> None:
    if x < low:
        raise DomainError(f"x must be >= {low}, got {x}")
    if x > core.limit:
        raise RangeError(f"x={x} exceeds table limit {core.limit}")


# ---------------------------------------------------------------------------
# per-k profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KProfile:
    """Counts and sums over ``2 <= n <= x`` grouped by ``Omega(n)`` and ``omega(n)``.

    Attributes:
        x: Upper limit.
        by_omega: ``k -> (pi_hat_k, C_hat_k, C_hat_star_k)`` keyed by ``Omega(n) = k``.
        by_little_omega: ``k -> pi_k`` keyed by ``omega(n) = k``.
    """

    x: int
    by_omega: dict[int, tuple[int, int, int]]
    by_little_omega: dict[int, int]

    def pi_hat(self, k: int) -> int:
        return self.by_omega.get(k, (0, 0, 0))[0]

    def c_hat(self, k: int) -> int:
        return self.by_omega.get(k, (0, 0, 0))[1]

    def c_hat_star(self, k: int) -> int:
        return self.by_omega.get(k, (0, 0, 0))[2]

    def pi_k(self, k: int) -> int:
        return self.by_little_omega.get(k, 0)


def _grouped_sum(keys: np.ndarray, weights: np.ndarray, size: int) -> np.ndarray:
    acc = np.zeros(size, dtype=np.int64)
    np.add.at(acc, keys, weights.astype(np.int64))
    return acc


def k_profile(core: CoreTables, x: int) -> KProfile:
    """Exact ``pi_hat_k(x)``, ``C_hat_k(x)``, ``C_hat_{k,*}(x)`` and ``pi_k(x)`` for all k."""
    _check_x(core, x)
    b = core.basic
    big = b.big_omega.values[2 : x + 1]
    small = b.omega.values[2 : x + 1]
    c = core.c_omega.values[2 : x + 1]
    signed = np.where(small % 2 == 0, c, -c)
    size = int(big.max(initial=0)) + 1
    counts = np.bincount(big, minlength=size)
    sums = _grouped_sum(big, c, size)
    ssums = _grouped_sum(big, signed, size)
    by_omega = {k: (int(counts[k]), int(sums[k]), int(ssums[k]))
                for k in range(1, size) if counts[k]}
    wcounts = np.bincount(small, minlength=1)
    by_little = {k: int(wcounts[k]) for k in range(1, len(wcounts)) if wcounts[k]}
    return KProfile(x, by_omega, by_little)


# ---------------------------------------------------------------------------
# threshold counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdCounts:
    """Counts over ``1 <= n <= x`` split at ``r loglog x``; ties count on both sides."""

    x: int
    r: float
    threshold: float
    A: int
    B: int
    C: int
    D: int
    B_hat: int
    ties_big: int
    ties_small: int

    def accounting_ok(self) -> bool:
        """``A + B = x + #{Omega = thr}`` and ``C + D = x + #{omega = thr}``."""
        return (self.A + self.B == self.x + self.ties_big
                and self.C + self.D == self.x + self.ties_small)


def threshold_counts(core: CoreTables, x: int, r: float) -> ThresholdCounts:
    """``A, B`` (by Omega), ``C, D`` (by omega) and ``B_hat = sum_{Omega >= thr} C_Omega``."""
    if x < 3:
        raise DomainError(f"threshold counts need x >= 3, got {x}")
    if r <= 0:
        raise DomainError(f"r must be > 0, got {r}")
    _check_x(core, x)
    thr = r * loglog(x)
    big = core.basic.big_omega.values[1 : x + 1]
    small = core.basic.omega.values[1 : x + 1]
    hi_big = big >= thr
    return ThresholdCounts(
        x=x, r=r, threshold=thr,
        A=int(np.count_nonzero(big <= thr)),
        B=int(np.count_nonzero(hi_big)),
        C=int(np.count_nonzero(small <= thr)),
        D=int(np.count_nonzero(small >= thr)),
        B_hat=int(core.c_omega.values[1 : x + 1][hi_big].sum()),
        ties_big=int(np.count_nonzero(big == thr)),
        ties_small=int(np.count_nonzero(small == thr)),
    )


B_HAT_EXPONENT = 1.5 - 1.5 * math.log(1.5)


def b_hat_bound_report(core: CoreTables, x: int) -> AsymReport:
    """``B_hat(x, 3/2) / x`` against ``(log x)^{0.891802} sqrt(loglog x)`` (an upper bound)."""
    t = threshold_counts(core, x, 1.5)
    exact = t.B_hat / x
    bound = math.log(x) ** B_HAT_EXPONENT * math.sqrt(loglog(x))
    return AsymReport("b_hat_bound", {"x": x, "r": 1.5}, exact, bound, exact / bound,
                      notes="upper-bound shape only; no constant given")


# ---------------------------------------------------------------------------
# uniform asymptotics in k
# ---------------------------------------------------------------------------

KINDS = ("pi_hat", "pi", "C_hat", "C_hat_star")


def _regime_flags(x: int, k: int) -> dict[str, bool]:
    ll = loglog(x)
    return {"in_3_2_range": 1 <= k <= 1.5 * ll, "in_2_range": 1 <= k <= 2 * ll}


def predicted_main_term(kind: str, x: int, k: int, a0: float | None = None,
                        p: Precision = DEFAULT_PRECISION) -> float:
    """Main term for the count or sum named by ``kind`` at ``(x, k)``.

    ``C_hat`` needs the constant ``a0``.  Returns ``nan`` when the density
    function is evaluated outside its domain.
    """
    ll = loglog(x)
    z = (k - 1) / ll
    base = ll ** (k - 1) / math.factorial(k - 1)
    try:
        if kind == "pi_hat":
            return x / math.log(x) * analytic.g_cal(z, p) * base
        if kind == "pi":
            return x / math.log(x) * analytic.g_tilde(z, p) * base
        if kind == "C_hat_star":
            return -analytic.g_hat(z, p) * x / math.log(x) * base
        if kind == "C_hat":
            if a0 is None:
                raise ValueError("C_hat main term needs an A0 estimate")
            return a0 * math.sqrt(2 * math.pi) * x * analytic.g_hat(z, p) * base * math.sqrt(ll)
    except DomainError:
        return math.nan
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")


def uniform_asym_report(core: CoreTables, x: int, k: int, kind: str = "pi_hat",
                        a0: float | None = None, profile: KProfile | None = None,
                        p: Precision = DEFAULT_PRECISION) -> AsymReport:
    """Exact value against its uniform-in-k main term.

    ``k`` outside ``[1, 3/2 loglog x]`` is not an error; the returned report
    carries the regime flags so readers can tell.
    """
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    prof = profile if profile is not None and profile.x == x else k_profile(core, x)
    exact = {"pi_hat": prof.pi_hat, "pi": prof.pi_k, "C_hat": prof.c_hat,
             "C_hat_star": prof.c_hat_star}[kind](k)
    pred = predicted_main_term(kind, x, k, a0, p)
    ratio = exact / pred if pred and not math.isnan(pred) else math.nan
    flags = _regime_flags(x, k)
    notes = "" if flags["in_3_2_range"] else "k outside uniform range"
    return AsymReport(kind, {"x": x, "k": k}, float(exact), pred, ratio, extra=flags, notes=notes)


def c_hat_star_one_report(core: CoreTables, x: int) -> AsymReport:
    """``C_hat_{1,*}(x)`` against ``-pi(x)``; these agree exactly."""
    prof = k_profile(core, x)
    exact = prof.c_hat_star(1)
    pred = -core.basic.pi(x)
    ratio = exact / pred if pred else 1.0
    return AsymReport("C_hat_star_1_exact", {"x": x, "k": 1}, float(exact), float(pred), ratio,
                      tolerance=0.0)


def asym_ladder(core: CoreTables, xs: Sequence[int], a0: float | None = None,
                p: Precision = DEFAULT_PRECISION) -> list[AsymReport]:
    """Reports for every kind and ``1 <= k <= 2 loglog x`` at each ``x``."""
    out = []
    for x in xs:
        prof = k_profile(core, x)
        out.append(c_hat_star_one_report(core, x))
        kmax = max(1, int(2 * loglog(x)))
        for kind in KINDS:
            if kind == "C_hat" and a0 is None:
                continue
            for k in range(1, kmax + 1):
                out.append(uniform_asym_report(core, x, k, kind, a0, prof, p))
    return out


# ---------------------------------------------------------------------------
# average orders and constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AverageOrders:
    x: int
    avg_c: float
    avg_abs_g: float
    reports: tuple[AsymReport, ...]


def average_orders(s: SummatorySet, x: int, b0: float | None = None) -> AverageOrders:
    """Exact averages of ``C_Omega`` and ``|g^{-1}|`` over ``n <= x`` with main-term reports.

    Without ``b0`` the constant is estimated at ``x`` itself, so the first
    ratio is 1 by construction; pass an estimate from other samples to see drift.
    """
    if x < 100:
        raise DomainError(f"average orders need x >= 100, got {x}")
    _check_x(s.core, x)
    total_c = int(s.core.c_omega.values[1 : x + 1].sum())
    avg_c = total_c / x
    avg_g = s.absGinv(x) / x
    lx, ll = math.log(x), loglog(x)
    b0 = b0 if b0 is not None else avg_c / (lx * math.sqrt(ll))
    main_c = b0 * lx * math.sqrt(ll)
    main_g = 6 * b0 * lx**2 * math.sqrt(ll) / math.pi**2
    reports = (
        AsymReport("avg_c", {"x": x, "B0": b0}, avg_c, main_c, avg_c / main_c),
        AsymReport("avg_abs_g", {"x": x, "B0": b0}, avg_g, main_g, avg_g / main_g),
        AsymReport("avg_ratio", {"x": x}, avg_g / avg_c, 6 * lx / math.pi**2,
                   (avg_g / avg_c) / (6 * lx / math.pi**2)),
    )
    return AverageOrders(x, avg_c, avg_g, reports)


@dataclass(frozen=True)
class ConstantSample:
    x: int
    A0: float
    B0: float
    D0: float
    second_moment_literal: float
    second_moment_pairwise: float


@dataclass(frozen=True)
class ConstantEstimates:
    """Per-sample implied constants and their spread.

    ``dispersion`` is ``(max - min) / mean`` across samples for each constant.
    """

    samples: tuple[ConstantSample, ...]
    A0: float
    B0: float
    D0: float
    dispersion: dict[str, float] = field(default_factory=dict)


def _spread(vals: list[float]) -> tuple[float, float]:
    finite = [v for v in vals if math.isfinite(v)]
    if not finite:
        return math.nan, math.nan
    mean = sum(finite) / len(finite)
    return mean, (max(finite) - min(finite)) / mean if mean else math.nan


def constant_sample(s: SummatorySet, x: int) -> ConstantSample:
    """Implied ``A0``, ``B0``, ``D0`` at a single ``x``.

    * ``A0 = x / (|L_omega(x)| sqrt(2 pi loglog x))``;
    * ``B0 = (sum C_Omega / x) / (log x sqrt(loglog x))``;
    * ``D0`` from ``D0^2 x (log x)^2 loglog x``.  The second moment is formed
      both as written, ``(sum C^2 - (sum C)^2) / x`` (negative), and as the
      pairwise sum ``(2/x) sum_{j<k} C(j) C(k)``; ``D0`` uses the magnitude,
      which is the same for both.
    """
    if x < 16:
        raise DomainError(f"constant estimates need x >= 16, got {x}")
    _check_x(s.core, x)
    lx, ll = math.log(x), loglog(x)
    lw = s.Lomega(x)
    a0 = x / (abs(lw) * math.sqrt(2 * math.pi * ll)) if lw else math.inf
    c = s.core.c_omega.values[1 : x + 1]
    s1 = int(c.sum())
    s2 = int(np.dot(c.astype(object), c.astype(object)))
    b0 = s1 / x / (lx * math.sqrt(ll))
    literal = (s2 - s1 * s1) / x
    pairwise = (s1 * s1 - s2) / x
    d0 = math.sqrt(abs(pairwise) / (x * lx**2 * ll))
    return ConstantSample(x, a0, b0, d0, literal, pairwise)


def estimate_constants(s: SummatorySet, xs: Sequence[int]) -> ConstantEstimates:
    """Estimate ``A0``, ``B0``, ``D0`` at each sample limit and summarize their spread."""
    xs = list(xs)
    if xs != sorted(xs):
        raise DomainError("sample limits must be ascending")
    samples = tuple(constant_sample(s, x) for x in xs)
    out = {}
    disp = {}
    for name in ("A0", "B0", "D0"):
        mean, d = _spread([getattr(c, name) for c in samples])
        out[name] = getattr(samples[-1], name)
        disp[name] = d
        disp[f"{name}_mean"] = mean
    return ConstantEstimates(samples, out["A0"], out["B0"], out["D0"], disp)


# ---------------------------------------------------------------------------
# Erdos-Kac style experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistReport:
    """Empirical distribution of a statistic over ``n <= x`` against a normal reference.

    Attributes:
        name: Which statistic.
        x: Upper limit.
        sample_points: ``(y, empirical fraction <= y, reference value)`` triples.
        sup_distance: Largest gap between the empirical and reference CDFs over
            all jump points of the empirical CDF.
        mu: Centering parameter used.
        sigma: Scale parameter used.
    """

    name: str
    x: int
    sample_points: tuple[tuple[float, float, float], ...]
    sup_distance: float
    mu: float
    sigma: float
    notes: str = ""


def _ecdf_report(name: str, x: int, stat: np.ndarray, ref, ys: np.ndarray,
                 mu: float, sigma: float, notes: str = "") -> DistReport:
    """Empirical ``#{stat <= y} / x`` against ``ref(y)``; ``ref`` must be vectorized."""
    srt = np.sort(stat)
    emp = np.searchsorted(srt, ys, side="right") / x
    pts = tuple((float(y), float(e), float(r)) for y, e, r in zip(ys, emp, ref(ys)))
    # sup over jump points: compare the CDF just before and at each jump
    uniq, first = np.unique(srt, return_index=True)
    after = np.searchsorted(srt, uniq, side="right") / x
    before = first / x
    r_at = ref(uniq)
    sup = float(max(np.abs(after - r_at).max(initial=0), np.abs(before - r_at).max(initial=0)))
    return DistReport(name, x, pts, sup, mu, sigma, notes)


def erdos_kac_reports(s: SummatorySet, x: int, a0: float | None = None,
                      b0: float | None = None, d0: float | None = None,
                      p: Precision = DEFAULT_PRECISION,
                      zs: Sequence[float] = tuple(np.linspace(-3, 3, 25))) -> list[DistReport]:
    """The classical half-split fraction plus empirical CDFs of the conjectured statistics.

    Reports, in order:

    * ``omega_below_loglog``: ``#{3 <= n <= x: Omega(n) <= loglog n} / x`` against 1/2;
    * ``c_omega_lognormal``: ``(C_Omega(n)/(log n sqrt(loglog n)) - mu_x) / sigma_x``
      with ``mu_x = loglog x - log(sqrt(2 pi) A0 G_hat(1))`` and
      ``sigma_x = sqrt(loglog x)``, against ``Phi(z)``;
    * ``abs_ginv_centered``: ``|g^{-1}(n)|/(log n sqrt(loglog n)) - 6 |G^{-1}|(n)/(pi^2 n log n sqrt(loglog n))``
      against ``Phi((pi^2 y / 6 - mu_x) / sigma_x)``;
    * ``c_omega_sqrt_scale`` when ``b0`` and ``d0`` are given.

    ``loglog n`` is only positive from ``n = 3``, so each statistic runs over
    ``3 <= n <= x`` while keeping the ``1/x`` normalization.
    """
    if x < 1000:
        raise DomainError(f"distribution reports need x >= 1000, got {x}")
    _check_x(s.core, x)
    if a0 is None or b0 is None or d0 is None:
        est = estimate_constants(s, [x])
        a0 = est.A0 if a0 is None else a0
        b0 = est.B0 if b0 is None else b0
        d0 = est.D0 if d0 is None else d0
    n = np.arange(3, x + 1, dtype=np.float64)
    ln = np.log(n)
    lln = np.log(ln)
    big = s.basic.big_omega.values[3 : x + 1]
    c = s.core.c_omega.values[3 : x + 1].astype(np.float64)
    absg = s.core.abs_g_inv.values[3 : x + 1].astype(np.float64)
    absG = s.absGinv.sums[3 : x + 1].astype(np.float64)
    ll = loglog(x)
    mu = ll - math.log(math.sqrt(2 * math.pi) * a0 * analytic.g_hat(1.0, p))
    sigma = math.sqrt(ll)
    zgrid = np.asarray(zs, dtype=np.float64)

    half = int(np.count_nonzero(big <= lln)) / x
    reports = [DistReport("omega_below_loglog", x, ((0.0, half, 0.5),), abs(half - 0.5), 0.0, 1.0,
                          "fraction of 3 <= n <= x with Omega(n) <= loglog n")]

    stat_a = (c / (ln * np.sqrt(lln)) - mu) / sigma
    reports.append(_ecdf_report("c_omega_lognormal", x, stat_a, special.ndtr, zgrid, mu, sigma))

    stat_g = absg / (ln * np.sqrt(lln)) - 6 * absG / (math.pi**2 * n * ln * np.sqrt(lln))
    ygrid = 6 * (mu + sigma * zgrid) / math.pi**2
    reports.append(_ecdf_report(
        "abs_ginv_centered", x, stat_g, lambda y: special.ndtr((math.pi**2 * np.asarray(y) / 6 - mu) / sigma),
        ygrid, mu, sigma))

    lx = math.log(x)
    scale = d0 * math.sqrt(x) * lx * math.sqrt(ll)
    if scale > 0:
        stat_b = (c - b0 * lx * math.sqrt(ll)) / scale
        reports.append(_ecdf_report("c_omega_sqrt_scale", x, stat_b, special.ndtr, zgrid,
                                    b0 * lx * math.sqrt(ll), scale))
    return reports


# ---------------------------------------------------------------------------
# row emitters
# ---------------------------------------------------------------------------

def profile_rows(prof: KProfile) -> list[dict[str, Any]]:
    ks = sorted(set(prof.by_omega) | set(prof.by_little_omega))
    return [{"x": prof.x, "k": k, "pi_hat": prof.pi_hat(k), "C_hat": prof.c_hat(k),
             "C_hat_star": prof.c_hat_star(k), "pi": prof.pi_k(k)} for k in ks]


def asym_rows(reports: Sequence[AsymReport]) -> list[dict[str, Any]]:
    return [{"kind": r.name, "x": r.params.get("x"), "k": r.params.get("k"),
             "exact": r.exact, "predicted": r.predicted, "ratio": r.ratio,
             **{k: v for k, v in r.extra.items()}} for r in reports]


def dist_rows(reports: Sequence[DistReport]) -> list[dict[str, Any]]:
    return [{"statistic": d.name, "x": d.x, "y": y, "empirical": e, "reference": r,
             "sup_distance": d.sup_distance, "mu": d.mu, "sigma": d.sigma}
            for d in reports for y, e, r in d.sample_points]
