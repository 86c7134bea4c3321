import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ginv import distribution as ds
from ginv.errors import DomainError, RangeError


def test_k_profile_small_example(s500):
    prof = ds.k_profile(s500.core, 10)
    assert prof.pi_hat(2) == 4
    assert prof.c_hat(2) == 6
    assert prof.c_hat_star(2) == 2
    assert prof.pi_k(1) == 7  # 2, 3, 4, 5, 7, 8, 9


def test_k_profile_against_brute_force(s500):
    x = 500
    prof = ds.k_profile(s500.core, x)
    for k in range(1, 10):
        ns = [n for n in range(2, x + 1) if oracles.big_omega(n) == k]
        assert prof.pi_hat(k) == len(ns)
        assert prof.c_hat(k) == sum(oracles.c_omega(n) for n in ns)
        assert prof.c_hat_star(k) == sum((-1) ** oracles.omega(n) * oracles.c_omega(n) for n in ns)
        assert prof.pi_k(k) == sum(1 for n in range(2, x + 1) if oracles.omega(n) == k)


def test_k_profile_partitions(s10k):
    core = s10k.core
    x = 10**4
    prof = ds.k_profile(core, x)
    c = core.c_omega.values[2 : x + 1]
    w = core.basic.omega.values[2 : x + 1]
    assert sum(v[0] for v in prof.by_omega.values()) == x - 1
    assert sum(v[1] for v in prof.by_omega.values()) == int(c.sum())
    assert sum(v[2] for v in prof.by_omega.values()) == int(np.where(w % 2 == 0, c, -c).sum())
    assert prof.c_hat_star(1) == -core.basic.pi(x)
    with pytest.raises(RangeError):
        ds.k_profile(core, x + 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=500), st.floats(min_value=0.05, max_value=4.0))
def test_threshold_accounting(x, r):
    from ginv.coreseq import build_core

    core = build_core(500)
    t = ds.threshold_counts(core, x, r)
    assert t.accounting_ok()
    thr = r * math.log(math.log(x))
    assert t.A == sum(1 for n in range(1, x + 1) if oracles.big_omega(n) <= thr)
    assert t.D == sum(1 for n in range(1, x + 1) if oracles.omega(n) >= thr)


def test_threshold_ties_and_extremes(s500):
    x = 500
    r = 2 / ds.loglog(x)
    t = ds.threshold_counts(s500.core, x, r)
    assert t.threshold == pytest.approx(2.0)
    if t.threshold == 2.0:
        assert t.ties_big == sum(1 for n in range(1, x + 1) if oracles.big_omega(n) == 2)
    huge = ds.threshold_counts(s500.core, x, 100.0)
    assert huge.A == x and huge.B == 0 and huge.B_hat == 0
    with pytest.raises(DomainError):
        ds.threshold_counts(s500.core, 2, 1.0)
    with pytest.raises(DomainError):
        ds.threshold_counts(s500.core, 10, 0.0)


def test_uniform_reports_and_flags(s10k):
    core = s10k.core
    x = 10**4
    r1 = ds.uniform_asym_report(core, x, 1, "pi_hat")
    assert r1.exact == core.basic.pi(x)
    assert r1.predicted == pytest.approx(x / math.log(x), rel=1e-9)  # G_cal(0) = 1
    assert r1.extra["in_3_2_range"]
    far = ds.uniform_asym_report(core, x, 6, "pi_hat")
    assert not far.extra["in_3_2_range"] and far.notes
    exact1 = ds.c_hat_star_one_report(core, x)
    assert exact1.ratio == 1.0 and exact1.passed
    with pytest.raises(ValueError):
        ds.predicted_main_term("C_hat", x, 2)


def test_pi_hat_one_ratio_at_million(s1m):
    r = ds.uniform_asym_report(s1m.core, 10**6, 1, "pi_hat")
    assert abs(r.ratio - 1) < 0.10


def test_asym_ladder_contains_exact_row(s10k):
    ladder = ds.asym_ladder(s10k.core, [10**3, 10**4], a0=5.0)
    exact_rows = [r for r in ladder if r.name == "C_hat_star_1_exact"]
    assert len(exact_rows) == 2 and all(r.ratio == 1.0 for r in exact_rows)
    assert {r.name for r in ladder} >= {"pi_hat", "pi", "C_hat", "C_hat_star"}


def test_average_orders(s500, s10k):
    ao = ds.average_orders(s500, 500)
    assert ao.avg_abs_g == pytest.approx(12.02)
    assert ao.avg_c == sum(oracles.c_omega(n) for n in range(1, 501)) / 500
    assert sum(oracles.c_omega(n) for n in range(1, 13)) == 16
    assert ao.reports[0].ratio == pytest.approx(1.0)
    with pytest.raises(DomainError):
        ds.average_orders(s500, 50)
    drift = ds.average_orders(s10k, 10**4, b0=ao.reports[0].params["B0"])
    assert drift.reports[0].ratio != pytest.approx(1.0)


def test_constant_estimates(s10k):
    est = ds.estimate_constants(s10k, [10**3, 10**4])
    assert len(est.samples) == 2
    for c in est.samples:
        assert c.second_moment_literal == -c.second_moment_pairwise < 0
        assert c.A0 > 0 and c.B0 > 0 and c.D0 > 0
    assert est.dispersion["B0"] >= 0
    with pytest.raises(DomainError):
        ds.estimate_constants(s10k, [10**4, 10**3])


def test_constant_sample_formulas(s10k):
    x = 10**4
    c = ds.constant_sample(s10k, x)
    ll = math.log(math.log(x))
    lw = sum((-1) ** oracles.omega(n) for n in range(1, x + 1))
    assert c.A0 == pytest.approx(x / (abs(lw) * math.sqrt(2 * math.pi * ll)))


def test_erdos_kac_reports(s10k):
    reps = ds.erdos_kac_reports(s10k, 10**4)
    names = [r.name for r in reps]
    assert names == ["omega_below_loglog", "c_omega_lognormal", "abs_ginv_centered", "c_omega_sqrt_scale"]
    x = 10**4
    half = sum(1 for n in range(3, x + 1) if oracles.big_omega(n) <= math.log(math.log(n))) / x
    assert reps[0].sample_points[0][1] == pytest.approx(half)
    for r in reps[1:]:
        emp = [p[1] for p in r.sample_points]
        assert emp == sorted(emp) and 0 <= emp[0] and emp[-1] <= 1
        assert 0 <= r.sup_distance <= 1
        ref = [p[2] for p in r.sample_points]
        assert ref == sorted(ref)
    a = reps[1]
    mid = a.sample_points[len(a.sample_points) // 2]
    assert mid[0] == 0.0 and mid[2] == 0.5
    with pytest.raises(DomainError):
        ds.erdos_kac_reports(s10k, 500)


def test_row_emitters(s500):
    rows = ds.profile_rows(ds.k_profile(s500.core, 100))
    assert rows[0]["k"] == 1 and set(rows[0]) == {"x", "k", "pi_hat", "C_hat", "C_hat_star", "pi"}
    d = ds.dist_rows(ds.erdos_kac_reports(build_s(), 1000))
    assert {"statistic", "y", "empirical", "reference", "sup_distance"} <= set(d[0])


def build_s():
    from ginv.coreseq import build_core
    from ginv.summatory import build_summatory

    return build_summatory(build_core(1000))
