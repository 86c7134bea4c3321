"""Command-line front end: ``nt table|verify|figures|dist|asym|constants``.

Exit status is 0 on success, 1 when a verification check fails and 2 for
configuration errors (bad limits, unknown format, capacity exceeded).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import analytic, distribution, figures, table, verify
from .analytic import Precision
from .coreseq import build_core
from .errors import CapacityError, DomainError
from .sieve import DEFAULT_CAPACITY
from .summatory import SummatorySet, build_summatory, primorial_report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

COMMANDS = ("table", "verify", "figures", "dist", "asym", "constants")

# (default nmax, quick nmax, minimum nmax)
_LIMITS = {
    "table": (500, 500, 500),
    "verify": (10**4, 500, 1),
    "figures": (2500, 2500, 2500),
    "dist": (10**6, 10**4, 1000),
    "asym": (10**6, 10**4, 1000),
    "constants": (10**6, 10**4, 1000),
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    nmax: int
    out_dir: Path
    fmt: str = "csv"
    precision: Precision = field(default_factory=Precision)
    quick: bool = False
    inject_fault: int | None = None
    svg: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        low = _LIMITS[self.command][2]
        if self.nmax < low:
            raise ConfigError(f"{self.command} needs --nmax >= {low}, got {self.nmax}")
        if self.nmax > DEFAULT_CAPACITY:
            raise ConfigError(f"--nmax {self.nmax} exceeds capacity {DEFAULT_CAPACITY}")
        if self.inject_fault is not None and not 1 <= self.inject_fault <= self.nmax:
            raise ConfigError(f"--inject-fault must lie in [1, {self.nmax}]")


def write_rows(cfg: RunConfig, stem: str, rows: Sequence[dict[str, Any]]) -> Path:
    """Write ``rows`` as ``<out>/<stem>.csv`` or ``.json``; CSV columns are the union of row keys in first-seen order."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / f"{stem}.{cfg.fmt}"
    if cfg.fmt == "json":
        path.write_text(json.dumps(list(rows), indent=1, default=_json_default) + "\n",
                        encoding="utf-8")
        return path
    keys: list[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_cell(r.get(k)) for k in keys})
    return path


def _csv_cell(v: Any) -> Any:
    # repr keeps full float precision and never depends on locale
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else v


def _json_default(v: Any) -> Any:
    if hasattr(v, "item"):
        return v.item()
    return str(v)


def _tables(cfg: RunConfig) -> SummatorySet:
    return build_summatory(build_core(cfg.nmax))


def cmd_table(cfg: RunConfig) -> int:
    s = _tables(cfg)
    rows = table.table_records(table.build_table(s, 500))
    path = write_rows(cfg, "table", rows)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    s = _tables(cfg)
    if cfg.inject_fault is not None:
        s = verify.inject_fault(s, cfg.inject_fault)
    results = verify.run_suite(s, quick=cfg.quick)
    rows = [{"check": r.name, "passed": r.passed, "gating": r.gating, "checked": r.checked,
             "first_failure": r.first_failure, "detail": r.detail,
             "seconds": round(r.seconds, 4)} for r in results]
    write_rows(cfg, "verify", rows)
    for r in results:
        tag = "PASS" if r.passed else ("FAIL" if r.gating else "NOTE")
        loc = f" at {r.first_failure}" if r.first_failure is not None else ""
        print(f"{tag} {r.name}{loc} {r.detail}".rstrip())
    print(verify.elapsed_summary(results))
    return EXIT_OK if verify.suite_passed(results) else EXIT_FAIL


def cmd_figures(cfg: RunConfig) -> int:
    s = _tables(cfg)
    p1 = figures.plot1_series(s, 2500)
    p2 = figures.plot2_series(s, 2500)
    write_rows(cfg, "plot_mertens", p1)
    write_rows(cfg, "plot_ginv", p2)
    if cfg.svg:
        figures.write_svg(cfg.out_dir / "plot_mertens.svg", p1, figures.PLOT1_COLUMNS,
                          "M(x), L(x) and Q-weighted partial sums of g^-1")
        figures.write_svg(cfg.out_dir / "plot_ginv.svg", p2, figures.PLOT2_COLUMNS,
                          "G^-1(x) and its signed components")
    print(f"wrote figure series for 1 <= x <= 2500 to {cfg.out_dir}")
    return EXIT_OK


def _sample_limits(nmax: int) -> list[int]:
    xs = [10**e for e in range(3, 9) if 10**e <= nmax]
    return xs if xs and xs[-1] == nmax else xs + [nmax]


def cmd_constants(cfg: RunConfig) -> int:
    s = _tables(cfg)
    est = distribution.estimate_constants(s, _sample_limits(cfg.nmax))
    rows = [{"x": c.x, "A0": c.A0, "B0": c.B0, "D0": c.D0,
             "second_moment_literal": c.second_moment_literal,
             "second_moment_pairwise": c.second_moment_pairwise} for c in est.samples]
    rows.append({"x": "dispersion", **{k: est.dispersion[k] for k in ("A0", "B0", "D0")}})
    write_rows(cfg, "constants", rows)
    ao = distribution.average_orders(s, cfg.nmax)
    write_rows(cfg, "average_orders", [r.as_row() for r in ao.reports])
    print(f"A0={est.A0:.6g} B0={est.B0:.6g} D0={est.D0:.6g} "
          f"dispersion A0={est.dispersion['A0']:.3g} B0={est.dispersion['B0']:.3g} "
          f"D0={est.dispersion['D0']:.3g}")
    return EXIT_OK


def cmd_dist(cfg: RunConfig) -> int:
    s = _tables(cfg)
    x = cfg.nmax
    write_rows(cfg, "k_profile", distribution.profile_rows(distribution.k_profile(s.core, x)))
    est = distribution.estimate_constants(s, _sample_limits(x))
    reps = distribution.erdos_kac_reports(s, x, est.A0, est.B0, est.D0, cfg.precision)
    write_rows(cfg, "erdos_kac", distribution.dist_rows(reps))
    thr = [distribution.threshold_counts(s.core, x, r) for r in (0.5, 1.0, 1.5)]
    write_rows(cfg, "thresholds", [
        {"x": t.x, "r": t.r, "threshold": t.threshold, "A": t.A, "B": t.B, "C": t.C, "D": t.D,
         "B_hat": t.B_hat, "accounting_ok": t.accounting_ok()} for t in thr])
    for d in reps:
        print(f"{d.name}: sup distance {d.sup_distance:.4f}")
    return EXIT_OK


def cmd_asym(cfg: RunConfig) -> int:
    s = _tables(cfg)
    p = cfg.precision
    xs = _sample_limits(cfg.nmax)
    est = distribution.estimate_constants(s, xs)
    ladder = distribution.asym_ladder(s.core, xs, est.A0, p)
    ladder.append(distribution.b_hat_bound_report(s.core, cfg.nmax))
    write_rows(cfg, "uniform_asym", distribution.asym_rows(ladder))
    analytic_reports = analytic.gamma_asym_reports(p)
    analytic_reports += [analytic.lemma_a3_report(t) for t in (50, 100, 200, 400)]
    write_rows(cfg, "analytic", [r.as_row() for r in analytic_reports])
    if s.limit >= 2310:
        prim = primorial_report(s, 1)[0]
        rows = [{"n": prim.primorial, "divisor": 1, "Ginv": prim.ginv,
                 "ratio": prim.ratio, "expected_sign": "-", "sign_ok": prim.sign_ok}]
        rows += [{"n": prim.primorial // p, "divisor": p, "Ginv": g, "ratio": r,
                  "expected_sign": "+", "sign_ok": ok} for p, g, r, ok in prim.divided]
        write_rows(cfg, "primorial", rows)
    bad = [r for r in analytic_reports if r.passed is False]
    print(f"{len(ladder)} uniform-asymptotic rows, {len(analytic_reports)} analytic rows, "
          f"{len(bad)} analytic rows outside tolerance")
    return EXIT_OK


_DISPATCH = {"table": cmd_table, "verify": cmd_verify, "figures": cmd_figures,
             "dist": cmd_dist, "asym": cmd_asym, "constants": cmd_constants}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nt", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--nmax", type=int, default=None, help="sieve limit")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--format", dest="fmt", default="csv", help="csv or json")
    parser.add_argument("--prime-cut", type=int, default=10**6,
                        help="primes beyond this enter Euler products through tail sums")
    parser.add_argument("--rel-tol", type=float, default=1e-12)
    parser.add_argument("--quick", action="store_true", help="small limits for smoke runs")
    parser.add_argument("--inject-fault", type=int, default=None, metavar="N",
                        help="verify: negate g^-1(N) before checking")
    parser.add_argument("--svg", action="store_true", help="figures: also write SVG plots")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    default, quick, _ = _LIMITS[ns.command]
    nmax = ns.nmax if ns.nmax is not None else (quick if ns.quick else default)
    try:
        prec = Precision(rel_tol=ns.rel_tol, prime_cut=ns.prime_cut)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(ns.command, nmax, ns.out, ns.fmt, prec, ns.quick, ns.inject_fault, ns.svg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = config_from_args(ns)
        return _DISPATCH[cfg.command](cfg)
    except (ConfigError, CapacityError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
