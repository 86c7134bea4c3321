"""Series data for the two summatory-function plots, plus a minimal SVG writer."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

from .summatory import SummatorySet

C1 = 1 / (1 - 6 / math.pi**2)
C2 = 1 - 6 / math.pi**2

PLOT1_COLUMNS = ("x", "M", "L", "C1_abs_Ginv_over_Q", "C2_absGinv_over_Q")
PLOT2_COLUMNS = ("x", "Ginv", "Ginv_plus", "Ginv_minus", "abs_Ginv")


def plot1_series(s: SummatorySet, xmax: int = 2500) -> list[dict[str, float]]:
    """``M``, ``L`` and the two ``Q``-weighted partial sums of ``g^{-1}`` for ``x <= xmax``.

    The scaled curves are ``C1 |G^{-1}(x)| / Q(x)`` and ``C2 |G^{-1}|(x) / Q(x)``.
    """
    b = s.basic
    return [{"x": x, "M": b.M(x), "L": b.L(x),
             "C1_abs_Ginv_over_Q": C1 * abs(s.Ginv(x)) / b.Q(x),
             "C2_absGinv_over_Q": C2 * s.absGinv(x) / b.Q(x)} for x in range(1, xmax + 1)]


def plot2_series(s: SummatorySet, xmax: int = 2500) -> list[dict[str, int]]:
    """``G^{-1}`` and its positive and negative parts, and ``|G^{-1}|``, for ``x <= xmax``."""
    return [{"x": x, "Ginv": s.Ginv(x), "Ginv_plus": s.GinvPlus(x),
             "Ginv_minus": s.GinvMinus(x), "abs_Ginv": s.absGinv(x)} for x in range(1, xmax + 1)]


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def write_svg(path: Path, rows: Sequence[dict[str, float]], columns: Sequence[str],
              title: str, width: int = 900, height: int = 500) -> None:
    """Line plot of ``columns[1:]`` against ``columns[0]`` as a standalone SVG file."""
    xs = [float(r[columns[0]]) for r in rows]
    series = {c: [float(r[c]) for r in rows] for c in columns[1:]}
    lo = min(min(v) for v in series.values())
    hi = max(max(v) for v in series.values())
    if hi == lo:
        hi = lo + 1
    pad = 50
    x0, x1 = xs[0], xs[-1]

    def px(x: float) -> float:
        return pad + (x - x0) / (x1 - x0 or 1) * (width - 2 * pad)

    def py(y: float) -> float:
        return height - pad - (y - lo) / (hi - lo) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
             f'<line x1="{pad}" y1="{py(0) if lo <= 0 <= hi else height - pad}" '
             f'x2="{width - pad}" y2="{py(0) if lo <= 0 <= hi else height - pad}" stroke="#999"/>']
    for i, (name, ys) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        parts.append(f'<text x="{width - pad + 5}" y="{pad + 15 * i}" font-size="11" '
                     f'fill="{color}">{name}</text>')
    parts.append(f'<text x="{pad}" y="{height - 20}" font-size="11">x: {x0:g} .. {x1:g}, '
                 f'y: {lo:.4g} .. {hi:.4g}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts), encoding="utf-8")
