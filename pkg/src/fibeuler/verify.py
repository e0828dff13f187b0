"""Exact-vs-asymptotic ratio tables, convergence gates, CSV and SVG output."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union
from xml.sax.saxutils import escape

import mpmath
from mpmath import mpf

from fibeuler.constants import constant_S, log_asymptotic_a, log_saddle_estimate
from fibeuler.core import PrecisionContext, ShiftLike, ShiftParam, as_shift
from fibeuler.exact import ExactSequence, euler_transform

PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class RatioRow:
    n: int
    log_a_n: mpf
    log_asym_n: mpf
    ratio: mpf


@dataclass(frozen=True)
class RatioReport:
    z: ShiftParam
    rows: tuple[RatioRow, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        ns = [r.n for r in self.rows]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("rows must be strictly increasing in n")
        if any(r.ratio <= 0 for r in self.rows):
            raise ValueError("ratios must be positive")

    def ratio_at(self, n: int) -> mpf:
        for row in self.rows:
            if row.n == n:
                return row.ratio
        raise KeyError(n)

    def ns(self) -> list[int]:
        return [r.n for r in self.rows]


def log_exact(a_n: int, ctx: PrecisionContext) -> mpf:
    if a_n <= 0:
        raise ValueError("log of a nonpositive coefficient")
    with ctx.workdps():
        return mpmath.log(mpf(a_n))


def ratio_table(z: ShiftLike, N: int, stride: int, ctx: PrecisionContext,
                sequence: Optional[ExactSequence] = None,
                estimate: Optional[Callable[[int], mpf]] = None) -> RatioReport:
    """Ratios ``a_n / asymptotic(n)`` at ``n = stride, 2 stride, ..., <= N``.

    ``sequence`` reuses already computed exact terms; ``estimate`` swaps in
    another log-estimate (default: the closed-form asymptotic).
    """
    if N < 1 or stride < 1:
        raise ValueError("N and stride must be positive")
    zp = as_shift(z)
    if sequence is None:
        sequence = euler_transform(zp, N)
    elif sequence.N < N or sequence.z != zp:
        raise ValueError("sequence does not cover the requested range")
    if estimate is None:
        S = constant_S(zp, ctx)
        estimate = lambda n: log_asymptotic_a(n, zp, ctx, S=S)  # noqa: E731
    rows = []
    for n in range(stride, N + 1, stride):
        if sequence[n] == 0:
            continue
        la = log_exact(sequence[n], ctx)
        le = estimate(n)
        with ctx.workdps():
            rows.append(RatioRow(n, la, le, mpmath.exp(la - le)))
    meta = {
        "z": zp.z,
        "N": N,
        "stride": stride,
        "work_digits": ctx.work_digits,
        "target_digits": ctx.target_digits,
    }
    return RatioReport(zp, tuple(rows), meta)


def two_term_ratio_table(z: ShiftLike, N: int, stride: int, ctx: PrecisionContext,
                         sequence: Optional[ExactSequence] = None, terms: int = 2) -> RatioReport:
    """Ratio table against :func:`log_saddle_estimate` with a truncated r expansion."""
    zp = as_shift(z)
    S = constant_S(zp, ctx)
    report = ratio_table(zp, N, stride, ctx, sequence,
                         estimate=lambda n: log_saddle_estimate(n, zp, ctx, terms=terms, S=S))
    report.meta["r_expansion_terms"] = terms
    return report


# -- gates -------------------------------------------------------------------

@dataclass(frozen=True)
class GateResult:
    name: str
    passed: bool
    detail: str


def band_gate(report: RatioReport, n_min: int = 10, low: float = 0.0, high: float = 1.05) -> GateResult:
    bad = [r.n for r in report.rows if r.n >= n_min and not (low < r.ratio < high)]
    return GateResult(f"ratio in ({low}, {high}) for n >= {n_min}", not bad,
                      "ok" if not bad else f"outside band at n={bad[:5]}")


def monotone_gate(report: RatioReport, checkpoints: Sequence[int]) -> GateResult:
    """``|ratio - 1|`` strictly decreasing along ``checkpoints`` (those present in the report)."""
    present = [n for n in checkpoints if n in set(report.ns())]
    errs = [abs(report.ratio_at(n) - 1) for n in present]
    ok = len(present) >= 2 and all(b < a for a, b in zip(errs, errs[1:]))
    detail = ", ".join(f"n={n}: |r-1|={mpmath.nstr(e, 6)}" for n, e in zip(present, errs))
    return GateResult(f"|ratio-1| decreasing along {present}", ok, detail or "no checkpoints present")


def extrapolated_limit(report: RatioReport, n1: int, n2: int) -> mpf:
    """Limit of the ratio assuming ``ratio(n) = L + A / sqrt(n)`` through two points."""
    r1, r2 = report.ratio_at(n1), report.ratio_at(n2)
    s1, s2 = mpmath.sqrt(n1), mpmath.sqrt(n2)
    return (r2 * s2 - r1 * s1) / (s2 - s1)


def limit_gate(report: RatioReport, n1: int, n2: int, tol: float = 0.05) -> GateResult:
    L = extrapolated_limit(report, n1, n2)
    return GateResult(f"extrapolated limit within {tol} of 1", abs(L - 1) < tol,
                      f"L={mpmath.nstr(L, 8)} from n={n1},{n2}")


def doubling_chain(ns: Iterable[int], start: int = 100) -> list[int]:
    present = sorted(set(ns))
    base = next((n for n in present if n >= start), None)
    chain = []
    n = base
    while n is not None and n in present:
        chain.append(n)
        n *= 2
    return chain


def convergence_gates(report: RatioReport) -> list[GateResult]:
    """Band, decade and doubling gates applied by ``fibeuler verify``."""
    ns = report.ns()
    gates = [band_gate(report)]
    decades = [n for n in (50, 500, 5000, 50000) if n in ns]
    if len(decades) >= 2:
        gates.append(monotone_gate(report, decades))
    chain = doubling_chain(ns)
    if len(chain) >= 2:
        gates.append(monotone_gate(report, chain))
    if ns and ns[-1] >= 1000:
        n1 = min((n for n in ns if n >= ns[-1] // 10), default=ns[-1])
        if n1 < ns[-1]:
            gates.append(limit_gate(report, n1, ns[-1]))
    return gates


# -- output ------------------------------------------------------------------

def _fmt(x: mpf, digits: int) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def csv_text(report: RatioReport, digits: Optional[int] = None) -> str:
    digits = digits or int(report.meta.get("target_digits", 20))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "ratio", "log_exact", "log_asym"])
    for r in report.rows:
        w.writerow([r.n, _fmt(r.ratio, digits), _fmt(r.log_a_n, digits), _fmt(r.log_asym_n, digits)])
    return buf.getvalue()


def emit_csv(report: RatioReport, path: PathLike, digits: Optional[int] = None) -> None:
    Path(path).write_text(csv_text(report, digits), encoding="ascii", newline="")


def read_csv(path: PathLike) -> list[dict]:
    """Rows of a file written by :func:`emit_csv`, parsed without losing digits."""
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.DictReader(fh))
    longest = max((len(v) for row in rows for v in row.values()), default=0)
    with mpmath.workdps(max(mpmath.mp.dps, longest + 5)):
        return [
            {"n": int(row["n"]), "ratio": mpf(row["ratio"]),
             "log_exact": mpf(row["log_exact"]), "log_asym": mpf(row["log_asym"])}
            for row in rows
        ]


def svg_text(report: RatioReport, y_range: tuple[float, float] = (0.5, 1.05),
             width: int = 640, height: int = 400) -> str:
    left, right, top, bottom = 60, 20, 30, 45
    pw, ph = width - left - right, height - top - bottom
    ylo, yhi = y_range
    nmax = max((r.n for r in report.rows), default=1)

    def sx(n: float) -> float:
        return left + pw * n / nmax

    def sy(v: float) -> float:
        v = min(max(v, ylo), yhi)
        return top + ph * (yhi - v) / (yhi - ylo)

    pts = [(sx(r.n), sy(float(r.ratio))) for r in report.rows]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{escape(f"a_n / asymptotic, z = {report.z.z}")}</title>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<line id="reference" x1="{left}" y1="{sy(1.0):.2f}" x2="{left + pw}" y2="{sy(1.0):.2f}" '
        f'stroke="red" stroke-width="1"/>',
    ]
    for frac in (0.0, 0.5, 1.0):
        y = ylo + frac * (yhi - ylo)
        out.append(f'<text x="{left - 6}" y="{sy(y) + 4:.2f}" font-size="11" text-anchor="end">{y:.3g}</text>')
    out.append(f'<text x="{left}" y="{height - 20}" font-size="11">0</text>')
    out.append(f'<text x="{left + pw}" y="{height - 20}" font-size="11" text-anchor="end">{nmax}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 6}" font-size="12" text-anchor="middle">n</text>')
    if len(pts) > 1:
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="1"/>')
    out.append('<g class="data">')
    out.extend(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" fill="steelblue"/>' for x, y in pts)
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(report: RatioReport, path: PathLike, y_range: tuple[float, float] = (0.5, 1.05)) -> None:
    Path(path).write_text(svg_text(report, y_range), encoding="utf-8")
