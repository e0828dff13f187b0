"""Root of the saddle-point equation x U'(x)/U(x) = n and its expansion in n."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from fibeuler.core import PrecisionContext, ShiftLike, ShiftParam, as_shift, golden_ratio
from fibeuler.logseries import _saddle_lhs

MAX_ITERATIONS = 400


class SaddleError(ArithmeticError):
    """The saddle-point solver could not bracket or converge."""


@dataclass(frozen=True)
class SaddlePoint:
    n: int
    z: ShiftParam
    r: mpf
    residual: mpf
    truncation_K: int


def r_expansion(n: int, z: ShiftLike, ctx: PrecisionContext, terms: int = 3) -> mpf:
    """``phi - 1 - phi^(z/2-1) / (5^(1/4) sqrt n) + phi^(z-1) / (2 sqrt5 n)``.

    ``terms`` (1, 2 or 3) keeps that many leading terms; anything other than
    3 exists for demonstrating how much the last term matters.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if terms not in (1, 2, 3):
        raise ValueError(f"terms must be 1, 2 or 3, got {terms}")
    zz = as_shift(z).z
    phi = golden_ratio(ctx)
    with ctx.workdps():
        r = phi - 1
        if terms >= 2:
            r -= phi ** (mpf(zz) / 2 - 1) / (mpmath.root(5, 4) * mpmath.sqrt(n))
        if terms >= 3:
            r += phi ** (zz - 1) / (2 * mpmath.sqrt(5) * n)
        return r


def solve_saddle(n: int, z: ShiftLike, ctx: PrecisionContext) -> SaddlePoint:
    """Solve ``saddle_lhs(r) = n`` on ``(0, phi - 1)``.

    Safeguarded Newton: the iterate always stays inside a sign-changing
    bracket, the derivative is a central finite difference, and any step
    leaving the bracket is replaced by bisection.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    zp = as_shift(z)
    seed = r_expansion(n, zp, ctx)
    with ctx.workdps():
        upper = (mpmath.sqrt(5) - 1) / 2
        eps = mpmath.power(10, -ctx.work_digits)
        tol = mpmath.power(10, -ctx.target_digits + 2) * n
        h_rel = mpmath.power(10, -(ctx.work_digits // 3))

        def f(x: mpf) -> tuple[mpf, int]:
            s = _saddle_lhs(x, zp, ctx)
            return s.value - n, s.truncation_K

        hi = upper - eps
        lo = seed - (upper - seed) / 10
        if not (0 < lo < hi) or f(lo)[0] >= 0:
            lo = mpf("1e-6")
        f_lo, _ = f(lo)
        f_hi, _ = f(hi)
        if not (f_lo < 0 < f_hi):
            raise SaddleError(f"could not bracket the saddle point for n={n}, z={zp.z}")

        x = seed if lo < seed < hi else (lo + hi) / 2
        for _ in range(MAX_ITERATIONS):
            fx, K = f(x)
            if abs(fx) <= tol:
                return SaddlePoint(n, zp, x, abs(fx), K)
            if fx < 0:
                lo = x
            else:
                hi = x
            h = min(h_rel * x, (upper - x) / 2, x / 2)
            slope = (f(x + h)[0] - f(x - h)[0]) / (2 * h)
            step_ok = slope > 0
            if step_ok:
                nxt = x - fx / slope
                step_ok = lo < nxt < hi
            x = nxt if step_ok else (lo + hi) / 2
            if hi - lo < eps:
                break
        fx, K = f(x)
        if abs(fx) <= tol:
            return SaddlePoint(n, zp, x, abs(fx), K)
    raise SaddleError(f"saddle solver did not converge for n={n}, z={zp.z}")
