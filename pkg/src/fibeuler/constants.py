"""The constants S(z) and c(z) and the closed-form asymptotic for a_n."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from fibeuler.core import (
    PrecisionContext,
    PrecisionError,
    ShiftLike,
    ShiftParam,
    agreeing_digits,
    as_shift,
    certify,
    golden_ratio,
)
from fibeuler.logseries import SeriesValue, _g_sum
from fibeuler.saddle import r_expansion


@dataclass(frozen=True)
class AsymptoticConstants:
    z: ShiftParam
    S: mpf
    c: mpf
    digits_certified: int


def _s_series(zp: ShiftParam, ctx: PrecisionContext) -> SeriesValue:
    # summand (F_z + F_{z+1} phi^k) / ((phi^2k - phi^k - 1) k), k >= 2
    # phi^2k - phi^k - 1 >= 0.47 phi^2k for k >= 2, so summand <= W phi^-k / (0.47 k)
    fz, fz1 = zp.f_z, zp.f_z1
    W = abs(fz) + abs(fz1)
    with ctx.workdps():
        phi = golden_ratio(ctx)
        inv = 1 / phi
        stop = ctx.tail_tol
        total = mpf(0)
        pk = phi  # phi^(k-1)
        k = 1
        while True:
            k += 1
            pk *= phi
            total += (fz + fz1 * pk) / ((pk * pk - pk - 1) * k)
            tail = W * inv ** (k + 1) / (mpf("0.47") * (k + 1) * (1 - inv))
            if tail <= stop:
                return SeriesValue(total, k, tail)


def constant_S(z: ShiftLike, ctx: PrecisionContext) -> mpf:
    """``S = sum_{k>=2} (F_z + F_{z+1} phi^k) / ((phi^2k - phi^k - 1) k)``."""
    zp = as_shift(z)
    value = certify(lambda c: _s_series(zp, c).value, ctx)
    with ctx.workdps():
        return +value


def _s_hyperbolic(ctx: PrecisionContext) -> mpf:
    with ctx.workdps():
        theta = mpmath.acsch(2)
        total = mpf(0)
        k = 1
        while True:
            k += 1
            total += 1 / (2 * k * mpmath.sinh(k * theta) - k)
            # 2 sinh(k theta) - 1 >= 0.47 e^(k theta) for k >= 2, so summand <= 3 e^(-k theta) / k
            q = mpmath.exp(-theta)
            tail = 3 * q ** (k + 1) / ((k + 1) * (1 - q))
            if tail <= ctx.tail_tol:
                return total


def constant_S_hyperbolic(ctx: PrecisionContext) -> mpf:
    """``sum_{k>=2} 1 / (2k sinh(k arccsch 2) - k)``, the z = 0 constant in hyperbolic form."""
    value = certify(_s_hyperbolic, ctx)
    with ctx.workdps():
        return +value


def constant_c(z: ShiftLike, ctx: PrecisionContext) -> mpf:
    """``c = sum_{k>=2} G(k, phi - 1)``, the limit of the k >= 2 part of b(r_n) - n."""
    zp = as_shift(z)

    def run(c: PrecisionContext) -> mpf:
        with c.workdps():
            x = 1 / golden_ratio(c)
            return _g_sum(x, zp, c, k0=2).value

    value = certify(run, ctx)
    with ctx.workdps():
        return +value


def asymptotic_constants(z: ShiftLike, ctx: PrecisionContext) -> AsymptoticConstants:
    """S and c, each checked against a run with 20 more working digits."""
    zp = as_shift(z)
    s_low = _s_series(zp, ctx).value
    high = ctx.escalated()
    s_high = _s_series(zp, high).value
    with high.workdps():
        x = 1 / golden_ratio(high)
        c_high = _g_sum(x, zp, high, k0=2).value
    with ctx.workdps():
        c_low = _g_sum(1 / golden_ratio(ctx), zp, ctx, k0=2).value
    with high.workdps():
        digits = min(agreeing_digits(s_low, s_high), agreeing_digits(c_low, c_high))
    if digits < ctx.target_digits:
        raise PrecisionError(f"S/c certified to only {digits} digits, {ctx.target_digits} requested")
    with ctx.workdps():
        return AsymptoticConstants(zp, +s_high, +c_high, digits)


def exponent_constant(z: ShiftLike, ctx: PrecisionContext) -> mpf:
    """``(phi/10 - 1/2) F_z - F_{z+1} / 10``, the n-free part of the exponent without S."""
    zp = as_shift(z)
    phi = golden_ratio(ctx)
    with ctx.workdps():
        return (phi / 10 - mpf(1) / 2) * zp.f_z - mpf(zp.f_z1) / 10


def log_asymptotic_a(n: int, z: ShiftLike, ctx: PrecisionContext, S: mpf | None = None) -> mpf:
    """Natural log of
    ``phi^(n + z/4) exp(E + 2 phi^(z/2) sqrt(n) / 5^(1/4) + S) / (2 sqrt(pi) 5^(1/8) n^(3/4))``
    where ``E`` is :func:`exponent_constant`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    zp = as_shift(z)
    if S is None:
        S = constant_S(zp, ctx)
    phi = golden_ratio(ctx)
    E = exponent_constant(zp, ctx)
    with ctx.workdps():
        log_phi = mpmath.log(phi)
        return (
            (n + mpf(zp.z) / 4) * log_phi
            + E
            + 2 * phi ** (mpf(zp.z) / 2) * mpmath.sqrt(n) / mpmath.root(5, 4)
            + S
            - mpmath.log(2 * mpmath.sqrt(mpmath.pi))
            - mpmath.log(5) / 8
            - mpf(3) / 4 * mpmath.log(n)
        )


def asymptotic_a(n: int, z: ShiftLike, ctx: PrecisionContext, S: mpf | None = None) -> mpf:
    """The asymptotic estimate of a_n (mpf exponents are unbounded, so no overflow)."""
    lg = log_asymptotic_a(n, z, ctx, S)
    with ctx.workdps():
        return mpmath.exp(lg)


def log_saddle_estimate(n: int, z: ShiftLike, ctx: PrecisionContext, terms: int = 3,
                        S: mpf | None = None) -> mpf:
    """Log of the saddle-point estimate with ``1/r^n`` taken literally from the expansion of r.

    ``U(r)`` and ``b(r)`` are replaced by their leading asymptotic forms;
    only ``r^-n`` is evaluated from :func:`fibeuler.saddle.r_expansion`
    truncated to ``terms`` terms.  With three terms this tends to the
    closed form; with two, ``r^-n`` picks up a spurious constant factor
    ``exp(phi^z / (2 sqrt 5))`` and the estimate no longer matches a_n.
    """
    zp = as_shift(z)
    if S is None:
        S = constant_S(zp, ctx)
    r = r_expansion(n, zp, ctx, terms=terms)
    phi = golden_ratio(ctx)
    E = exponent_constant(zp, ctx)
    with ctx.workdps():
        a_coef = phi ** (mpf(zp.z) / 2) / mpmath.root(5, 4)
        log_u = E + a_coef * mpmath.sqrt(n) + S
        b = 2 * phi ** (-mpf(zp.z) / 2) * mpmath.root(5, 4) * mpf(n) ** mpf(1.5)
        return log_u - mpmath.log(2 * mpmath.pi * b) / 2 - n * mpmath.log(r)
