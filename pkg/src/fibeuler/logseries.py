"""Truncated series for log U(x), x U'/U, the G(k, x) family and b(x).

Every series is summed over k until a geometric majorant of the omitted
tail drops below ``ctx.tail_tol``.  The majorants use that for
``0 < x <= phi - 1`` and ``k >= 2`` the power ``t = x^k`` satisfies
``t <= x^2 < 0.382`` and hence ``1 - t - t^2 >= 0.47``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mpf

from fibeuler.core import PrecisionContext, ShiftLike, ShiftParam, as_shift, certify

# lower bound for 1 - t - t^2 when t = x^k, k >= 2, x <= phi - 1
_DEN_FLOOR = mpf("0.47")
_MAX_TERMS = 10**6


@dataclass(frozen=True)
class SeriesValue:
    value: mpf
    truncation_K: int
    tail_bound: mpf

    def __float__(self) -> float:
        return float(self.value)


class DomainError(ValueError):
    """Argument outside the region where the series converge."""


class PoleError(DomainError):
    """The k = 1 denominator 1 - x - x^2 vanishes at x = phi - 1."""


def _check_x(x: mpf, allow_boundary: bool = False) -> None:
    if x <= 0:
        raise DomainError(f"x must be positive, got {mpmath.nstr(x, 15)}")
    bound = (mpmath.sqrt(5) - 1) / 2
    if allow_boundary:
        # phi - 1 computed another way may land a few ulps above
        bound += bound * mpmath.ldexp(1, -mpmath.mp.prec + 4)
    if x > bound or (x == bound and not allow_boundary):
        raise PoleError(f"x must be below phi - 1, got {mpmath.nstr(x, 15)}")


def _weights(zp: ShiftParam) -> tuple[int, int, int]:
    fz, fz1 = zp.f_z, zp.f_z1
    return fz, fz1, abs(fz) + abs(fz1)


def _sum_series(term: Callable[[int], mpf], tail: Callable[[int], mpf], k0: int,
                ctx: PrecisionContext) -> SeriesValue:
    # sum term(k) for k >= k0 until tail(K) (bound on sum_{k>K}) <= tail_tol
    total = mpf(0)
    k = k0
    while True:
        total += term(k)
        bound = tail(k)
        if bound <= ctx.tail_tol:
            return SeriesValue(total, k, bound)
        k += 1
        if k > _MAX_TERMS:
            raise ArithmeticError("series did not reach tail tolerance")


# -- summands ---------------------------------------------------------------

def log_u_term(k: int, x: mpf, fz: int, fz1: int) -> mpf:
    t = x**k
    return t * (fz * t + fz1) / (k * (1 - t - t * t))


def saddle_term(k: int, x: mpf, fz: int, fz1: int) -> mpf:
    t = x**k
    den = t * t + t - 1
    return t * (fz1 * (t * t + 1) - fz * t * (t - 2)) / (den * den)


def g_term_value(k: int, x: mpf, fz: int, fz1: int) -> mpf:
    """``x^2 d^2/dx^2`` of the k-th summand of log U, in closed form.

    With ``t = x^k``::

        t * (F_z t ((k+1) t^3 - (5k+1) t^2 + 3(k-1) t - 4k + 2)
             - F_{z+1} ((k+1) t^4 - (k-1) t^3 + 6k t^2 + (k+1) t + k - 1))
          / (t^2 + t - 1)^3
    """
    t = x**k
    pz = (((k + 1) * t - (5 * k + 1)) * t + 3 * (k - 1)) * t - 4 * k + 2
    pz1 = ((((k + 1) * t - (k - 1)) * t + 6 * k) * t + (k + 1)) * t + (k - 1)
    den = (t + 1) * t - 1
    return t * (fz * t * pz - fz1 * pz1) / (den * den * den)


def g_term_variant(k: int, x: mpf, fz: int, fz1: int) -> mpf:
    """G(k, x) with the ``F_z t^2`` coefficient written as ``1 - 5k``.

    This variant is not the second log-derivative when ``F_z != 0``; it
    differs from :func:`g_term_value` by ``2 F_z t^4 / (t^2 + t - 1)^3``.
    Kept for comparison only.
    """
    t = x**k
    t2 = t * t
    return g_term_value(k, x, fz, fz1) + 2 * fz * t2 * t2 / ((t2 + t - 1) ** 3)


def g_one_reduced(r: mpf, fz: int, fz1: int) -> mpf:
    """The k = 1 member of the G family in its reduced rational form."""
    return 2 * r**2 * (((r - 3) * r**2 - 1) * fz - (r**3 + 3 * r + 1) * fz1) / (r**2 + r - 1) ** 3


# -- tail majorants -----------------------------------------------------------

def _geom_tail(x: mpf, K: int) -> mpf:
    # sum_{k>K} x^k
    return x ** (K + 1) / (1 - x)


def _linear_geom_tail(x: mpf, K: int) -> mpf:
    # sum_{k>K} k x^k
    return x ** (K + 1) * ((K + 1) - K * x) / (1 - x) ** 2


def _log_u_tail(x: mpf, W: int, K: int) -> mpf:
    return W * _geom_tail(x, K) / (_DEN_FLOOR * (K + 1))


def _saddle_tail(x: mpf, W: int, K: int) -> mpf:
    # |summand| <= W t (1 + t^2 + 2t) / 0.47^2 <= 6 W t  for t < 0.382
    return 6 * W * _geom_tail(x, K)


def _g_tail(x: mpf, W: int, K: int) -> mpf:
    # |numerator| <= 13 k W t, |den|^3 >= 0.47^3 > 0.1
    return 130 * W * _linear_geom_tail(x, K)


# -- raw (uncertified) evaluators --------------------------------------------

def _log_u(x: mpf, zp: ShiftParam, ctx: PrecisionContext) -> SeriesValue:
    fz, fz1, W = _weights(zp)
    return _sum_series(lambda k: log_u_term(k, x, fz, fz1), lambda K: _log_u_tail(x, W, K), 1, ctx)


def _saddle_lhs(x: mpf, zp: ShiftParam, ctx: PrecisionContext) -> SeriesValue:
    fz, fz1, W = _weights(zp)
    return _sum_series(lambda k: saddle_term(k, x, fz, fz1), lambda K: _saddle_tail(x, W, K), 1, ctx)


def _g_sum(x: mpf, zp: ShiftParam, ctx: PrecisionContext, k0: int = 1) -> SeriesValue:
    fz, fz1, W = _weights(zp)
    return _sum_series(lambda k: g_term_value(k, x, fz, fz1), lambda K: _g_tail(x, W, K), k0, ctx)


def _b_of_x(x: mpf, zp: ShiftParam, ctx: PrecisionContext) -> SeriesValue:
    first = _saddle_lhs(x, zp, ctx)
    second = _g_sum(x, zp, ctx)
    return SeriesValue(first.value + second.value, max(first.truncation_K, second.truncation_K),
                       first.tail_bound + second.tail_bound)


def _certified(raw: Callable[[mpf, ShiftParam, PrecisionContext], SeriesValue], x,
               z: ShiftLike, ctx: PrecisionContext, allow_boundary: bool = False) -> SeriesValue:
    zp = as_shift(z)

    def run(c: PrecisionContext) -> SeriesValue:
        with c.workdps():
            xv = mpf(x)
            _check_x(xv, allow_boundary)
            return raw(xv, zp, c)

    high = certify(run, ctx, key=lambda s: s.value)
    with ctx.workdps():
        return SeriesValue(+high.value, high.truncation_K, high.tail_bound)


# -- public API -----------------------------------------------------------------

def log_u(x, z: ShiftLike, ctx: PrecisionContext) -> SeriesValue:
    """``log U(x) = sum_k x^k (F_z x^k + F_{z+1}) / (k (1 - x^k - x^{2k}))``."""
    return _certified(_log_u, x, z, ctx)


def saddle_lhs(x, z: ShiftLike, ctx: PrecisionContext) -> SeriesValue:
    """``x U'(x) / U(x)``, the left-hand side of the saddle-point equation."""
    return _certified(_saddle_lhs, x, z, ctx)


def b_of_x(x, z: ShiftLike, ctx: PrecisionContext) -> SeriesValue:
    """``x U'/U + x^2 (log U)''``."""
    return _certified(_b_of_x, x, z, ctx)


def g_term(k: int, x, z: ShiftLike, ctx: PrecisionContext) -> mpf:
    """One member ``G(k, x)`` of the series for ``x^2 (log U)''``.

    ``x = phi - 1`` is accepted for ``k >= 2``, where the denominator does
    not vanish.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    zp = as_shift(z)
    with ctx.workdps():
        xv = mpf(x)
        _check_x(xv, allow_boundary=k >= 2)
        return g_term_value(k, xv, zp.f_z, zp.f_z1)


def g_tail_sum(x, z: ShiftLike, ctx: PrecisionContext, k0: int = 2) -> SeriesValue:
    """``sum_{k >= k0} G(k, x)``; ``x = phi - 1`` allowed when ``k0 >= 2``."""
    return _certified(lambda xv, zp, c: _g_sum(xv, zp, c, k0), x, z, ctx, allow_boundary=k0 >= 2)
