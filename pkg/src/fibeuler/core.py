"""Precision handling plus the Fibonacci and golden-ratio primitives."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, TypeVar, Union

import mpmath
from mpmath import mpf

T = TypeVar("T")

GUARD_DIGITS = 10
ESCALATION_DIGITS = 20


class PrecisionError(ArithmeticError):
    """Two runs at different working precision disagree on the requested digits."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, requested digits and series truncation tolerance.

    ``work_digits`` defaults to ``target_digits + 15`` and ``tail_tol`` to
    ``10**-(target_digits + 5)``.  Both are checked against the guard rules
    on construction.
    """

    target_digits: int = 30
    work_digits: int = 0
    tail_tol: mpf = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise ValueError(f"target_digits must be positive, got {self.target_digits}")
        if not self.work_digits:
            object.__setattr__(self, "work_digits", self.target_digits + 15)
        if self.work_digits < self.target_digits + GUARD_DIGITS:
            raise ValueError(
                f"work_digits={self.work_digits} leaves fewer than {GUARD_DIGITS} guard digits "
                f"over target_digits={self.target_digits}"
            )
        if self.tail_tol is None:
            object.__setattr__(self, "tail_tol", mpmath.power(10, -(self.target_digits + 5)))
        else:
            object.__setattr__(self, "tail_tol", mpf(self.tail_tol))
        if not (0 < self.tail_tol <= mpmath.power(10, -self.target_digits)):
            raise ValueError(f"tail_tol must lie in (0, 1e-{self.target_digits}]")

    def workdps(self):
        """Context manager switching mpmath to this context's working precision."""
        return mpmath.workdps(self.work_digits)

    def escalated(self, extra: int = ESCALATION_DIGITS) -> "PrecisionContext":
        """Same target, ``extra`` more working digits and a tighter tail tolerance."""
        return replace(
            self,
            work_digits=self.work_digits + extra,
            tail_tol=self.tail_tol * mpmath.power(10, -extra),
        )

    @property
    def tolerance(self) -> mpf:
        return mpmath.power(10, -self.target_digits)


@dataclass(frozen=True)
class ShiftParam:
    """The shift ``z`` in the weight sequence ``F_{k+z}``; ``z >= -1``."""

    z: int

    def __post_init__(self) -> None:
        if isinstance(self.z, bool) or not isinstance(self.z, int):
            raise TypeError(f"z must be an int, got {self.z!r}")
        if self.z < -1:
            raise ValueError(f"z must be >= -1, got {self.z}")

    @property
    def f_z(self) -> int:
        return fibonacci(self.z)

    @property
    def f_z1(self) -> int:
        return fibonacci(self.z + 1)

    def weight(self, k: int) -> int:
        """Exponent ``F_{k+z}`` of the factor ``(1 - x^k)^-1``."""
        return fibonacci(k + self.z)


ShiftLike = Union[int, ShiftParam]


def as_shift(z: ShiftLike) -> ShiftParam:
    return z if isinstance(z, ShiftParam) else ShiftParam(z)


def _fib_pair(m: int) -> tuple[int, int]:
    # (F_m, F_{m+1}) by fast doubling
    if m == 0:
        return 0, 1
    a, b = _fib_pair(m >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if m & 1:
        return d, c + d
    return c, d


def fibonacci(m: int) -> int:
    """Exact ``F_m`` for ``m >= -1`` with ``F_{-1} = 1``."""
    if m < -1:
        raise ValueError(f"fibonacci is defined here for m >= -1, got {m}")
    if m == -1:
        return 1
    return _fib_pair(m)[0]


def fibonacci_iterative(m: int) -> int:
    """Reference ``F_m`` by plain iteration; used to check :func:`fibonacci`."""
    if m < -1:
        raise ValueError(f"fibonacci is defined here for m >= -1, got {m}")
    prev, cur = 1, 0  # F_{-1}, F_0
    for _ in range(m + 1):
        prev, cur = cur, prev + cur
    return prev


def fibonacci_range(start: int, stop: int) -> list[int]:
    """``[F_start, ..., F_{stop-1}]``, ``start >= -1``."""
    if start < -1:
        raise ValueError(f"fibonacci is defined here for m >= -1, got {start}")
    if stop <= start:
        return []
    a = fibonacci(start)
    b = fibonacci(start + 1)
    out = []
    for _ in range(stop - start):
        out.append(a)
        a, b = b, a + b
    return out


def golden_ratio(ctx: PrecisionContext) -> mpf:
    """``(1 + sqrt 5) / 2`` at ``ctx.work_digits``."""
    with ctx.workdps():
        return (1 + mpmath.sqrt(5)) / 2


def agreeing_digits(a: mpf, b: mpf) -> int:
    """Number of leading significant decimal digits on which ``a`` and ``b`` agree."""
    diff = abs(a - b)
    if diff == 0:
        return mpmath.mp.dps
    scale = max(abs(a), abs(b), mpf(1))
    return max(0, int(mpmath.floor(-mpmath.log10(diff / scale))))


def certify(compute: Callable[[PrecisionContext], T], ctx: PrecisionContext,
            key: Callable[[T], mpf] = lambda v: v) -> T:
    """Run ``compute`` at ``ctx`` and at ``ctx.escalated()``.

    Returns the escalated result when both agree to ``ctx.target_digits``
    (relative to ``max(1, |value|)``); raises :class:`PrecisionError` otherwise.
    """
    low = compute(ctx)
    high_ctx = ctx.escalated()
    high = compute(high_ctx)
    with high_ctx.workdps():
        a, b = key(low), key(high)
        scale = max(abs(b), mpf(1))
        if abs(a - b) > ctx.tolerance * scale:
            raise PrecisionError(
                f"escalation from {ctx.work_digits} to {high_ctx.work_digits} digits changed the "
                f"value beyond 1e-{ctx.target_digits}: {mpmath.nstr(a, 20)} vs {mpmath.nstr(b, 20)}"
            )
    return high
