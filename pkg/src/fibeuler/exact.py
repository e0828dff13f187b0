"""Exact coefficients of U(x) = prod_{k>=1} (1 - x^k)^(-F_{k+z})."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Union

import gmpy2

from fibeuler.bfile import format_bfile, parse_bfile
from fibeuler.core import ShiftLike, ShiftParam, as_shift, fibonacci_range

# below this many coefficients the convolution is done term by term
_BASE_CASE = 48
# packed operands smaller than this (bits) are multiplied as Python ints
_GMP_THRESHOLD = 1 << 14


class ExactnessError(RuntimeError):
    """``n * a_n`` came out not divisible by ``n``: an engine bug, never bad input."""


@dataclass(frozen=True)
class ExactSequence:
    z: ShiftParam
    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.terms or self.terms[0] != 1:
            raise ValueError("terms[0] must be 1 (empty product)")
        if len(self.terms) > 1 and self.terms[1] != self.z.f_z1:
            raise ValueError(f"terms[1] must equal F_(1+z) = {self.z.f_z1}, got {self.terms[1]}")
        if any(t < 0 for t in self.terms):
            raise ValueError("terms must be nonnegative")

    @property
    def N(self) -> int:
        return len(self.terms) - 1

    def __getitem__(self, n: int) -> int:
        return self.terms[n]

    def __len__(self) -> int:
        return len(self.terms)

    def to_bfile(self) -> str:
        return format_bfile(self.terms)

    def write_bfile(self, path: Union[str, os.PathLike]) -> None:
        Path(path).write_text(self.to_bfile(), encoding="ascii", newline="\n")

    @classmethod
    def from_bfile(cls, z: ShiftLike, data: Union[bytes, str]) -> "ExactSequence":
        pairs = parse_bfile(data)
        if pairs and pairs[0][0] != 0:
            raise ValueError(f"ExactSequence b-files start at index 0, got {pairs[0][0]}")
        return cls(as_shift(z), tuple(v for _, v in pairs))


def divisor_weight_sums(weight: Callable[[int], int] | Sequence[int], N: int) -> list[int]:
    """``c_m = sum_{d | m} d * w_d`` for ``m = 0..N`` (``c_0 = 0``), by sieve."""
    w = weight if callable(weight) else weight.__getitem__
    c = [0] * (N + 1)
    for d in range(1, N + 1):
        wd = d * w(d)
        if wd:
            for m in range(d, N + 1, d):
                c[m] += wd
    return c


def _pack(values: Sequence[int], slot_bytes: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(slot_bytes, "little") for v in values), "little")


def _unpack(packed: int, slot_bytes: int, count: int) -> list[int]:
    raw = packed.to_bytes(slot_bytes * count, "little")
    return [int.from_bytes(raw[i:i + slot_bytes], "little") for i in range(0, len(raw), slot_bytes)]


def _max_bits(values: Sequence[int]) -> int:
    return max((v.bit_length() for v in values), default=0)


def poly_mul_nonneg(p: Sequence[int], q: Sequence[int], terms: int | None = None) -> list[int]:
    """Product of two polynomials with nonnegative integer coefficients.

    Uses Kronecker substitution: both operands are packed into single big
    integers with slots wide enough that no carry crosses a slot boundary.
    Returns the first ``terms`` coefficients (all of them by default).
    """
    if not p or not q:
        return [0] * (terms or 0)
    full = len(p) + len(q) - 1
    terms = full if terms is None else terms
    slot_bits = _max_bits(p) + _max_bits(q) + min(len(p), len(q)).bit_length() + 1
    slot_bytes = (slot_bits + 7) // 8
    pp, qq = _pack(p, slot_bytes), _pack(q, slot_bytes)
    if pp.bit_length() + qq.bit_length() > _GMP_THRESHOLD:
        prod = int(gmpy2.mpz(pp) * gmpy2.mpz(qq))
    else:
        prod = pp * qq
    out = _unpack(prod, slot_bytes, full)
    if terms <= full:
        return out[:terms]
    return out + [0] * (terms - full)


def _exact_div(s: int, n: int) -> int:
    q, r = divmod(s, n)
    if r:
        raise ExactnessError(f"n*a_n not divisible by n at n={n}")
    return q


def _recurrence_naive(c: Sequence[int], N: int) -> list[int]:
    a = [1]
    for n in range(1, N + 1):
        s = sum(map(int.__mul__, c[1:n + 1], reversed(a)))
        a.append(_exact_div(s, n))
    return a


def _recurrence_fast(c: Sequence[int], N: int) -> list[int]:
    # online convolution n*a_n = sum_k c_k a_{n-k}, divide and conquer over n
    a = [0] * (N + 1)
    acc = [0] * (N + 1)

    def solve(lo: int, hi: int) -> None:
        if hi - lo <= _BASE_CASE:
            for n in range(lo, hi):
                if n == 0:
                    a[0] = 1
                    continue
                s = acc[n]
                for j in range(lo, n):
                    s += c[n - j] * a[j]
                a[n] = _exact_div(s, n)
            return
        mid = (lo + hi) // 2
        solve(lo, mid)
        # contributions of a[lo:mid] to acc[mid:hi]
        prod = poly_mul_nonneg(a[lo:mid], c[:hi - lo], terms=hi - lo)
        for n in range(mid, hi):
            acc[n] += prod[n - lo]
        solve(mid, hi)

    solve(0, N + 1)
    return a


def euler_transform_weights(weights: Sequence[int], N: int, method: str = "fast") -> list[int]:
    """Coefficients ``a_0..a_N`` of ``prod_k (1 - x^k)^(-weights[k])``.

    ``weights[0]`` is ignored; weights must be nonnegative.  ``method`` is
    ``"fast"`` (divide and conquer with packed big-integer products) or
    ``"naive"`` (quadratic recurrence).
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    c = divisor_weight_sums(weights, N)
    if method == "fast":
        return _recurrence_fast(c, N)
    if method == "naive":
        return _recurrence_naive(c, N)
    raise ValueError(f"unknown method {method!r}")


def fibonacci_weights(z: ShiftParam, N: int) -> list[int]:
    """``[F_z, F_{1+z}, ..., F_{N+z}]`` so that index k holds the weight of factor k."""
    return fibonacci_range(z.z, N + z.z + 1)


def euler_transform(z: ShiftLike, N: int, method: str = "fast") -> ExactSequence:
    """Exact ``a_0..a_N`` for the shift ``z``."""
    zp = as_shift(z)
    return ExactSequence(zp, tuple(euler_transform_weights(fibonacci_weights(zp, N), N, method)))


def product_expansion_oracle(z: ShiftLike, N: int) -> ExactSequence:
    """Expand ``prod_{k=1}^N (1 - x^k)^(-F_{k+z}) mod x^(N+1)`` factor by factor.

    Each factor is the binomial series ``sum_j C(e+j-1, j) x^(kj)``; meant
    for small N as an independent check on :func:`euler_transform`.
    """
    zp = as_shift(z)
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    poly = [1] + [0] * N
    for k in range(1, N + 1):
        e = zp.weight(k)
        if e == 0:
            continue
        series = [math.comb(e + j - 1, j) for j in range(N // k + 1)]
        new = [0] * (N + 1)
        for n in range(N + 1):
            s = 0
            for j in range(n // k + 1):
                s += series[j] * poly[n - k * j]
            new[n] = s
        poly = new
    return ExactSequence(zp, tuple(poly))
