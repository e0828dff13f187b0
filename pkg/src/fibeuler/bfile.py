"""OEIS b-file text format: one ``index value`` pair per line."""

from __future__ import annotations

import re
from typing import Iterable, Union

import gmpy2

_INT = re.compile(r"[+-]?\d+")


class BFileError(ValueError):
    """Malformed b-file content."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def parse_bfile(data: Union[bytes, str]) -> list[tuple[int, int]]:
    """Parse b-file text into ``(index, value)`` pairs.

    Blank lines and lines starting with ``#`` are skipped.  Indices must be
    consecutive starting from whatever the first data line says.
    """
    if isinstance(data, bytes):
        data = data.decode("ascii")
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise BFileError(f"expected 'index value', got {raw!r}", lineno)
        if not (_INT.fullmatch(fields[0]) and _INT.fullmatch(fields[1])):
            raise BFileError(f"non-integer field in {raw!r}", lineno)
        # gmpy2 parses past CPython's int/str digit limit
        index, value = int(fields[0]), int(gmpy2.mpz(fields[1]))
        if pairs and index != pairs[-1][0] + 1:
            raise BFileError(f"gap at index {pairs[-1][0] + 1} (found {index})", lineno)
        pairs.append((index, value))
    return pairs


def format_bfile(values: Iterable[int], start: int = 0, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.extend(f"{i} {gmpy2.mpz(v).digits(10)}" for i, v in enumerate(values, start=start))
    return "".join(line + "\n" for line in lines)
