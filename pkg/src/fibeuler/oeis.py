"""OEIS b-file ingestion, caching and comparison with exact terms."""

from __future__ import annotations

import os
import re
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from fibeuler.bfile import BFileError, format_bfile, parse_bfile
from fibeuler.core import ShiftLike, ShiftParam, as_shift
from fibeuler.exact import euler_transform

__all__ = [
    "BFileError",
    "CrossCheckReport",
    "FetchError",
    "KNOWN_REFS",
    "OeisRef",
    "cross_check",
    "default_cache_dir",
    "fetch_bfile",
    "format_bfile",
    "parse_bfile",
    "ref_for_shift",
]

BASE_URL_ENV = "FIBEULER_OEIS_BASE_URL"
CACHE_DIR_ENV = "FIBEULER_CACHE_DIR"
DEFAULT_BASE_URL = "https://oeis.org"
USER_AGENT = "fibeuler/0.1 (b-file cross-check)"
TIMEOUT_S = 30
MAX_RETRIES = 2

_A_NUMBER = re.compile(r"A\d{6}")


class FetchError(OSError):
    """A b-file could not be obtained from cache or network."""


@dataclass(frozen=True)
class OeisRef:
    a_number: str
    z_equiv: Optional[ShiftParam] = None

    def __post_init__(self) -> None:
        if not _A_NUMBER.fullmatch(self.a_number):
            raise ValueError(f"not an OEIS A-number: {self.a_number!r}")

    @property
    def bfile_name(self) -> str:
        return f"b{self.a_number[1:]}.txt"


KNOWN_REFS = {
    -1: OeisRef("A109509", ShiftParam(-1)),
    0: OeisRef("A166861", ShiftParam(0)),
    1: OeisRef("A200544", ShiftParam(1)),
    2: OeisRef("A260787", ShiftParam(2)),
}


def ref_for_shift(z: ShiftLike) -> OeisRef:
    zp = as_shift(z)
    try:
        return KNOWN_REFS[zp.z]
    except KeyError:
        raise ValueError(f"no OEIS sequence is associated with z={zp.z}") from None


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "fibeuler" / "oeis"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def fetch_bfile(ref: OeisRef, cache_dir: Union[str, os.PathLike, None] = None,
                offline: bool = False, base_url: Optional[str] = None) -> bytes:
    """Return the b-file for ``ref``, from ``cache_dir`` if present, else by HTTP GET.

    A fetched file is written to the cache atomically.  With ``offline``
    a cold cache raises :class:`FetchError` without touching the network.
    """
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cached = cache / ref.bfile_name
    if cached.is_file():
        return cached.read_bytes()
    if offline:
        raise FetchError(f"{ref.a_number}: not in cache {cache} and offline mode is on")
    base = (base_url or os.environ.get(BASE_URL_ENV) or DEFAULT_BASE_URL).rstrip("/")
    url = f"{base}/{ref.a_number}/{ref.bfile_name}"
    request = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
    last: Exception | None = None
    for _ in range(1 + MAX_RETRIES):
        try:
            with urllib.request.urlopen(request, timeout=TIMEOUT_S) as resp:
                data = resp.read()
            break
        except urllib.error.HTTPError as exc:
            # 4xx will not improve on retry
            if 400 <= exc.code < 500:
                raise FetchError(f"{url}: HTTP {exc.code}") from exc
            last = exc
        except (urllib.error.URLError, OSError) as exc:
            last = exc
    else:
        raise FetchError(f"{url}: {last}") from last
    parse_bfile(data)  # refuse to cache garbage
    _atomic_write(cached, data)
    return data


@dataclass(frozen=True)
class CrossCheckReport:
    z: int
    compared: int
    offset: int
    mismatch: Optional[tuple[int, int, int]] = None  # (n, exact a_n, b-file value)

    @property
    def ok(self) -> bool:
        return self.mismatch is None

    def __str__(self) -> str:
        if self.ok:
            return f"z={self.z}: {self.compared} terms agree (b-file offset {self.offset})"
        n, mine, theirs = self.mismatch
        return f"z={self.z}: mismatch at n={n}: exact {mine} vs b-file {theirs}"


def _align(pairs: Sequence[tuple[int, int]]) -> int:
    # index of a_0 in b-file numbering, anchored on a_0 = 1
    first_index, first_value = pairs[0]
    if first_index == 0 or first_value != 1:
        return 0
    return first_index


def cross_check(z: ShiftLike, count: int,
                source: Union[bytes, str, os.PathLike, Sequence[tuple[int, int]]]) -> CrossCheckReport:
    """Compare the first ``count`` exact terms against a b-file.

    ``source`` is raw b-file bytes, a path to a b-file, or already parsed
    pairs.  Fewer than ``count`` usable b-file terms is an error.
    """
    zp = as_shift(z)
    if isinstance(source, (str, os.PathLike)) and not isinstance(source, bytes):
        pairs = parse_bfile(Path(source).read_bytes())
    elif isinstance(source, bytes):
        pairs = parse_bfile(source)
    else:
        pairs = list(source)
    if not pairs:
        raise BFileError("empty b-file")
    offset = _align(pairs)
    values = {i - offset: v for i, v in pairs if i >= offset}
    if any(n not in values for n in range(count)):
        raise BFileError(f"b-file has fewer than {count} terms from a_0")
    exact = euler_transform(zp, count - 1)
    for n in range(count):
        if exact[n] != values[n]:
            return CrossCheckReport(zp.z, n + 1, offset, (n, exact[n], values[n]))
    return CrossCheckReport(zp.z, count, offset)
