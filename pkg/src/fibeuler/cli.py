"""Command-line entry point: ``fibeuler {terms,constants,saddle,verify}``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import mpmath

from fibeuler.bfile import BFileError
from fibeuler.constants import asymptotic_constants
from fibeuler.core import PrecisionContext, PrecisionError, ShiftParam, golden_ratio
from fibeuler.exact import ExactnessError, euler_transform
from fibeuler.oeis import CACHE_DIR_ENV, FetchError, cross_check, default_cache_dir, fetch_bfile, ref_for_shift
from fibeuler.saddle import SaddleError, r_expansion, solve_saddle
from fibeuler.verify import convergence_gates, emit_csv, emit_svg, ratio_table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COMPUTE = 3
EXIT_NETWORK = 4

# largest digit count the CLI will try to certify
MAX_DIGITS = 2000

DEFAULTS = {"z": 0, "digits": 30, "N": 5000, "stride": 50}


class UsageError(Exception):
    pass


def read_config(path: Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys match long flag names."""
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _shift(value: str) -> int:
    z = int(value)
    if z < -1:
        raise argparse.ArgumentTypeError(f"z must be >= -1, got {z}")
    return z


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fibeuler", description=__doc__)
    parser.add_argument("--config", type=Path, help="key=value file providing flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-z", type=_shift, help="shift z >= -1 (default 0)")

    p = sub.add_parser("terms", parents=[common], help="exact terms in b-file format")
    p.add_argument("-N", type=_nonneg, help="last index (default 5000)")
    p.add_argument("-o", "--out", type=Path, help="write to file instead of stdout")

    p = sub.add_parser("constants", parents=[common], help="print S(z), c(z) and phi")
    p.add_argument("-d", "--digits", type=_positive, help="certified digits (default 30)")

    p = sub.add_parser("saddle", parents=[common], help="solved saddle point vs its expansion")
    p.add_argument("-n", type=int, required=True, help="index n >= 1")
    p.add_argument("-d", "--digits", type=_positive)

    p = sub.add_parser("verify", parents=[common], help="exact vs asymptotic ratio table")
    p.add_argument("-N", type=_positive)
    p.add_argument("--stride", type=_positive)
    p.add_argument("-d", "--digits", type=_positive)
    p.add_argument("--full", action="store_true", help="full reproduction run, N = 20000")
    p.add_argument("--csv", type=Path)
    p.add_argument("--svg", type=Path)
    p.add_argument("--oeis", action="store_true", help="also cross-check 100 terms against the OEIS b-file")
    p.add_argument("--cache-dir", type=Path, help=f"b-file cache (env {CACHE_DIR_ENV})")
    p.add_argument("--offline", action="store_true", help="never touch the network")
    return parser


def _apply_config(args: argparse.Namespace, config: dict[str, str]) -> None:
    converters = {"z": _shift, "N": _nonneg, "stride": _positive, "digits": _positive, "n": int,
                  "csv": Path, "svg": Path, "cache_dir": Path, "out": Path,
                  "offline": lambda v: v.lower() in ("1", "true", "yes"),
                  "oeis": lambda v: v.lower() in ("1", "true", "yes"),
                  "full": lambda v: v.lower() in ("1", "true", "yes")}
    for key, raw in config.items():
        if key not in converters:
            raise UsageError(f"unknown config key {key!r}")
        if hasattr(args, key) and getattr(args, key) in (None, False):
            try:
                setattr(args, key, converters[key](raw))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config {key}: {exc}") from None
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _context(digits: int) -> PrecisionContext:
    if digits > MAX_DIGITS:
        raise UsageError(f"{digits} digits requested; this tool certifies at most {MAX_DIGITS}")
    return PrecisionContext(target_digits=digits)


def _num(x, digits: int) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def cmd_terms(args, out) -> int:
    seq = euler_transform(args.z, args.N)
    if args.out:
        seq.write_bfile(args.out)
    else:
        out.write(seq.to_bfile())
    return EXIT_OK


def cmd_constants(args, out) -> int:
    ctx = _context(args.digits)
    consts = asymptotic_constants(args.z, ctx)
    phi = golden_ratio(ctx)
    out.write(f"z = {args.z}\n")
    out.write(f"S = {_num(consts.S, args.digits)}\n")
    out.write(f"c = {_num(consts.c, args.digits)}\n")
    out.write(f"phi = {_num(phi, args.digits)}\n")
    out.write(f"certified_digits = {consts.digits_certified}\n")
    return EXIT_OK


def cmd_saddle(args, out) -> int:
    if args.n < 1:
        raise UsageError(f"n must be >= 1, got {args.n}")
    ctx = _context(args.digits)
    sp = solve_saddle(args.n, args.z, ctx)
    approx = r_expansion(args.n, args.z, ctx)
    with ctx.workdps():
        diff = sp.r - approx
        scaled = diff * mpmath.mpf(args.n) ** mpmath.mpf(1.5)
    d = args.digits
    out.write(f"n = {args.n}\nz = {args.z}\n")
    out.write(f"r_solved = {_num(sp.r, d)}\n")
    out.write(f"r_expansion = {_num(approx, d)}\n")
    out.write(f"difference = {mpmath.nstr(diff, 12)}\n")
    out.write(f"difference_times_n^1.5 = {mpmath.nstr(scaled, 12)}\n")
    out.write(f"residual = {mpmath.nstr(sp.residual, 5)}\n")
    out.write(f"truncation_K = {sp.truncation_K}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    N = 20000 if args.full else args.N
    stride = args.stride
    ctx = _context(args.digits)
    status = EXIT_OK
    report = ratio_table(args.z, N, stride, ctx)
    if args.csv:
        emit_csv(report, args.csv)
    if args.svg:
        emit_svg(report, args.svg)
    for row in report.rows[-3:]:
        out.write(f"n = {row.n}  ratio = {mpmath.nstr(row.ratio, 12)}\n")
    for gate in convergence_gates(report):
        out.write(f"[{'PASS' if gate.passed else 'FAIL'}] {gate.name}: {gate.detail}\n")
        if not gate.passed:
            status = EXIT_COMPUTE
    if args.oeis:
        ref = ref_for_shift(args.z)
        data = fetch_bfile(ref, args.cache_dir or default_cache_dir(), offline=args.offline)
        result = cross_check(args.z, 100, data)
        out.write(f"[{'PASS' if result.ok else 'FAIL'}] {ref.a_number}: {result}\n")
        if not result.ok:
            status = EXIT_COMPUTE
    return status


COMMANDS = {"terms": cmd_terms, "constants": cmd_constants, "saddle": cmd_saddle, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = read_config(args.config) if args.config else {}
        _apply_config(args, config)
        ShiftParam(args.z)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"fibeuler: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FetchError as exc:
        print(f"fibeuler: network: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except (PrecisionError, SaddleError, ExactnessError, BFileError, ArithmeticError) as exc:
        print(f"fibeuler: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
