"""Euler transform of shifted Fibonacci numbers: exact terms, saddle points,
asymptotic constants and exact-vs-asymptotic verification."""

from fibeuler.core import (
    PrecisionContext,
    PrecisionError,
    ShiftParam,
    fibonacci,
    golden_ratio,
)
from fibeuler.exact import ExactSequence, euler_transform, product_expansion_oracle
from fibeuler.logseries import SeriesValue, b_of_x, g_term, log_u, saddle_lhs
from fibeuler.saddle import SaddlePoint, r_expansion, solve_saddle
from fibeuler.constants import (
    AsymptoticConstants,
    asymptotic_a,
    asymptotic_constants,
    constant_c,
    constant_S,
    constant_S_hyperbolic,
    log_asymptotic_a,
)
from fibeuler.verify import RatioReport, emit_csv, emit_svg, ratio_table

__all__ = [
    "AsymptoticConstants",
    "ExactSequence",
    "PrecisionContext",
    "PrecisionError",
    "RatioReport",
    "SaddlePoint",
    "SeriesValue",
    "ShiftParam",
    "asymptotic_a",
    "asymptotic_constants",
    "b_of_x",
    "constant_S",
    "constant_S_hyperbolic",
    "constant_c",
    "emit_csv",
    "emit_svg",
    "euler_transform",
    "fibonacci",
    "g_term",
    "golden_ratio",
    "log_asymptotic_a",
    "log_u",
    "product_expansion_oracle",
    "r_expansion",
    "ratio_table",
    "saddle_lhs",
    "solve_saddle",
]
