"""Exact arithmetic: polynomials, factored rational functions, truncated series."""

from .polynomial import Polynomial, poly_exact_div, poly_mul
from .ratfunc import (
    DenominatorFactor,
    RationalFunction,
    eval_at,
    extract_regular_part,
    invert_variable,
    normalize,
    ratfn_add,
    ratfn_mul,
)
from .series import SeriesLayout, TruncatedSeries, get_layout, taylor_expand
from .text import format_ratfn, parse_polynomial, parse_ratfn, parse_series, var_name

__all__ = [
    "DenominatorFactor",
    "Polynomial",
    "RationalFunction",
    "SeriesLayout",
    "TruncatedSeries",
    "eval_at",
    "extract_regular_part",
    "format_ratfn",
    "get_layout",
    "invert_variable",
    "normalize",
    "parse_polynomial",
    "parse_ratfn",
    "parse_series",
    "poly_exact_div",
    "poly_mul",
    "ratfn_add",
    "ratfn_mul",
    "taylor_expand",
    "var_name",
]
