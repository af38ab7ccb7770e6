"""Canonical text form for polynomials, rational functions and series.

Variables print as ``q`` (index 0) and ``q1``, ``q2``, ... Terms appear in
grlex order, coefficients as ``a/b`` in lowest terms. A rational function
with a nontrivial denominator prints as ``(NUM)/((F1)^e1*(F2))``. Equal
values built the same way always print identically, which is what the
cache file and the ``genfun`` command rely on.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import InputError


def var_name(i: int) -> str:
    return "q" if i == 0 else f"q{i}"


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(exps: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(var_name(i))
        elif e > 1:
            parts.append(f"{var_name(i)}^{e}")
    return "*".join(parts)


def format_terms(terms: Sequence[Tuple[Sequence[int], Fraction]]) -> str:
    if not terms:
        return "0"
    out: List[str] = []
    for idx, (exps, c) in enumerate(terms):
        mono = _format_monomial(exps)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def format_polynomial(p) -> str:
    return format_terms(list(p.terms()))


def format_ratfn(f) -> str:
    num = format_polynomial(f.numerator)
    if not f.denominator:
        return num
    dens = []
    for fac, e in f.denominator:
        s = f"({format_polynomial(fac)})"
        dens.append(s if e == 1 else f"{s}^{e}")
    return f"({num})/({'*'.join(dens)})"


def format_series(s) -> str:
    orders = ",".join(str(o) for o in s.orders)
    cap = "none" if s.cap is None else str(s.cap)
    return f"[orders {orders} | cap {cap}] {format_terms(list(s.items()))}"


# -- parsing -----------------------------------------------------------------
# Polynomials never contain parentheses, so a rational function splits into
# parenthesized polynomial bodies first and each body is scanned term by term.

_TERM = re.compile(
    r"\s*([+-])?\s*"
    r"(?:(\d+)(?:\s*/\s*(\d+))?)?"
    r"(\s*\*\s*)?"
    r"(q\d*(?:\s*\^\s*\d+)?(?:\s*\*\s*q\d*(?:\s*\^\s*\d+)?)*)?"
    r"\s*"
)
_VAR = re.compile(r"q(\d*)(?:\s*\^\s*(\d+))?")
_FACTOR = re.compile(r"\s*\(([^()]*)\)(?:\s*\^\s*(\d+))?\s*")


def _scan_terms(text: str) -> Tuple[Dict[int, object], int]:
    """Packed-monomial -> coefficient map of a polynomial body, plus the top variable index."""
    from .polynomial import FIELD_BITS

    out: Dict[int, object] = {}
    pos, end, top = 0, len(text), -1
    if not text.strip():
        raise InputError("empty polynomial")
    first = True
    while pos < end:
        m = _TERM.match(text, pos)
        sign, num, den, star, mono = m.groups()
        if (num is None and mono is None) or (not first and sign is None) or (star and not (num and mono)) \
                or (num and mono and not star):
            raise InputError(f"cannot parse polynomial near offset {pos} in {text[:60]!r}")
        first = False
        if den is not None:
            if int(den) == 0:
                raise InputError("zero denominator in coefficient")
            c = Fraction(int(num), int(den))
        else:
            c = int(num) if num else 1
        key = 0
        if mono:
            for v in _VAR.finditer(mono):
                g1, g2 = v.groups()
                if g1 == "0":
                    raise InputError("variable q0 is spelled q")
                idx = int(g1) if g1 else 0
                key += (int(g2) if g2 else 1) << (FIELD_BITS * idx)
                if idx > top:
                    top = idx
        out[key] = out.get(key, 0) + (-c if sign == "-" else c)
        pos = m.end()
    return out, top


def _build(terms: Dict[int, object], top: int, arity: int):
    from .polynomial import Polynomial

    if top >= arity:
        raise InputError(f"variable {var_name(top)} outside arity {arity}")
    return Polynomial(terms, arity)


def parse_polynomial(text: str, arity: Optional[int] = None):
    terms, top = _scan_terms(text)
    return _build(terms, top, max(top + 1, 1) if arity is None else arity)


def parse_ratfn(text: str, arity: Optional[int] = None):
    from .ratfunc import RationalFunction

    text = text.strip()
    if not text.startswith("("):
        return RationalFunction(parse_polynomial(text, arity))
    m = re.fullmatch(r"\(([^()]*)\)\s*/\s*\((.*)\)", text, re.S)
    if not m:
        raise InputError("rational function must look like (NUM)/((F1)^e*(F2)...)")
    num, top = _scan_terms(m.group(1))
    num_top = top
    factors = []
    body, pos = m.group(2), 0
    while True:
        f = _FACTOR.match(body, pos)
        if not f:
            raise InputError(f"cannot parse denominator near offset {pos}")
        terms, t = _scan_terms(f.group(1))
        top = max(top, t)
        e = int(f.group(2)) if f.group(2) else 1
        if e == 0:
            raise InputError("denominator exponents must be positive")
        factors.append((terms, t, e))
        pos = f.end()
        if pos == len(body):
            break
        if body[pos] != "*":
            raise InputError(f"expected '*' between denominator factors at offset {pos}")
        pos += 1
    n = arity if arity is not None else max(top + 1, 1)
    return RationalFunction(_build(num, num_top, n), [(_build(fac, t, n), e) for fac, t, e in factors])


_SERIES_HEADER = re.compile(r"^\[orders ([\d,]+) \| cap (none|\d+)\]\s*(.*)$", re.S)


def parse_series(text: str):
    from .series import TruncatedSeries

    m = _SERIES_HEADER.match(text.strip())
    if not m:
        raise InputError("series text must start with '[orders ... | cap ...]'")
    orders = tuple(int(x) for x in m.group(1).split(","))
    cap = None if m.group(2) == "none" else int(m.group(2))
    poly = parse_polynomial(m.group(3), arity=len(orders))
    return TruncatedSeries.from_polynomial(poly, orders, cap, strict=True)
