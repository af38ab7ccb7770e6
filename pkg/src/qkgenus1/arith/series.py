"""Truncated multivariate Taylor series at the origin.

A series lives on a :class:`SeriesLayout`: every exponent vector with
``e[i] <= orders[i]`` and, optionally, ``sum(e) <= cap``. Coefficients are
stored as integer numerators over one common positive denominator, which
keeps the hot kernels in integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .. import kernels
from ..errors import ArityError, InputError
from .polynomial import FIELD_BITS, FIELD_MASK, Polynomial, grlex_key


class SeriesLayout:
    """Index of the exponent vectors kept by a truncation.

    Entries are sorted by mixed-radix code with the last variable most
    significant, so ``alpha - beta`` precedes ``alpha`` for ``beta >= 0``.
    """

    def __init__(self, orders: Tuple[int, ...], cap: Optional[int]):
        if any(o < 0 for o in orders):
            raise InputError("truncation orders must be nonnegative")
        if cap is not None and cap < 0:
            raise InputError("total-degree cap must be nonnegative")
        self.orders = tuple(orders)
        self.cap = cap
        self.nvars = len(orders)
        self.orders_array = np.array(orders, dtype=np.int64)
        strides = np.ones(self.nvars, dtype=np.int64)
        for i in range(1, self.nvars):
            strides[i] = strides[i - 1] * (orders[i - 1] + 1)
        self.strides = strides
        exps = np.zeros((1, 0), dtype=np.int64)
        for o in orders:
            sums = exps.sum(axis=1)
            blocks = []
            for e in range(o + 1):
                keep = exps if cap is None else exps[sums + e <= cap]
                if len(keep):
                    col = np.full((len(keep), 1), e, dtype=np.int64)
                    blocks.append(np.hstack([keep, col]))
            exps = np.vstack(blocks)
        codes = exps @ strides if self.nvars else np.zeros(1, dtype=np.int64)
        order = np.argsort(codes, kind="stable")
        self.exps = np.ascontiguousarray(exps[order])
        self.codes = np.ascontiguousarray(codes[order])
        self.size = len(self.codes)
        self._tuples = None
        self._index = None
        self._shift_cache: Dict[Tuple[int, ...], np.ndarray] = {}

    @property
    def exps_tuples(self):
        if self._tuples is None:
            self._tuples = [tuple(row) for row in self.exps.tolist()]
        return self._tuples

    @property
    def index(self) -> Dict[Tuple[int, ...], int]:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.exps_tuples)}
        return self._index

    def locate(self, exps: np.ndarray) -> np.ndarray:
        """Indices of the given exponent rows, -1 where outside the layout."""
        inside = np.all((exps >= 0) & (exps <= self.orders_array), axis=1)
        if self.cap is not None:
            inside &= exps.sum(axis=1) <= self.cap
        codes = np.where(inside, exps @ self.strides if self.nvars else 0, 0)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, self.size - 1)
        found = inside & (self.codes[pos] == codes)
        return np.where(found, pos, -1).astype(np.int64)

    def shift_table(self, beta: Tuple[int, ...]) -> np.ndarray:
        """Row of indices of ``alpha - beta`` for every entry ``alpha``."""
        tab = self._shift_cache.get(beta)
        if tab is None:
            tab = self.locate(self.exps - np.array(beta, dtype=np.int64))
            self._shift_cache[beta] = tab
        return tab

    def shift_tables(self, betas) -> np.ndarray:
        if not betas:
            return np.zeros((0, self.size), dtype=np.int64)
        return np.ascontiguousarray(np.vstack([self.shift_table(b) for b in betas]))


@lru_cache(maxsize=256)
def get_layout(orders: Tuple[int, ...], cap: Optional[int]) -> SeriesLayout:
    return SeriesLayout(tuple(orders), cap)


def _poly_terms(p: Polynomial):
    """(exponent tuple, coefficient) pairs of a polynomial, unordered."""
    n = p.arity
    for k, c in p.packed_items():
        yield tuple((k >> (FIELD_BITS * i)) & FIELD_MASK for i in range(n)), c


def _reduce(num, den: int):
    g = den
    for v in num:
        if g == 1:
            break
        if v:
            g = gcd(g, v)
    if g > 1:
        num = [v // g for v in num]
        den //= g
    return tuple(num), den


class TruncatedSeries:
    """Exact truncated series; immutable."""

    __slots__ = ("layout", "_num", "_den")

    def __init__(self, layout: SeriesLayout, num: Sequence[int], den: int = 1):
        if len(num) != layout.size:
            raise InputError("coefficient vector does not match layout")
        if den <= 0:
            raise InputError("denominator must be positive")
        self.layout = layout
        self._num, self._den = _reduce(list(num), den)

    @classmethod
    def _from_values(cls, layout: SeriesLayout, values) -> "TruncatedSeries":
        """From a list of ints/Fractions."""
        d, exact = 1, True
        for v in values:
            if type(v) is not int:
                exact = False
                d = lcm(d, Fraction(v).denominator)
        if exact:
            return cls(layout, values, 1)
        return cls(layout, [int(Fraction(v) * d) for v in values], d)

    @classmethod
    def zero(cls, orders: Sequence[int], cap: Optional[int] = None) -> "TruncatedSeries":
        layout = get_layout(tuple(orders), cap)
        return cls(layout, [0] * layout.size)

    @classmethod
    def from_polynomial(cls, p: Polynomial, orders: Sequence[int], cap: Optional[int] = None,
                        strict: bool = False) -> "TruncatedSeries":
        """Truncate a polynomial; with ``strict`` every term must fit the layout."""
        if p.arity != len(orders):
            raise ArityError(f"polynomial arity {p.arity} vs {len(orders)} orders")
        layout = get_layout(tuple(orders), cap)
        d = p.content_denominator()
        vals = [0] * layout.size
        idx = layout.index
        for e, c in _poly_terms(p):
            i = idx.get(e)
            if i is None:
                if strict:
                    raise InputError(f"term with exponent {e} outside truncation")
                continue
            vals[i] = int(Fraction(c) * d)
        return cls(layout, vals, d)

    # -- inspection -------------------------------------------------------

    @property
    def orders(self) -> Tuple[int, ...]:
        return self.layout.orders

    @property
    def cap(self) -> Optional[int]:
        return self.layout.cap

    @property
    def arity(self) -> int:
        return self.layout.nvars

    @property
    def denominator(self) -> int:
        return self._den

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        i = self.layout.index.get(tuple(exps))
        if i is None:
            raise InputError(f"exponent {tuple(exps)} outside truncation {self.orders}, cap {self.cap}")
        return Fraction(self._num[i], self._den)

    def items(self) -> Iterator[Tuple[Tuple[int, ...], Fraction]]:
        """Nonzero coefficients in canonical grlex order."""
        rows = [(e, v) for e, v in zip(self.layout.exps_tuples, self._num) if v]
        rows.sort(key=lambda t: grlex_key(t[0]))
        for e, v in rows:
            yield e, Fraction(v, self._den)

    def as_dict(self) -> Dict[Tuple[int, ...], Fraction]:
        return dict(self.items())

    def values(self):
        """Dense coefficients in layout order (Fractions)."""
        return [Fraction(v, self._den) for v in self._num]

    def is_integral(self) -> bool:
        return self._den == 1

    def to_polynomial(self) -> Polynomial:
        return Polynomial.from_exponents(dict(self.items()), self.arity)

    def serialize(self) -> str:
        from .text import format_series

        return format_series(self)

    __str__ = serialize

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.serialize()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.layout is other.layout and self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash((self.orders, self.cap, self._num, self._den))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.layout is not other.layout:
            raise ArityError("series have different truncations")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        d = lcm(self._den, other._den)
        a, b = d // self._den, d // other._den
        return TruncatedSeries(self.layout, [a * x + b * y for x, y in zip(self._num, other._num)], d)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.layout, [-x for x in self._num], self._den)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries(self.layout, [x * c.numerator for x in self._num], self._den * c.denominator)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Polynomial):
            return self.mul_polynomial(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        out = kernels.mul_dense(list(self._num), list(other._num), self.layout)
        return TruncatedSeries(self.layout, out, self._den * other._den)

    __rmul__ = __mul__

    def mul_polynomial(self, p: Polynomial) -> "TruncatedSeries":
        if p.arity != self.arity:
            raise ArityError(f"polynomial arity {p.arity} vs series arity {self.arity}")
        d = p.content_denominator()
        betas, coeffs = [], []
        for e, c in _poly_terms(p):
            betas.append(e)
            coeffs.append(int(Fraction(c) * d))
        if not betas:
            return TruncatedSeries(self.layout, [0] * self.layout.size)
        out = kernels.mul_sparse(list(self._num), self.layout.shift_tables(betas), coeffs)
        return TruncatedSeries(self.layout, out, self._den * d)

    def div_polynomial(self, p: Polynomial, times: int = 1) -> "TruncatedSeries":
        """Multiply by ``p ** -times``; ``p`` needs a nonzero constant term."""
        if p.arity != self.arity:
            raise ArityError(f"polynomial arity {p.arity} vs series arity {self.arity}")
        c0 = p.constant_term()
        if c0 == 0:
            raise InputError("cannot expand 1/p at the origin when p(0) = 0")
        unit = p.scale(1 / c0)
        betas, coeffs = [], []
        for e, c in _poly_terms(unit):
            if any(e):
                betas.append(e)
                coeffs.append(c)
        out = self
        if betas:
            tables = self.layout.shift_tables(betas)
            for _ in range(times):
                vals = kernels.div_sparse(list(out._num), tables, coeffs)
                out = TruncatedSeries._from_values(self.layout, vals).scale(Fraction(1, out._den))
        if c0 != 1:
            out = out.scale(c0 ** -times)
        return out

    # -- reshaping --------------------------------------------------------

    def truncate(self, orders: Sequence[int], cap: Optional[int] = None) -> "TruncatedSeries":
        """Restrict to a smaller truncation (every kept entry must be known)."""
        orders = tuple(orders)
        if len(orders) != self.arity:
            raise ArityError("orders length differs from series arity")
        if any(o > s for o, s in zip(orders, self.orders)):
            raise InputError("cannot truncate to a larger order")
        self._check_cap(orders, cap)
        layout = get_layout(orders, cap)
        pos = self.layout.locate(layout.exps)
        num = self._num
        return TruncatedSeries(layout, [num[j] if j >= 0 else 0 for j in pos.tolist()], self._den)

    def _check_cap(self, orders, cap) -> None:
        if self.cap is None:
            return
        reach = sum(orders) if cap is None else min(cap, sum(orders))
        if reach > self.cap:
            raise InputError("target total degree exceeds source cap")

    def at_zero(self, i: int) -> "TruncatedSeries":
        col = self.layout.exps[:, i]
        return TruncatedSeries(self.layout, [0 if e else v for v, e in zip(self._num, col.tolist())], self._den)

    def regular_part(self, i: int) -> "TruncatedSeries":
        """``(F - F|_{x_i=0}) / x_i`` on the truncation one lower in ``x_i`` and in total degree."""
        if self.orders[i] == 0:
            raise InputError("no room to shift: order in this variable is 0")
        orders = list(self.orders)
        orders[i] -= 1
        cap = None if self.cap is None else self.cap - 1
        layout = get_layout(tuple(orders), cap)
        src = layout.exps.copy()
        src[:, i] += 1
        pos = self.layout.locate(src)
        num = self._num
        return TruncatedSeries(layout, [num[j] if j >= 0 else 0 for j in pos.tolist()], self._den)

    def rename(self, mapping: Sequence[int], orders: Sequence[int], cap: Optional[int] = None) -> "TruncatedSeries":
        """Send variable ``j`` to slot ``mapping[j]`` of a truncation with the given orders.

        Unmapped slots get exponent 0. Entries of the target truncation
        that are not images of known entries must have a zero source, so
        the caller has to supply a source at least as deep in each mapped
        variable.
        """
        if len(mapping) != self.arity:
            raise ArityError("renaming map must cover every variable")
        layout = get_layout(tuple(orders), cap)
        for j, dst in enumerate(mapping):
            if orders[dst] > self.orders[j]:
                raise InputError("target truncation deeper than source")
        self._check_cap(orders, cap)
        mapped = np.zeros(layout.nvars, dtype=bool)
        mapped[list(mapping)] = True
        src = layout.exps[:, list(mapping)]
        valid = np.all(layout.exps[:, ~mapped] == 0, axis=1) if (~mapped).any() else np.ones(layout.size, bool)
        pos = self.layout.locate(src)
        pos = np.where(valid, pos, -1)
        num = self._num
        return TruncatedSeries(layout, [num[j] if j >= 0 else 0 for j in pos.tolist()], self._den)


def taylor_expand(f, orders: Sequence[int], cap: Optional[int] = None) -> TruncatedSeries:
    """Taylor coefficients of a :class:`RationalFunction` up to the given truncation.

    Each denominator factor ``p`` with exponent ``e`` is applied by ``e``
    successive divisions of the running series by ``p``.
    """
    orders = tuple(orders)
    if len(orders) != f.arity:
        raise ArityError(f"{len(orders)} orders for a function of arity {f.arity}")
    s = TruncatedSeries.from_polynomial(f.numerator, orders, cap)
    for fac, e in f.denominator:
        s = s.div_polynomial(fac, e)
    return s
