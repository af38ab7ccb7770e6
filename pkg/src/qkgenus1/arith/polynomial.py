"""Sparse multivariate polynomials over Q.

Monomials are packed into a single Python int, ``FIELD_BITS`` bits per
variable with variable 0 (the Hodge variable ``q``) in the lowest field.
Multiplying monomials is then integer addition, and comparing packed keys
is a valid monomial order (lex, highest variable most significant), which
the exact division below relies on.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from ..errors import ArityError

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = FIELD_MASK // 2

Exponent = Tuple[int, ...]


def _clean(c):
    """Collapse integral Fractions to int so the common case stays fast."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _div(c, d):
    if type(c) is int and type(d) is int and c % d == 0:
        return c // d
    return _clean(Fraction(c) / d)


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXPONENT:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (FIELD_BITS * i)
    return key


def unpack(key: int, arity: int) -> Exponent:
    return tuple((key >> (FIELD_BITS * i)) & FIELD_MASK for i in range(arity))


def var_unit(i: int) -> int:
    return 1 << (FIELD_BITS * i)


def key_degree(key: int, i: int) -> int:
    return (key >> (FIELD_BITS * i)) & FIELD_MASK


def guard_mask(arity: int) -> int:
    """Top bit of every field; exponents never reach it."""
    return sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(arity))


def key_divides(a: int, b: int, arity: int) -> bool:
    """True when monomial ``a`` divides monomial ``b``."""
    h = guard_mask(arity)
    return (((b | h) - a) & h) == h


# Divisibility pre-check. Substituting x_j -> g**(2**(16 j)) * t sends the
# packed key k to g**k * t**deg(k), a ring map into F_p[t]. When the divisor
# is integral and primitive, Gauss's lemma keeps the quotient's denominators
# inside the dividend's, so a nonzero remainder downstairs proves that the
# division fails upstairs.
_PRIME = (1 << 61) - 1
_GEN = 3
_DEG_MOD = FIELD_MASK  # 2**16 == 1 (mod 2**16 - 1): key % _DEG_MOD is the total degree
_FILTER_MIN_TERMS = 48


_POWER_TABLES: Dict[int, list] = {}


def _power_table(i: int):
    """``h**e`` for ``e < 2**16`` with ``h = g**(2**(16 i))``, filled on demand."""
    tab = _POWER_TABLES.get(i)
    if tab is None:
        tab = _POWER_TABLES[i] = [1, pow(_GEN, 1 << (FIELD_BITS * i), _PRIME)]
    return tab


def _power(tab, e: int) -> int:
    while len(tab) <= e:
        tab.append(tab[-1] * tab[1] % _PRIME)
    return tab[e]


def _image(p: "Polynomial"):
    img = p._img
    if img is None:
        tabs = [_power_table(i) for i in range(p.arity)]
        shifts = [(FIELD_BITS * i, tabs[i]) for i in range(p.arity)]
        acc: Dict[int, int] = {}
        for k, c in p._terms.items():
            if type(c) is int:
                v = c
            else:
                if c.denominator % _PRIME == 0:
                    p._img = False
                    return False
                v = c.numerator * pow(c.denominator, -1, _PRIME)
            for s, tab in shifts:
                e = (k >> s) & FIELD_MASK
                if e:
                    v = v * (tab[e] if e < len(tab) else _power(tab, e)) % _PRIME
            d = k % _DEG_MOD
            acc[d] = acc.get(d, 0) + v
        top = max(acc) if acc else -1
        img = [0] * (top + 1)
        for d, v in acc.items():
            img[d] = v % _PRIME
        while img and img[-1] == 0:
            img.pop()
        p._img = img
    return img


def _udivmod(a, b):
    """Quotient and remainder of coefficient lists over F_p (low degree first)."""
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, _PRIME)
    quo = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv % _PRIME
        quo[i] = c
        if c:
            for j in range(db + 1):
                a[i + j] = (a[i + j] - c * b[j]) % _PRIME
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return quo, rem


def _primitive_integral(p: "Polynomial") -> bool:
    from math import gcd

    g = 0
    for c in p._terms.values():
        if type(c) is not int:
            return False
        g = gcd(g, c)
    return g == 1


def grlex_key(exps: Exponent):
    # ascending total degree, then higher powers of earlier variables first
    return (sum(exps), tuple(-e for e in exps))


class Polynomial:
    """Immutable sparse polynomial in ``arity`` variables.

    Coefficients are ints or Fractions (integral Fractions are stored as
    int). The zero polynomial has an empty term map.
    """

    __slots__ = ("arity", "_terms", "_hash", "_img")

    def __init__(self, terms: Optional[Mapping[int, object]] = None, arity: int = 1):
        if arity < 0:
            raise ArityError("arity must be nonnegative")
        self.arity = arity
        if terms:
            self._terms = {k: _clean(c) for k, c in terms.items() if c != 0}
        else:
            self._terms = {}
        self._hash = None
        self._img = None

    @classmethod
    def _raw(cls, terms: Dict[int, object], arity: int) -> "Polynomial":
        # trusted constructor: terms already cleaned and zero-free
        p = cls.__new__(cls)
        p.arity = arity
        p._terms = terms
        p._hash = None
        p._img = None
        return p

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "Polynomial":
        return cls._raw({}, arity)

    @classmethod
    def constant(cls, c, arity: int) -> "Polynomial":
        c = _clean(Fraction(c)) if not isinstance(c, int) else c
        return cls._raw({0: c} if c != 0 else {}, arity)

    @classmethod
    def one(cls, arity: int) -> "Polynomial":
        return cls._raw({0: 1}, arity)

    @classmethod
    def var(cls, i: int, arity: int, power: int = 1, coeff=1) -> "Polynomial":
        if not 0 <= i < arity:
            raise ArityError(f"variable index {i} outside arity {arity}")
        return cls({var_unit(i) * power: coeff}, arity)

    @classmethod
    def from_exponents(cls, terms: Mapping[Sequence[int], object], arity: int) -> "Polynomial":
        out: Dict[int, object] = {}
        for exps, c in terms.items():
            if len(exps) != arity:
                raise ArityError(f"exponent vector {tuple(exps)} does not match arity {arity}")
            k = pack(exps)
            out[k] = out.get(k, 0) + c
        return cls(out, arity)

    @classmethod
    def univariate(cls, coeffs: Sequence, i: int, arity: int) -> "Polynomial":
        """``sum(coeffs[k] * x_i**k)``."""
        u = var_unit(i)
        return cls({u * k: c for k, c in enumerate(coeffs)}, arity)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def constant_term(self) -> Fraction:
        return Fraction(self._terms.get(0, 0))

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def packed_items(self) -> Iterable[Tuple[int, object]]:
        return self._terms.items()

    def terms(self) -> Iterator[Tuple[Exponent, Fraction]]:
        """Terms as ``(exponent tuple, Fraction)`` in canonical grlex order."""
        items = [(unpack(k, self.arity), c) for k, c in self._terms.items()]
        items.sort(key=lambda t: grlex_key(t[0]))
        for e, c in items:
            yield e, Fraction(c)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return Fraction(self._terms.get(pack(exps), 0))

    def degree(self, i: int) -> int:
        if not self._terms:
            return -1
        s = FIELD_BITS * i
        return max((k >> s) & FIELD_MASK for k in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(unpack(k, self.arity)) for k in self._terms)

    def variables(self) -> Tuple[int, ...]:
        """Indices of variables that actually occur."""
        used = 0
        for k in self._terms:
            used |= k
        return tuple(i for i in range(self.arity) if (used >> (FIELD_BITS * i)) & FIELD_MASK)

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._terms.values())

    def content_denominator(self) -> int:
        """Least common multiple of coefficient denominators."""
        from math import lcm

        d = 1
        for c in self._terms.values():
            if type(c) is not int:
                d = lcm(d, c.denominator)
        return d

    # -- equality / hashing -----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.arity == other.arity and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.arity)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.arity)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _clean(v)
            else:
                out.pop(k, None)
        return Polynomial._raw(out, self.arity)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({k: -c for k, c in self._terms.items()}, self.arity)

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        if c == 0:
            return Polynomial.zero(self.arity)
        if c == 1:
            return self
        return Polynomial._raw({k: _clean(v * c) for k, v in self._terms.items()}, self.arity)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return Polynomial.zero(self.arity)
        if len(b) == 1:
            (kb, cb), = b.items()
            if cb == 1:
                return Polynomial._raw({k + kb: c for k, c in a.items()}, self.arity)
            return Polynomial._raw({k + kb: _clean(c * cb) for k, c in a.items()}, self.arity)
        out: Dict[int, object] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Polynomial._raw({k: _clean(c) for k, c in out.items() if c}, self.arity)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.arity)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, exps: Sequence[int]) -> "Polynomial":
        """Multiply by the monomial with exponent vector ``exps``."""
        s = pack(exps)
        return Polynomial._raw({k + s: c for k, c in self._terms.items()}, self.arity)

    def exact_div(self, other: "Polynomial") -> Optional["Polynomial"]:
        """Return ``c`` with ``other * c == self``, or None if no such polynomial exists."""
        other = self._coerce(other)
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._terms:
            return Polynomial.zero(self.arity)
        arity = self.arity
        bterms = other._terms
        lead = max(bterms)
        lead_c = bterms[lead]
        if len(bterms) == 1:
            out = {}
            for k, c in self._terms.items():
                if not key_divides(lead, k, arity):
                    return None
                out[k - lead] = _div(c, lead_c)
            return Polynomial._raw(out, arity)
        quo_img = None
        if len(self._terms) >= _FILTER_MIN_TERMS and _primitive_integral(other):
            ai, bi = _image(self), _image(other)
            if ai is not False and bi:
                quo_img, rem = _udivmod(ai, bi)
                if rem:
                    return None
        rest = [(k - lead, c) for k, c in bterms.items() if k != lead]
        rem = dict(self._terms)
        heap = [-k for k in rem]
        heapq.heapify(heap)
        quot: Dict[int, object] = {}
        h = guard_mask(arity)
        while heap:
            k = -heapq.heappop(heap)
            c = rem.pop(k, 0)
            if not c:
                continue
            if ((k | h) - lead) & h != h:
                return None
            m = k - lead
            qc = _div(c, lead_c)
            quot[m] = qc
            for d, bc in rest:
                kk = m + lead + d
                if kk in rem:
                    v = rem[kk] - qc * bc
                    if v:
                        rem[kk] = _clean(v)
                    else:
                        del rem[kk]
                else:
                    rem[kk] = _clean(-qc * bc)
                    heapq.heappush(heap, -kk)
        out = Polynomial._raw(quot, arity)
        if quo_img is not None:
            while quo_img and quo_img[-1] == 0:
                quo_img.pop()
            out._img = quo_img
        return out

    # -- substitution -----------------------------------------------------

    def at_zero(self, i: int) -> "Polynomial":
        """Set variable ``i`` to zero."""
        s = FIELD_BITS * i
        return Polynomial._raw(
            {k: c for k, c in self._terms.items() if not (k >> s) & FIELD_MASK}, self.arity
        )

    def coefficients_in(self, i: int) -> Dict[int, "Polynomial"]:
        """Split as ``sum_d x_i**d * P_d`` with ``P_d`` free of ``x_i``."""
        s = FIELD_BITS * i
        parts: Dict[int, Dict[int, object]] = {}
        for k, c in self._terms.items():
            d = (k >> s) & FIELD_MASK
            parts.setdefault(d, {})[k - (d << s)] = c
        return {d: Polynomial._raw(t, self.arity) for d, t in parts.items()}

    def truncate_in(self, i: int, degree: int) -> "Polynomial":
        """Drop terms of degree above ``degree`` in ``x_i``."""
        s = FIELD_BITS * i
        return Polynomial._raw({k: c for k, c in self._terms.items() if (k >> s) & FIELD_MASK <= degree}, self.arity)

    def reverse_in(self, i: int, degree: int) -> "Polynomial":
        """``x_i**degree * self(x_i -> 1/x_i)``; requires ``degree >= deg_i``."""
        s = FIELD_BITS * i
        out = {}
        for k, c in self._terms.items():
            d = (k >> s) & FIELD_MASK
            if d > degree:
                raise ValueError("reversal degree below polynomial degree")
            out[k + ((degree - 2 * d) << s)] = c
        return Polynomial._raw(out, self.arity)

    def rename(self, mapping: Sequence[int], arity: int) -> "Polynomial":
        """Move variable ``j`` to slot ``mapping[j]`` in a polynomial of the given arity."""
        if len(mapping) != self.arity:
            raise ArityError("renaming map must cover every variable")
        out: Dict[int, object] = {}
        for k, c in self._terms.items():
            nk = 0
            for j, dst in enumerate(mapping):
                e = (k >> (FIELD_BITS * j)) & FIELD_MASK
                if e:
                    nk += e << (FIELD_BITS * dst)
            out[nk] = out.get(nk, 0) + c
        return Polynomial(out, arity)

    def substitute_power(self, i: int, factor) -> "Polynomial":
        """Replace ``x_i`` by ``factor * x_i`` for a scalar ``factor``."""
        s = FIELD_BITS * i
        return Polynomial._raw(
            {k: _clean(c * Fraction(factor) ** ((k >> s) & FIELD_MASK)) for k, c in self._terms.items()},
            self.arity,
        )

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        if len(point) != self.arity:
            raise ArityError(f"point has {len(point)} coordinates, arity is {self.arity}")
        pows = [dict() for _ in range(self.arity)]
        total = Fraction(0)
        for k, c in self._terms.items():
            term = Fraction(c)
            for i in range(self.arity):
                e = (k >> (FIELD_BITS * i)) & FIELD_MASK
                if e:
                    cache = pows[i]
                    if e not in cache:
                        cache[e] = Fraction(point[i]) ** e
                    term *= cache[e]
            total += term
        return total

    def __repr__(self) -> str:
        from .text import format_polynomial

        return f"Polynomial({format_polynomial(self)!r}, arity={self.arity})"

    def __str__(self) -> str:
        from .text import format_polynomial

        return format_polynomial(self)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def poly_exact_div(a: Polynomial, b: Polynomial) -> Optional[Polynomial]:
    """Exact quotient ``a / b`` or None when ``b`` does not divide ``a``."""
    return a.exact_div(b)
