"""Rational functions with factored denominators.

A :class:`RationalFunction` is ``numerator / prod(f_j ** e_j)`` where every
factor ``f_j`` has constant term exactly 1, so the function is regular at
the origin. Denominators are never expanded; sums take the factor-wise
maximum of exponents and cancellation is by trial exact division only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from ..errors import ArityError, InputError, InternalConsistencyError, InversionUnsupported, PoleError
from .polynomial import Polynomial, grlex_key


class DenominatorFactor(NamedTuple):
    polynomial: Polynomial
    exponent: int


def _factor_key(p: Polynomial):
    return (p.variables(), p.total_degree(), tuple((grlex_key(e), c) for e, c in p.terms()))


def _unit_normalize(p: Polynomial) -> Tuple[Polynomial, Fraction]:
    """Return ``(p / c, c)`` with ``c`` the constant term of ``p``."""
    c = p.constant_term()
    if c == 0:
        raise InputError(f"denominator factor {p} vanishes at the origin")
    if c == 1:
        return p, Fraction(1)
    return p.scale(1 / c), c


class RationalFunction:
    """Immutable ``numerator / prod(factor ** exponent)``.

    Construct with any nonzero-constant-term factors; the constructor
    rescales them to constant term 1 and runs :meth:`normalize`.
    """

    __slots__ = ("numerator", "denominator", "arity")

    def __init__(self, numerator, denominator: Iterable[Tuple[Polynomial, int]] = (), arity: Optional[int] = None):
        if not isinstance(numerator, Polynomial):
            if arity is None:
                raise ArityError("arity required for scalar numerators")
            numerator = Polynomial.constant(numerator, arity)
        self.arity = numerator.arity
        num, den = numerator, {}
        for fac, e in denominator:
            if fac.arity != self.arity:
                raise ArityError(f"factor arity {fac.arity} differs from numerator arity {self.arity}")
            if e < 0:
                raise InputError("denominator exponents must be positive")
            if e == 0:
                continue
            fac, c = _unit_normalize(fac)
            if c != 1:
                num = num.scale(c ** -e)
            if fac.is_constant():
                continue
            den[fac] = den.get(fac, 0) + e
        self.numerator, self.denominator = _cancel(num, den)

    @classmethod
    def _raw(cls, num: Polynomial, den: Tuple[Tuple[Polynomial, int], ...]) -> "RationalFunction":
        f = cls.__new__(cls)
        f.numerator = num
        f.denominator = den
        f.arity = num.arity
        return f

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls._raw(p, ())

    @classmethod
    def constant(cls, c, arity: int) -> "RationalFunction":
        return cls._raw(Polynomial.constant(c, arity), ())

    @classmethod
    def var(cls, i: int, arity: int) -> "RationalFunction":
        return cls._raw(Polynomial.var(i, arity), ())

    # -- inspection -------------------------------------------------------

    @property
    def factors(self) -> List[DenominatorFactor]:
        return [DenominatorFactor(p, e) for p, e in self.denominator]

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return not self.denominator

    def denominator_polynomial(self) -> Polynomial:
        d = Polynomial.one(self.arity)
        for fac, e in self.denominator:
            d = d * fac ** e
        return d

    def normalize(self) -> "RationalFunction":
        num, den = _cancel(self.numerator, dict(self.denominator))
        return RationalFunction._raw(num, den)

    def serialize(self) -> str:
        from .text import format_ratfn

        return format_ratfn(self)

    __str__ = serialize

    def __repr__(self) -> str:
        return f"RationalFunction({self.serialize()!r}, arity={self.arity})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, Polynomial):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return RationalFunction._raw(other, ())
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self.arity)
        raise TypeError(f"cannot combine RationalFunction with {type(other).__name__}")

    def _common(self, other: "RationalFunction"):
        """Numerators over the factor-wise lcm of the two denominators."""
        da, db = dict(self.denominator), dict(other.denominator)
        lcm = dict(da)
        for f, e in db.items():
            if lcm.get(f, 0) < e:
                lcm[f] = e
        na = self.numerator
        for f, e in lcm.items():
            if e > da.get(f, 0):
                na = na * f ** (e - da.get(f, 0))
        nb = other.numerator
        for f, e in lcm.items():
            if e > db.get(f, 0):
                nb = nb * f ** (e - db.get(f, 0))
        return na, nb, lcm

    def add(self, other, normalize: bool = True) -> "RationalFunction":
        other = self._coerce(other)
        if other.numerator.is_zero():
            return self
        if self.numerator.is_zero():
            return other
        na, nb, lcm = self._common(other)
        num = na + nb
        if not normalize:
            return RationalFunction._raw(num, _sorted(lcm))
        return RationalFunction._raw(*_cancel(num, lcm))

    def __add__(self, other) -> "RationalFunction":
        try:
            return self.add(other)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._raw(-self.numerator, self.denominator)

    def __sub__(self, other) -> "RationalFunction":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.add(-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def mul(self, other, normalize: bool = True) -> "RationalFunction":
        other = self._coerce(other)
        if self.numerator.is_zero() or other.numerator.is_zero():
            return RationalFunction.constant(0, self.arity)
        num = self.numerator * other.numerator
        den = dict(self.denominator)
        for f, e in other.denominator:
            den[f] = den.get(f, 0) + e
        if not normalize:
            return RationalFunction._raw(num, _sorted(den))
        return RationalFunction._raw(*_cancel(num, den))

    def __mul__(self, other) -> "RationalFunction":
        try:
            return self.mul(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def scale(self, c) -> "RationalFunction":
        if c == 0:
            return RationalFunction.constant(0, self.arity)
        return RationalFunction._raw(self.numerator.scale(Fraction(c)), self.denominator)

    def divide_by_factor(self, fac: Polynomial, e: int = 1) -> "RationalFunction":
        """Multiply by ``1 / fac**e`` for a factor with nonzero constant term."""
        return self * RationalFunction(Polynomial.one(self.arity), [(fac, e)])

    def reciprocal(self) -> "RationalFunction":
        if self.numerator.constant_term() == 0:
            raise InputError("reciprocal is not regular at the origin")
        return RationalFunction(self.denominator_polynomial(), [(self.numerator, 1)])

    def __truediv__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        other = self._coerce(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, e: int) -> "RationalFunction":
        if e < 0:
            return self.reciprocal() ** (-e)
        num = self.numerator ** e
        den = {f: k * e for f, k in self.denominator}
        return RationalFunction._raw(*_cancel(num, den)) if e else RationalFunction.constant(1, self.arity)

    def __eq__(self, other) -> bool:
        """Exact equality as functions (cross-multiplied numerators)."""
        if isinstance(other, (RationalFunction, Polynomial, int, Fraction)):
            try:
                other = self._coerce(other)
            except ArityError:
                return False
            if self.denominator == other.denominator:
                return self.numerator == other.numerator
            na, nb, _ = self._common(other)
            return na == nb
        return NotImplemented

    __hash__ = None

    # -- substitution and evaluation ---------------------------------------

    def at_zero(self, i: int) -> "RationalFunction":
        """Set variable ``i`` to 0."""
        num = self.numerator.at_zero(i)
        den: Dict[Polynomial, int] = {}
        for f, e in self.denominator:
            g = f.at_zero(i)
            if g.is_constant():
                continue
            den[g] = den.get(g, 0) + e
        return RationalFunction._raw(*_cancel(num, den))

    def restrict(self, i: int) -> "RationalFunction":
        """Set variable ``i`` to 0 and drop it; later variables move down one slot."""
        mapping = [j if j < i else max(j - 1, 0) for j in range(self.arity)]
        return self.at_zero(i).rename(mapping, self.arity - 1)

    def rename(self, mapping: Sequence[int], arity: int) -> "RationalFunction":
        """Send variable ``j`` to slot ``mapping[j]`` of a ring with ``arity`` variables."""
        num = self.numerator.rename(mapping, arity)
        den: Dict[Polynomial, int] = {}
        for f, e in self.denominator:
            g = f.rename(mapping, arity)
            den[g] = den.get(g, 0) + e
        return RationalFunction._raw(num, _sorted(den))

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.arity:
            raise ArityError(f"point has {len(point)} coordinates, arity is {self.arity}")
        d = Fraction(1)
        for f, e in self.denominator:
            v = f.evaluate(point)
            if v == 0:
                raise PoleError(f"factor ({f}) vanishes at {tuple(str(x) for x in point)}")
            d *= v ** e
        return self.numerator.evaluate(point) / d

    def taylor_expand(self, orders: Sequence[int], cap: Optional[int] = None):
        from .series import taylor_expand

        return taylor_expand(self, orders, cap)

    def series_coefficient(self, v: int, e: int) -> "RationalFunction":
        """Coefficient of ``x_v**e`` in the expansion around ``x_v = 0``.

        The other variables stay symbolic. Writing the product ``P`` of the
        factors that involve ``x_v`` as ``sum_j p_j x_v**j``, the expansion
        of ``1/P`` is ``sum_j t_j x_v**j / p_0**(j+1)`` with ``t_0 = 1`` and
        ``t_j = -sum_{i=1..j} p_i p_0**(i-1) t_{j-i}``.
        """
        if not 0 <= v < self.arity:
            raise ArityError(f"variable index {v} outside arity {self.arity}")
        if e < 0:
            raise InputError("coefficient index must be nonnegative")
        one = Polynomial.one(self.arity)
        outer: Dict[Polynomial, int] = {}
        prod = one
        for fac, k in self.denominator:
            if fac.degree(v) > 0:
                prod = (prod * fac ** k).truncate_in(v, e)
                low = fac.at_zero(v)
                if not low.is_constant():
                    outer[low] = outer.get(low, 0) + k * (e + 1)
            else:
                outer[fac] = outer.get(fac, 0) + k
        p = prod.coefficients_in(v)
        p0 = p.get(0, one)
        p0_pows = [one]
        for _ in range(e):
            p0_pows.append(p0_pows[-1] * p0)
        t = [one]
        for j in range(1, e + 1):
            acc = Polynomial.zero(self.arity)
            for i in range(1, j + 1):
                if i in p:
                    acc = acc + p[i] * p0_pows[i - 1] * t[j - i]
            t.append(-acc)
        n = self.numerator.truncate_in(v, e).coefficients_in(v)
        num = Polynomial.zero(self.arity)
        for a, na in n.items():
            num = num + na * t[e - a] * p0_pows[a]
        return RationalFunction._raw(*_cancel(num, outer))

    def extract_regular_part(self, v: int, slice_: Optional["RationalFunction"] = None) -> "RationalFunction":
        """``(f - f|_{v=0}) / v``, exact.

        ``slice_`` may supply a precomputed ``f|_{v=0}``.
        """
        if not 0 <= v < self.arity:
            raise ArityError(f"variable index {v} outside arity {self.arity}")
        if slice_ is None:
            slice_ = self.at_zero(v)
        diff = self.add(-slice_, normalize=False)
        num = diff.numerator
        unit = Polynomial.var(v, self.arity)
        q = num.exact_div(unit)
        if q is None:
            raise InternalConsistencyError(
                f"numerator of f - f|{{{v}=0}} is not divisible by the variable"
            )
        return RationalFunction._raw(*_cancel(q, dict(diff.denominator)))

    def invert_variable(self, v: int) -> "RationalFunction":
        """``f(..., 1/x_v, ...)`` as a function regular and vanishing at ``x_v = 0``.

        Raises :class:`InversionUnsupported` when the substituted function
        has a pole at ``x_v = 0``, fails to vanish there, or keeps a
        denominator factor whose value at ``x_v = 0`` is not a nonzero
        constant.
        """
        if not 0 <= v < self.arity:
            raise ArityError(f"variable index {v} outside arity {self.arity}")
        f = self.normalize()
        if f.numerator.is_zero():
            return f
        total = sum(fac.degree(v) * e for fac, e in f.denominator)
        ndeg = f.numerator.degree(v)
        if ndeg >= total:
            raise InversionUnsupported(
                f"numerator degree {ndeg} in {v} is not below denominator degree {total}"
            )
        num = f.numerator.reverse_in(v, ndeg)
        num = num * Polynomial.var(v, self.arity, power=total - ndeg)
        good: Dict[Polynomial, int] = {}
        pending: List[Tuple[Polynomial, int]] = []
        for fac, e in f.denominator:
            d = fac.degree(v)
            if d == 0:
                # constant in x_v: unaffected by the substitution
                good[fac] = good.get(fac, 0) + e
                continue
            r = fac.reverse_in(v, d)
            c = r.constant_term()
            if r.at_zero(v).is_constant() and c != 0:
                if c != 1:
                    r = r.scale(1 / c)
                    num = num.scale(c ** -e)
                if not r.is_constant():
                    good[r] = good.get(r, 0) + e
            else:
                pending.append((r, e))
        for r, e in pending:
            for _ in range(e):
                quo = num.exact_div(r)
                if quo is None:
                    raise InversionUnsupported(
                        f"factor ({r}) stays singular at the origin after inversion"
                    )
                num = quo
        return RationalFunction._raw(*_cancel(num, good))


def _sorted(den: Dict[Polynomial, int]) -> Tuple[Tuple[Polynomial, int], ...]:
    return tuple(sorted(((f, e) for f, e in den.items() if e > 0), key=lambda t: _factor_key(t[0])))


def _cancel(num: Polynomial, den: Dict[Polynomial, int]):
    """Trial-divide the numerator by each factor until none divides it."""
    if num.is_zero():
        return num, ()
    out: Dict[Polynomial, int] = {}
    for fac, e in sorted(den.items(), key=lambda t: _factor_key(t[0])):
        while e > 0:
            q = num.exact_div(fac)
            if q is None:
                break
            num = q
            e -= 1
        if e:
            out[fac] = e
    return num, _sorted(out)


def ratfn_add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return a + b


def ratfn_mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return a * b


def normalize(f: RationalFunction) -> RationalFunction:
    return f.normalize()


def eval_at(f: RationalFunction, point: Sequence) -> Fraction:
    return f.evaluate(point)


def extract_regular_part(f: RationalFunction, v: int) -> RationalFunction:
    return f.extract_regular_part(v)


def invert_variable(f: RationalFunction, v: int) -> RationalFunction:
    return f.invert_variable(v)


def product(factors: Iterable[RationalFunction], arity: int) -> RationalFunction:
    out = RationalFunction.constant(1, arity)
    for f in factors:
        out = out * f
    return out
