"""Closed-form generating functions and the string-equation step.

Variable 0 of every function is the Hodge variable ``q`` (it counts powers
of the inverse Hodge bundle); variable ``i >= 1`` is ``q_i`` and counts
powers of the cotangent line ``L_i``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, List, Optional, Sequence

from .arith import Polynomial, RationalFunction
from .errors import InputError

# Constants of the Z/2 (elliptic curve with 2-torsion marked) contributions.
# Kept at module level so the verification suite can be mutation-tested.
SIGMA4_CONSTANT = Fraction(3, 4)
SIGMA3_Z2_CONSTANT = Fraction(-3, 4)
SIGMA2_Z2_CONSTANT = Fraction(3, 8)
SIGMA4_SLOPE = Fraction(1, 2)
SIGMA3_Z2_SLOPE = Fraction(1, 2)
SIGMA2_Z2_SLOPE = Fraction(1, 4)


def _x(i: int, arity: int) -> Polynomial:
    return Polynomial.var(i, arity)


def _rf(num, den=(), arity: Optional[int] = None) -> RationalFunction:
    return RationalFunction(num, den, arity=arity)


def _geom(i: int, arity: int) -> RationalFunction:
    """``x_i / (1 - x_i)``."""
    x = _x(i, arity)
    return _rf(x, [(1 - x, 1)])


def _half_geom(i: int, arity: int) -> RationalFunction:
    """``x_i / (1 + x_i)``."""
    x = _x(i, arity)
    return _rf(x, [(1 + x, 1)])


def _check_n(n: int) -> None:
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}")


# -- one marked point --------------------------------------------------------


def one_point_L(var: int = 1, arity: int = 2) -> RationalFunction:
    """``chi(M_{1,1}, 1/(1 - x L_1)) = 1/((1 - x^4)(1 - x^6))`` in variable ``var``.

    Weight-4 and weight-6 Eisenstein series generate the ring of modular
    forms; sections of ``L_1^k`` are forms of weight ``2k``.
    """
    x = _x(var, arity)
    return _rf(1, [(1 - x ** 4, 1), (1 - x ** 6, 1)], arity=arity)


def one_point_Linv(var: int = 0, arity: int = 1) -> RationalFunction:
    """``chi(M_{1,1}, 1/(1 - x L_1^{-1})) = (1 - x^4 - x^6)/((1 - x^4)(1 - x^6))``.

    On ``M_{1,1}`` the Hodge bundle equals ``L_1``, so with the default
    arguments this is the base value ``P_{1,0}``.
    """
    x = _x(var, arity)
    return _rf(1 - x ** 4 - x ** 6, [(1 - x ** 4, 1), (1 - x ** 6, 1)])


def one_point_mixed() -> RationalFunction:
    """``chi(M_{1,1}, 1/((1 - q H^{-1})(1 - q_1 L_1)))``, the base value ``P_{1,1}``."""
    q, q1 = _x(0, 2), _x(1, 2)
    inner = _rf(1, [(1 - q1 ** 4, 1), (1 - q1 ** 6, 1)], arity=2) - _rf(
        q ** 10, [(1 - q ** 4, 1), (1 - q ** 6, 1)]
    )
    return inner * _rf(1, [(1 - q * q1, 1)], arity=2)


# -- Kawasaki-Riemann-Roch pieces -------------------------------------------


def insertion_prefactor(n: int) -> RationalFunction:
    """``prod_i q_i / (1 - q_i)``, common to the main and orbifold terms."""
    arity = n + 1
    out = RationalFunction.constant(1, arity)
    for i in range(1, n + 1):
        out = out * _geom(i, arity)
    return out


def main_term(n: int) -> RationalFunction:
    """Fundamental-class contribution ``prod(q_i/(1-q_i)) (n-1)! / (24 (1-q) prod(1-q_i))``."""
    _check_n(n)
    arity = n + 1
    den = [(1 - _x(0, arity), 1)] + [(1 - _x(i, arity), 1) for i in range(1, n + 1)]
    return insertion_prefactor(n) * _rf(Fraction(factorial(n - 1), 24), den, arity=arity)


def z2_bracket(n: int, constant: Fraction, slope: Fraction) -> RationalFunction:
    """``(c + s (q/(1+q) - sum_i q_i/(1+q_i))) / ((1+q) prod_i (1+q_i))`` (no prefactor)."""
    arity = n + 1
    inner = RationalFunction.constant(constant, arity) + _half_geom(0, arity).scale(slope)
    for i in range(1, n + 1):
        inner = inner - _half_geom(i, arity).scale(slope)
    den = [(1 + _x(i, arity), 1) for i in range(n + 1)]
    return inner * _rf(1, den, arity=arity)


def _cyclotomic_den(n: int, base: Sequence[int]) -> List:
    """Factors ``p(x_i)`` for every variable, ``p`` given by coefficient list."""
    arity = n + 1
    return [(Polynomial.univariate(base, i, arity), 1) for i in range(n + 1)]


def sigma3_z3() -> RationalFunction:
    """Z/3 term of Sigma_3 without prefactor (denominators ``1 + x + x^2``)."""
    q, q1, q2, q3 = (_x(i, 4) for i in range(4))
    e1 = q1 + q2 + q3
    e2 = q1 * q2 + q2 * q3 + q3 * q1
    e3 = q1 * q2 * q3
    num = -1 + q - (2 + q) * e1 - (1 + 2 * q) * e2 + (1 - q) * e3
    return _rf(num.scale(Fraction(1, 3)), _cyclotomic_den(3, [1, 1, 1]))


def sigma2_z4() -> RationalFunction:
    """Sigma_2 term with denominators ``1 + x^2`` (no prefactor)."""
    q, q1, q2 = (_x(i, 3) for i in range(3))
    num = 1 - q + q1 + q2 + q * q1 + q * q2 - q1 * q2 + q * q1 * q2
    return _rf(num.scale(Fraction(1, 4)), _cyclotomic_den(2, [1, 0, 1]))


def sigma2_z3() -> RationalFunction:
    """Sigma_2 term with denominators ``1 + x + x^2`` (no prefactor)."""
    q, q1, q2 = (_x(i, 3) for i in range(3))
    num = 1 - q + 2 * q1 + 2 * q2 + q * q1 + q * q2 + q1 * q2 - q * q1 * q2
    return _rf(num.scale(Fraction(1, 3)), _cyclotomic_den(2, [1, 1, 1]))


def sigma_bracket(n: int) -> RationalFunction:
    """Sigma_n divided by ``prod_i q_i/(1-q_i)``."""
    _check_n(n)
    if n >= 5:
        return RationalFunction.constant(0, n + 1)
    if n == 4:
        return z2_bracket(4, SIGMA4_CONSTANT, SIGMA4_SLOPE)
    if n == 3:
        return z2_bracket(3, SIGMA3_Z2_CONSTANT, SIGMA3_Z2_SLOPE) + sigma3_z3()
    return z2_bracket(2, SIGMA2_Z2_CONSTANT, SIGMA2_Z2_SLOPE) + sigma2_z4() + sigma2_z3()


def sigma(n: int) -> RationalFunction:
    """Orbifold contribution Sigma_n; zero for ``n >= 5``."""
    _check_n(n)
    if n >= 5:
        return RationalFunction.constant(0, n + 1)
    return insertion_prefactor(n) * sigma_bracket(n)


def kawasaki_subtracted(n: int) -> RationalFunction:
    """``chi(M_{1,n}, 1/(1 - q H^{-1}) prod_i (1/(1 - q_i L_i) - 1/(1 - q_i)))``."""
    _check_n(n)
    return main_term(n) + sigma(n)


# -- string equation ----------------------------------------------------------


def string_multiplier(active: Iterable[int], arity: int) -> RationalFunction:
    """``1 + sum_{i in active} q_i / (1 - q_i)``."""
    out = RationalFunction.constant(1, arity)
    for i in active:
        out = out + _geom(i, arity)
    return out


def pushdown(prev: RationalFunction, prev_at_q0: RationalFunction, active_vars: Sequence[int]) -> RationalFunction:
    """One forgetful-map step of the K-theoretic string equation.

    Given ``P = chi(M_{1,n-1}, 1/(1-qH^{-1}) prod_{i in active} 1/(1-q_i L_i))``
    and its ``q = 0`` slice, return the same generating function on
    ``M_{1,n}``::

        (1 + sum_i q_i/(1-q_i)) P - (P - P|_{q=0}) / q
    """
    reg = prev.extract_regular_part(0, slice_=prev_at_q0)
    return string_multiplier(active_vars, prev.arity) * prev - reg
