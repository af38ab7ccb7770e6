"""Independent checks of the closed forms and of the engine.

Nothing here feeds the production path. The checks recompute known
quantities by a different route: lattice counting for the one-point
function, first-order integration on the P^1 stratum, fixed-point sums
over cyclotomic fields for the Z/3 and Z/4 strata, and evaluation at
random rational points.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import formulas
from .arith import Polynomial, RationalFunction, taylor_expand
from .errors import InputError, PoleError, VerificationFailure

# -- reports --------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        d.pop("seconds")
        return d


def _timed(name: str, fn: Callable[[], CheckResult]) -> CheckResult:
    t = time.perf_counter()
    try:
        res = fn()
    except VerificationFailure as exc:
        res = CheckResult(name, False, str(exc))
    res.name = name
    res.seconds = time.perf_counter() - t
    return res


# -- one-point data ---------------------------------------------------------------


def modular_dim(d: int) -> int:
    """``#{(a, b) >= 0 : 4a + 6b = d}`` by enumeration."""
    if d < 0:
        raise InputError(f"weight must be nonnegative, got {d}")
    return sum(1 for a in range(d // 4 + 1) if (d - 4 * a) % 6 == 0)


def verify_one_point(max_degree: int = 200) -> List[CheckResult]:
    """Lattice counts against the one-point series, and the duality identity."""
    f = formulas.one_point_L()
    s = taylor_expand(f, (0, max_degree))
    bad = [d for d in range(max_degree + 1) if s.coefficient((0, d)) != modular_dim(d)]
    coeffs = CheckResult(
        "one_point_coefficients",
        not bad,
        f"[q1^d] matches lattice count for d <= {max_degree}" if not bad else "mismatch",
        None if not bad else f"d={bad[0]}",
    )
    lhs = 1 - f.invert_variable(1)
    rhs = formulas.one_point_Linv(var=1, arity=2)
    dual = CheckResult(
        "duality_one_point",
        lhs == rhs and lhs.serialize() == rhs.serialize(),
        "1 - F(1/q1) against the inverse-power form",
        None if lhs == rhs else f"{lhs} vs {rhs}",
    )
    return [coeffs, dual]


# -- random-point identity testing ------------------------------------------------


@dataclass
class IdentityVerdict:
    identical: bool
    witness: Optional[Tuple[Fraction, ...]] = None
    canonical_agrees: Optional[bool] = None


def _random_point(rng: random.Random, arity: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 40)) for _ in range(arity))


def random_point_identity(f: RationalFunction, g: RationalFunction, trials: int = 5,
                          seed: int = 0, canonical: bool = True) -> IdentityVerdict:
    """Compare ``f`` and ``g`` at random rational points away from poles.

    A differing point is a proof of difference. Agreement at every point
    is confirmed by exact canonical comparison when ``canonical`` is set.
    """
    if f.arity != g.arity:
        raise InputError(f"arity mismatch: {f.arity} vs {g.arity}")
    rng = random.Random(seed)
    done = attempts = 0
    while done < trials:
        attempts += 1
        if attempts > 50 * trials:
            raise VerificationFailure("could not find points away from the poles")
        pt = _random_point(rng, f.arity)
        try:
            a, b = f.evaluate(pt), g.evaluate(pt)
        except PoleError:
            continue
        done += 1
        if a != b:
            return IdentityVerdict(False, pt, (f == g) if canonical else None)
    return IdentityVerdict(True, None, (f == g) if canonical else None)


# -- cyclotomic fixed-point sums -------------------------------------------------


class CyclotomicNumber:
    """``a + b*zeta`` with ``zeta`` a primitive root of unity of order 3 or 4."""

    __slots__ = ("base", "a", "b")

    def __init__(self, base: int, a=0, b=0):
        if base not in (3, 4):
            raise InputError(f"only orders 3 and 4 are supported, got {base}")
        self.base = base
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def zeta(cls, base: int, k: int = 1) -> "CyclotomicNumber":
        k %= base
        out = cls(base, 1)
        z = cls(base, 0, 1)
        for _ in range(k):
            out = out * z
        return out

    def _other(self, x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            if x.base != self.base:
                raise InputError("cyclotomic numbers of different orders")
            return x
        return CyclotomicNumber(self.base, x)

    def __add__(self, x):
        x = self._other(x)
        return CyclotomicNumber(self.base, self.a + x.a, self.b + x.b)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.base, -self.a, -self.b)

    def __sub__(self, x):
        return self + (-self._other(x))

    def __rsub__(self, x):
        return self._other(x) - self

    def __mul__(self, x):
        x = self._other(x)
        bb = self.b * x.b
        a = self.a * x.a - bb
        b = self.a * x.b + self.b * x.a
        if self.base == 3:  # zeta^2 = -1 - zeta
            b -= bb
        return CyclotomicNumber(self.base, a, b)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicNumber":
        if self.base == 3:  # conj(zeta) = zeta^2 = -1 - zeta
            return CyclotomicNumber(3, self.a - self.b, -self.b)
        return CyclotomicNumber(4, self.a, -self.b)

    def norm(self) -> Fraction:
        n = self * self.conjugate()
        assert n.b == 0
        return n.a

    def inverse(self) -> "CyclotomicNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return CyclotomicNumber(self.base, c.a / n, c.b / n)

    def __truediv__(self, x):
        return self * self._other(x).inverse()

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, x) -> bool:
        try:
            x = self._other(x)
        except InputError:
            return False
        return self.a == x.a and self.b == x.b

    def __hash__(self):
        return hash((self.base, self.a, self.b))

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.base}, {self.a}, {self.b})"


class _CycPoly:
    """``re + zeta * im`` with polynomial parts."""

    def __init__(self, base: int, re: Polynomial, im: Polynomial):
        self.base, self.re, self.im = base, re, im

    @classmethod
    def constant(cls, c: CyclotomicNumber, arity: int) -> "_CycPoly":
        return cls(c.base, Polynomial.constant(c.a, arity), Polynomial.constant(c.b, arity))

    def __mul__(self, o: "_CycPoly") -> "_CycPoly":
        bb = self.im * o.im
        re = self.re * o.re - bb
        im = self.re * o.im + self.im * o.re
        if self.base == 3:
            im = im - bb
        return _CycPoly(self.base, re, im)

    def __add__(self, o: "_CycPoly") -> "_CycPoly":
        return _CycPoly(self.base, self.re + o.re, self.im + o.im)

    def conjugate(self) -> "_CycPoly":
        if self.base == 3:
            return _CycPoly(3, self.re - self.im, -self.im)
        return _CycPoly(4, self.re, -self.im)


def _linear(base: int, var: int, value: CyclotomicNumber, arity: int) -> _CycPoly:
    """``1 - x_var * value``."""
    x = Polynomial.var(var, arity)
    return _CycPoly(base, 1 - x * value.a, -(x * value.b))


@dataclass(frozen=True)
class Summand:
    """One group element's contribution at an isolated fixed point.

    ``tangent`` lists the exponents ``t`` with ``zeta^t`` acting on the
    tangent directions, ``hodge`` the character on ``H^{-1}`` (exponent of
    ``zeta`` or an explicit cyclotomic value), ``insertions`` the exponents
    ``l_j`` on ``L_j``. The value is::

        prod_j (zeta^l_j - 1) / (prod_t (1 - zeta^t) (1 - q c_H) prod_j (1 - q_j zeta^l_j))
    """

    tangent: Tuple[int, ...]
    hodge: Union[int, CyclotomicNumber]
    insertions: Tuple[int, ...]

    def conjugate(self, base: int) -> "Summand":
        h = self.hodge.conjugate() if isinstance(self.hodge, CyclotomicNumber) else (-self.hodge) % base
        return Summand(tuple((-t) % base for t in self.tangent), h, tuple((-l) % base for l in self.insertions))


def _summand_value(base: int, s: Summand) -> Tuple[_CycPoly, List[Tuple[Polynomial, int]]]:
    """Numerator over rational denominator factors, via multiplication by the conjugate."""
    n = len(s.insertions)
    arity = n + 1
    z = lambda k: CyclotomicNumber.zeta(base, k)  # noqa: E731
    const = CyclotomicNumber(base, 1)
    for l in s.insertions:
        const = const * (z(l) - 1)
    tangent = CyclotomicNumber(base, 1)
    for t in s.tangent:
        tangent = tangent * (1 - z(t))
    if tangent.norm() == 0:
        raise InputError("trivial character on a tangent direction")
    const = const / tangent
    hodge = s.hodge if isinstance(s.hodge, CyclotomicNumber) else z(s.hodge)
    dens = [_linear(base, 0, hodge, arity)] + [_linear(base, j, z(l), arity) for j, l in enumerate(s.insertions, 1)]
    num = _CycPoly.constant(const, arity)
    norms = []
    for d in dens:
        num = num * d.conjugate()
        prod = d * d.conjugate()
        if not prod.im.is_zero():
            raise VerificationFailure("norm of a linear factor is not rational")
        norms.append((prod.re, 1))
    return num, norms


def cyclotomic_fixed_point_sum(order: int, summands: Sequence[Summand], scale=None) -> RationalFunction:
    """Exact sum of fixed-point summands, asserted rational.

    ``scale`` defaults to ``1/order``. The insertion prefactor
    ``prod_j q_j/(1-q_j)`` is not included.
    """
    if not summands:
        raise InputError("no summands")
    arity = len(summands[0].insertions) + 1
    scale = Fraction(1, order) if scale is None else Fraction(scale)
    re = RationalFunction.constant(0, arity)
    im = RationalFunction.constant(0, arity)
    for s in summands:
        if len(s.insertions) + 1 != arity:
            raise InputError("summands disagree on the number of insertions")
        num, norms = _summand_value(order, s)
        re = re + RationalFunction(num.re, norms)
        im = im + RationalFunction(num.im, norms)
    if not im.is_zero():
        raise VerificationFailure(f"fixed-point sum is not rational: zeta-part {im}")
    return re.scale(scale)


def conjugate_pair(order: int, s: Summand) -> List[Summand]:
    return [s, s.conjugate(order)]


# fixed-point data for the strata with cyclic automorphism groups
Z3_N3 = Summand((2, 1, 1), 2, (1, 1, 1))
Z3_N2 = Summand((2, 1), 2, (1, 1))
Z4_N2_TANGENT = (2, 3)
Z4_N2_INSERTIONS = (3, 3)


def hodge_candidates(order: int) -> List[Tuple[str, CyclotomicNumber]]:
    z = CyclotomicNumber.zeta(order)
    cands = [("1", CyclotomicNumber(order, 1)), ("-1", CyclotomicNumber(order, -1)), ("zeta", z), ("-zeta", -z),
             ("conj(zeta)", z.conjugate()), ("-conj(zeta)", -z.conjugate())]
    seen, out = set(), []
    for name, c in cands:
        if c not in seen:
            seen.add(c)
            out.append((name, c))
    return out


def character_search(order: int, target: RationalFunction, tangent: Sequence[int],
                     insertions: Sequence[int]) -> List[Tuple[str, CyclotomicNumber]]:
    """Hodge characters whose conjugate-pair sum equals ``target`` exactly."""
    hits = []
    for name, c in hodge_candidates(order):
        s = Summand(tuple(tangent), c, tuple(insertions))
        try:
            value = cyclotomic_fixed_point_sum(order, conjugate_pair(order, s))
        except VerificationFailure:
            continue
        if value == target:
            hits.append((name, c))
    return hits


def _cyclotomic_structure(f: RationalFunction) -> Optional[int]:
    """3 if the denominator carries ``1 + v + v^2`` factors, 4 for ``1 + v^2``."""
    found = set()
    for fac, _ in f.denominator:
        vs = fac.variables()
        if len(vs) != 1:
            continue
        v = vs[0]
        arity = fac.arity
        if fac == Polynomial.univariate([1, 1, 1], v, arity):
            found.add(3)
        elif fac == Polynomial.univariate([1, 0, 1], v, arity):
            found.add(4)
    return found.pop() if len(found) == 1 else None


def resolve_sigma2_labels() -> Dict[str, str]:
    """Match the two cyclotomic members of the two-point orbifold term to the strata.

    Members are told apart by denominator structure, then each is checked
    against the fixed-point sum of the corresponding stratum.
    """
    members = {"(1+x^2) member": formulas.sigma2_z4(), "(1+x+x^2) member": formulas.sigma2_z3()}
    out = {}
    for label, f in members.items():
        order = _cyclotomic_structure(f)
        if order == 3:
            ok = cyclotomic_fixed_point_sum(3, conjugate_pair(3, Z3_N2)) == f
        elif order == 4:
            ok = bool(character_search(4, f, Z4_N2_TANGENT, Z4_N2_INSERTIONS))
        else:
            ok = False
        out[label] = f"Z/{order} stratum" if ok else "unmatched"
    return out


# -- first-order integration on the P^1 stratum -----------------------------------

CLASS_SYMBOLS = ("c1(L)", "c1(H)", "c1(T*)")


@dataclass
class JetValue:
    """``body + sum_s jet[s] * s`` with products of two classes set to zero."""

    body: RationalFunction
    jet: Dict[str, RationalFunction] = field(default_factory=dict)

    def __mul__(self, other: "JetValue") -> "JetValue":
        jet: Dict[str, RationalFunction] = {}
        for s in set(self.jet) | set(other.jet):
            acc = RationalFunction.constant(0, self.body.arity)
            if s in other.jet:
                acc = acc + self.body * other.jet[s]
            if s in self.jet:
                acc = acc + other.body * self.jet[s]
            jet[s] = acc
        return JetValue(self.body * other.body, jet)

    def scale(self, c) -> "JetValue":
        return JetValue(self.body.scale(c), {s: v.scale(c) for s, v in self.jet.items()})

    def integrate(self, integrals: "StratumIntegrals") -> RationalFunction:
        # degree-0 part integrates to zero over a curve
        out = RationalFunction.constant(0, self.body.arity)
        for s, coeff in sorted(self.jet.items()):
            out = out + coeff.scale(integrals.values.get(s, 0))
        return out


@dataclass
class StratumIntegrals:
    values: Dict[str, Fraction]

    @classmethod
    def p1_default(cls) -> "StratumIntegrals":
        half = Fraction(1, 2)
        return cls({"c1(L)": half, "c1(H)": half, "c1(T*)": half})


def _relative(body: RationalFunction, rel: Mapping[str, RationalFunction]) -> JetValue:
    return JetValue(body, {s: body * r for s, r in rel.items()})


def p1_integrand(n: int = 4) -> JetValue:
    """First-order integrand on the P^1 stratum where ``H^{-1}`` and every ``L_j`` act by -1.

    Local factors, each to first order in Chern classes:

    * ``1/(1 - q H^{-1})`` with ``H^{-1} = -e^{-c1(H)}``: ``1/(1+q) (1 + q/(1+q) c1(H))``;
    * ``(L_j - 1)/(1 - q_j L_j)`` with ``L_j = -e^{c1(L)}``:
      ``-2/(1+q_j) (1 + (1/2 - q_j/(1+q_j)) c1(L))``;
    * the conormal direction: ``1 - c1(T*)/2``.

    The product is normalized to a body with constant term 1.
    """
    arity = n + 1
    x = lambda i: Polynomial.var(i, arity)  # noqa: E731
    half_geom = lambda i: RationalFunction(x(i), [(1 + x(i), 1)])  # noqa: E731
    one = RationalFunction.constant(1, arity)
    out = _relative(RationalFunction(Polynomial.one(arity), [(1 + x(0), 1)]), {"c1(H)": half_geom(0)})
    for j in range(1, n + 1):
        body = RationalFunction(Polynomial.constant(-2, arity), [(1 + x(j), 1)])
        out = out * _relative(body, {"c1(L)": one.scale(Fraction(1, 2)) - half_geom(j)})
    out = out * _relative(one, {"c1(T*)": one.scale(Fraction(-1, 2))})
    return out.scale(Fraction(1, (-2) ** n))


def p1_stratum_check(integrals: Optional[StratumIntegrals] = None) -> CheckResult:
    integrals = integrals or StratumIntegrals.p1_default()
    jet = p1_integrand(4)
    value = formulas.insertion_prefactor(4) * jet.integrate(integrals)
    expected = formulas.sigma(4)
    ok = value == expected
    verdict = random_point_identity(value, expected, trials=5, canonical=False)
    return CheckResult(
        "p1_stratum_four_points",
        ok and verdict.identical,
        "first-order integral over P^1 against the four-point orbifold term",
        None if ok else f"differs at {tuple(str(c) for c in verdict.witness or ())}",
    )


# -- constants of the subtracted product -------------------------------------------


def subtracted_constant(n: int) -> Tuple[Fraction, Fraction]:
    """``(main, orbifold)`` parts of ``[q^0 prod q_i] K_n`` from evaluation at the origin."""
    origin = (Fraction(0),) * (n + 1)
    main = Fraction(factorial(n - 1), 24)
    return main, formulas.sigma_bracket(n).evaluate(origin)


def subtracted_coefficient(n: int) -> Fraction:
    """The same coefficient read from the Taylor expansion."""
    s = taylor_expand(formulas.kawasaki_subtracted(n), (0,) + (1,) * n)
    return s.coefficient((0,) + (1,) * n)


# -- suites -----------------------------------------------------------------------


def _eq_check(name: str, f: RationalFunction, g: RationalFunction, detail: str) -> CheckResult:
    ok = f == g and f.serialize() == g.serialize()
    verdict = random_point_identity(f, g, trials=5, canonical=False)
    return CheckResult(name, ok and verdict.identical, detail, None if ok else f"{f} vs {g}")


def _slice_checks() -> List[CheckResult]:
    mixed = formulas.one_point_mixed()
    return [
        _eq_check("slice_hodge_zero", mixed.at_zero(0), formulas.one_point_L(), "P_{1,1} at q=0"),
        _eq_check("slice_insertion_zero", mixed.at_zero(1), formulas.one_point_Linv(var=0, arity=2),
                  "P_{1,1} at q1=0"),
    ]


def _check_subtracted() -> CheckResult:
    expect = {2: 1, 3: -1, 4: 1, 5: 1}
    bad = []
    for n, want in expect.items():
        main, orb = subtracted_constant(n)
        if not (main + orb == want == subtracted_coefficient(n)):
            bad.append(f"n={n}: {main}+{orb} vs {subtracted_coefficient(n)}")
    return CheckResult("subtracted_constants", not bad, "q^0 prod q_i coefficient, n=2..5", "; ".join(bad) or None)


def _check_z3_n3() -> CheckResult:
    value = cyclotomic_fixed_point_sum(3, conjugate_pair(3, Z3_N3))
    target = formulas.sigma3_z3()
    hits = character_search(3, target, Z3_N3.tangent, Z3_N3.insertions)
    ok = value == target and any(c == CyclotomicNumber.zeta(3, 2) for _, c in hits)
    return CheckResult("cyclotomic_z3_three_points", ok, "Z/3 fixed-point sum against the three-point Z/3 term",
                       None if ok else str(value))


def _check_sigma2_labels() -> CheckResult:
    labels = resolve_sigma2_labels()
    ok = labels == {"(1+x^2) member": "Z/4 stratum", "(1+x+x^2) member": "Z/3 stratum"}
    witness = None
    if labels.get("(1+x+x^2) member") != "Z/3 stratum":
        diff = cyclotomic_fixed_point_sum(3, conjugate_pair(3, Z3_N2)) - formulas.sigma2_z3()
        witness = f"Z/3 fixed-point sum minus the (1+x+x^2) member = {diff}"
    return CheckResult("cyclotomic_two_point_labels", ok,
                       "; ".join(f"{k} <- {v}" for k, v in sorted(labels.items())), witness)


def _check_z4_character() -> CheckResult:
    hits = character_search(4, formulas.sigma2_z4(), Z4_N2_TANGENT, Z4_N2_INSERTIONS)
    return CheckResult("cyclotomic_z4_hodge_character", len(hits) >= 1,
                       "Hodge characters reproducing the (1+x^2) member: " + (", ".join(n for n, _ in hits) or "none"))


def _check_integrality(engine, max_n: int = 5, degree: int = 10) -> CheckResult:
    bad = []
    for n in range(1, max_n + 1):
        s = engine.full_genfun_series(n, (degree,) * (n + 1), degree)
        if not s.is_integral():
            bad.append(f"n={n}")
    return CheckResult("integrality_series", not bad, f"series coefficients integral, n<={max_n}, degree<={degree}",
                       ", ".join(bad) or None)


def _check_symmetry(engine, max_n: int = 3, top: int = 2) -> CheckResult:
    from .engine import ChiRequest

    for n in range(1, max_n + 1):
        for exps in itertools.product(range(top + 1), repeat=n):
            if list(exps) != sorted(exps):
                continue
            ref = engine.chi(ChiRequest(n, 0, exps))
            for perm in set(itertools.permutations(exps)):
                if engine.chi(ChiRequest(n, 0, perm)) != ref:
                    return CheckResult("symmetry", False, "chi changes under permutation", f"n={n} {perm}")
    return CheckResult("symmetry", True, f"chi invariant under permutations, n<={max_n}, exps<={top}")


def _check_mode_agreement(engine, max_n: int = 3, degree: int = 6) -> CheckResult:
    for n in range(1, max_n + 1):
        orders = (degree,) * (n + 1)
        exact = taylor_expand(engine.full_genfun(n), orders, degree)
        if exact != engine.full_genfun_series(n, orders, degree):
            return CheckResult("mode_agreement", False, "exact and series coefficients differ", f"n={n}")
    return CheckResult("mode_agreement", True, f"exact = series, n<={max_n}, degree<={degree}")


def _check_specialization(engine, max_n: int = 3) -> CheckResult:
    for n in range(1, max_n + 1):
        if engine.full_genfun(n).restrict(n) != engine.partial_genfun(n, n - 1):
            return CheckResult("specialization", False, "last insertion set to zero", f"n={n}")
    return CheckResult("specialization", True, f"P_(n,n) at q_n=0 equals P_(n,n-1), n<={max_n}")


def _check_small_values(engine) -> CheckResult:
    from .engine import ChiRequest

    cases = [((1, 0, (0,)), 1), ((1, 0, (4,)), 1), ((1, 0, (6,)), 1), ((1, 0, (12,)), 2), ((1, 0, (-1,)), 0),
             ((2, 0, (0, 0)), 1), ((2, 0, (1, 0)), 0), ((2, 0, (1, 1)), 0)]
    cases += [((n, 0, (0,) * n), 1) for n in range(1, 6)]
    for (n, h, exps), want in cases:
        got = engine.chi(ChiRequest(n, h, exps))
        if got != want:
            return CheckResult("known_values", False, "hand-derived values", f"chi({n},{h},{list(exps)})={got}")
    return CheckResult("known_values", True, f"{len(cases)} hand-derived values")


def run_suite(name: str, engine=None) -> List[CheckResult]:
    """``fast``: one-point data, duality, slices. ``all``: everything."""
    if name not in ("fast", "all"):
        raise InputError(f"unknown suite {name!r}; use 'fast' or 'all'")
    results = [_timed(r.name, (lambda r=r: r)) for r in verify_one_point()]
    results += [_timed(r.name, (lambda r=r: r)) for r in _slice_checks()]
    if name == "fast":
        return results
    if engine is None:
        from .engine import default_engine

        engine = default_engine()
    checks = [
        ("subtracted_constants", _check_subtracted),
        ("p1_stratum_four_points", p1_stratum_check),
        ("cyclotomic_z3_three_points", _check_z3_n3),
        ("cyclotomic_two_point_labels", _check_sigma2_labels),
        ("cyclotomic_z4_hodge_character", _check_z4_character),
        ("integrality_series", lambda: _check_integrality(engine)),
        ("known_values", lambda: _check_small_values(engine)),
        ("symmetry", lambda: _check_symmetry(engine)),
        ("mode_agreement", lambda: _check_mode_agreement(engine)),
        ("specialization", lambda: _check_specialization(engine)),
    ]
    results += [_timed(n, fn) for n, fn in checks]
    return results
