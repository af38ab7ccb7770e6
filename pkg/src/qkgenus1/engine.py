"""Reduction of genus-one invariants to closed forms.

Three steps produce ``P_{n,m} = chi(M_{1,n}, 1/(1 - q H^{-1}) prod_{i<=m} 1/(1 - q_i L_i))``:

* ``n = 1``: the one-point closed forms;
* ``m < n``: one string-equation pushdown from ``P_{n-1,m}``;
* ``m = n``: inclusion-exclusion around the subtracted product
  ``prod_i (1/(1 - q_i L_i) - 1/(1 - q_i))``, whose Euler characteristic
  is known in closed form.

For a subset ``U`` of the insertions, ``P`` restricted to ``U`` is
``P_{n,|U|}`` with variables renamed, by symmetry of the moduli problem.
So the memo key is just ``(n, m)``.

Sign convention: ``q`` counts powers of ``H^{-1}``. A request with
``hodge = -d <= 0`` reads ``[q^d]``; ``hodge > 0`` goes through the
duality inversion in ``q``.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import __version__, formulas
from .arith import Polynomial, RationalFunction, TruncatedSeries, parse_ratfn, taylor_expand
from .errors import InputError, InternalConsistencyError, ModeError

log = logging.getLogger(__name__)

CACHE_FORMAT = 1
CACHE_ENV = "QKGENUS1_CACHE"
DEFAULT_EXACT_CEILING = 4
MODES = ("exact", "series", "auto")


@dataclass(frozen=True, order=True)
class InvariantKey:
    """``(n, m)``: ``n`` marked points, insertions ``q_1..q_m`` active."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"n must be at least 1, got {self.n}")
        if not 0 <= self.m <= self.n:
            raise InputError(f"m must lie in 0..{self.n}, got {self.m}")

    def __str__(self) -> str:
        return f"{self.n},{self.m}"

    @classmethod
    def parse(cls, text: str) -> "InvariantKey":
        try:
            n, m = (int(x) for x in text.split(","))
        except ValueError:
            raise InputError(f"bad key {text!r}") from None
        return cls(n, m)


@dataclass(frozen=True)
class ChiRequest:
    """``chi(M_{1,n}, H^hodge (x) L_1^exps[0] (x) ... )``."""

    n: int
    hodge: int
    exps: Tuple[int, ...]
    mode: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(e) for e in self.exps))
        if self.n < 1:
            raise InputError(f"n must be at least 1, got {self.n}")
        if len(self.exps) != self.n:
            raise InputError(f"expected {self.n} exponents, got {len(self.exps)}")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")

    @property
    def needs_inversion(self) -> bool:
        return self.hodge > 0 or any(e < 0 for e in self.exps)


# -- memo cache ---------------------------------------------------------------


def _checksum(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def _header() -> str:
    return f"# qkgenus1-cache format={CACHE_FORMAT} engine={__version__}\n"


class MemoCache:
    """``(n, m) -> (P_{n,m}, P_{n,m}|_{q=0})`` with an optional file image.

    The file starts with a header naming the format and engine version;
    each further line is ``key TAB P TAB slice TAB checksum``. A file whose
    header does not match is ignored as a whole; a record whose checksum
    or syntax is bad is dropped and recomputed. Records are appended one
    line per write, so concurrent writers at worst store a key twice, and
    both copies are identical.
    """

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self._values: Dict[InvariantKey, Tuple[RationalFunction, RationalFunction]] = {}
        self._pending: Dict[InvariantKey, Tuple[str, str]] = {}
        self.hits = 0
        self.misses = 0
        self.discarded = 0
        self._loaded = False

    def _load(self) -> None:
        self._loaded = True
        if not self.path or not os.path.exists(self.path):
            return
        with open(self.path, encoding="utf-8") as fh:
            header = fh.readline()
            if header != _header():
                log.warning("cache %s has a different format or engine version; ignoring it", self.path)
                self.discarded += 1
                return
            for line in fh:
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 4 or _checksum("\t".join(parts[:3])) != parts[3]:
                    self.discarded += 1
                    continue
                try:
                    key = InvariantKey.parse(parts[0])
                except InputError:
                    self.discarded += 1
                    continue
                self._pending.setdefault(key, (parts[1], parts[2]))

    def get(self, key: InvariantKey):
        if not self._loaded:
            self._load()
        hit = self._values.get(key)
        if hit is None and key in self._pending:
            text, slice_text = self._pending.pop(key)
            try:
                arity = key.m + 1
                hit = (parse_ratfn(text, arity), parse_ratfn(slice_text, arity))
            except InputError:
                self.discarded += 1
                hit = None
            else:
                self._values[key] = hit
        if hit is None:
            self.misses += 1
        else:
            self.hits += 1
        return hit

    def put(self, key: InvariantKey, value: RationalFunction, slice_: RationalFunction) -> None:
        if key in self._values:
            return
        self._values[key] = (value, slice_)
        if not self.path:
            return
        body = f"{key}\t{value.serialize()}\t{slice_.serialize()}"
        new = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
        line = (_header() if new else "") + f"{body}\t{_checksum(body)}\n"
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, line.encode())
        finally:
            os.close(fd)

    def keys(self) -> List[InvariantKey]:
        if not self._loaded:
            self._load()
        return sorted(set(self._values) | set(self._pending))

    def clear(self) -> None:
        self._values.clear()
        self._pending.clear()
        if self.path and os.path.exists(self.path):
            os.remove(self.path)

    def stats(self) -> Dict[str, int]:
        return {"hits": self.hits, "misses": self.misses, "discarded": self.discarded}


# -- engine -------------------------------------------------------------------


@dataclass
class ChiResult:
    request: ChiRequest
    value: int
    mode: str


class Engine:
    """Memoized evaluator. Pure apart from its caches."""

    def __init__(self, cache: Optional[MemoCache] = None, exact_ceiling: int = DEFAULT_EXACT_CEILING):
        self.cache = cache if cache is not None else MemoCache()
        self.exact_ceiling = exact_ceiling
        self._series: Dict[tuple, TruncatedSeries] = {}
        self._reduced: Dict[tuple, RationalFunction] = {}

    # exact generating functions

    def partial_genfun(self, n: int, m: int) -> RationalFunction:
        return self._entry(InvariantKey(n, m))[0]

    def _entry(self, key: InvariantKey):
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        n, m = key.n, key.m
        if n == 1:
            value = formulas.one_point_mixed() if m == 1 else formulas.one_point_Linv()
        elif m < n:
            prev, prev_slice = self._entry(InvariantKey(n - 1, m))
            value = formulas.pushdown(prev, prev_slice, range(1, m + 1))
        else:
            value = self._inclusion_exclusion(n)
        self.cache.put(key, value, value.at_zero(0))
        return self.cache._values[key]

    def _inclusion_exclusion(self, n: int) -> RationalFunction:
        # P_{n,n} = K_n + sum_{U < [n]} (-1)^(n-|U|+1) prod_{i not in U} 1/(1-q_i) * P_U
        arity = n + 1
        total = formulas.kawasaki_subtracted(n)
        for k in range(n):
            pk = self.partial_genfun(n, k)
            sign = -1 if (n - k) % 2 == 0 else 1
            for subset in itertools.combinations(range(1, n + 1), k):
                term = pk.rename((0,) + subset, arity)
                den = [(1 - Polynomial.var(i, arity), 1) for i in range(1, n + 1) if i not in subset]
                term = term.mul(RationalFunction(Polynomial.constant(sign, arity), den))
                total = total + term
        return total

    def full_genfun(self, n: int) -> RationalFunction:
        if n < 1:
            raise InputError(f"n must be at least 1, got {n}")
        if n > self.exact_ceiling:
            raise ModeError(
                f"n={n} exceeds the exact-mode ceiling {self.exact_ceiling}; use series mode or raise the ceiling"
            )
        return self.partial_genfun(n, n)

    # series mode

    def full_genfun_series(self, n: int, orders: Sequence[int], cap: Optional[int] = None) -> TruncatedSeries:
        """Taylor coefficients of ``P_{n,n}`` up to ``orders`` (``q`` first) and total degree ``cap``."""
        if n < 1:
            raise InputError(f"n must be at least 1, got {n}")
        orders = tuple(orders)
        if len(orders) != n + 1:
            raise InputError(f"need {n + 1} truncation orders, got {len(orders)}")
        if any(o < 0 for o in orders) or (cap is not None and cap < 0):
            raise InputError("truncation orders must be nonnegative")
        ins = max(orders[1:])
        s = self._series_entry(n, n, orders[0], ins, cap)
        return s.truncate(orders, cap)

    def _series_entry(self, n: int, m: int, q_order: int, ins_order: int, cap: Optional[int]) -> TruncatedSeries:
        key = (n, m, q_order, ins_order, cap)
        hit = self._series.get(key)
        if hit is not None:
            return hit
        arity = m + 1
        orders = (q_order,) + (ins_order,) * m
        if n == 1:
            base = formulas.one_point_mixed() if m == 1 else formulas.one_point_Linv()
            s = taylor_expand(base, orders, cap)
        elif m < n:
            # the q^{-1} shift needs one more order in q and in total degree
            prev = self._series_entry(n - 1, m, q_order + 1, ins_order, None if cap is None else cap + 1)
            acc = prev
            for i in range(1, m + 1):
                x = Polynomial.var(i, arity)
                acc = acc + prev.mul_polynomial(x).div_polynomial(1 - x)
            s = acc.truncate(orders, cap) - prev.regular_part(0)
        else:
            s = taylor_expand(formulas.kawasaki_subtracted(n), orders, cap)
            for k in range(n):
                pk = self._series_entry(n, k, q_order, ins_order, cap)
                sign = -1 if (n - k) % 2 == 0 else 1
                for subset in itertools.combinations(range(1, n + 1), k):
                    term = pk.rename((0,) + subset, orders, cap)
                    for i in range(1, n + 1):
                        if i not in subset:
                            term = term.div_polynomial(1 - Polynomial.var(i, arity))
                    s = s + term if sign > 0 else s - term
        self._series[key] = s
        return s

    # coefficient extraction

    def resolve_mode(self, req: ChiRequest) -> str:
        if req.mode != "auto":
            mode = req.mode
        else:
            mode = "exact" if req.n <= self.exact_ceiling else "series"
        if mode == "series" and req.needs_inversion:
            raise ModeError("negative exponents and positive Hodge powers need exact mode")
        if mode == "exact" and req.n > self.exact_ceiling:
            raise ModeError(
                f"n={req.n} exceeds the exact-mode ceiling {self.exact_ceiling}; use series mode or raise the ceiling"
            )
        return mode

    def chi(self, req: ChiRequest, inversion_order: Optional[Sequence[int]] = None) -> int:
        """Euler characteristic as an exact integer.

        Exact mode first reads Taylor coefficients in every variable with
        a nonnegative exponent (``q`` counts ``H^{-1}``), then, for each
        remaining variable ``v`` with exponent ``-d``, takes ``[v^d]`` of
        ``-F(v -> 1/v)``. ``inversion_order`` permutes the order of these
        inversions; the answer must not depend on it.
        """
        mode = self.resolve_mode(req)
        if mode == "series":
            orders = (-req.hodge,) + req.exps
            value = self._covering_series(req.n, orders).coefficient(orders)
        else:
            value = self._chi_exact(req, inversion_order)
        return _integral(value, req)

    def _chi_exact(self, req: ChiRequest, inversion_order=None) -> Fraction:
        plain, dual = [], []
        for v, e in enumerate((-req.hodge,) + req.exps):
            (plain if e >= 0 else dual).append((v, -e if e < 0 else e))
        if inversion_order is not None:
            where = dict(dual)
            if sorted(inversion_order) != sorted(where):
                raise InputError("inversion order must list exactly the inverted variables")
            dual = [(v, where[v]) for v in inversion_order]
        steps = tuple(("c", v, e) for v, e in plain) + tuple(("d", v, e) for v, e in dual)
        g = self._reduce(req.n, steps)
        if not g.numerator.is_constant() or g.denominator:
            raise InternalConsistencyError(f"coefficient extraction left a nonconstant function {g}")
        return g.numerator.constant_term()

    def _reduce(self, n: int, steps: tuple) -> RationalFunction:
        if not steps:
            return self.full_genfun(n)
        hit = self._reduced.get((n, steps))
        if hit is not None:
            return hit
        f = self._reduce(n, steps[:-1])
        kind, v, e = steps[-1]
        if kind == "c":
            out = f.series_coefficient(v, e)
        else:
            # [v^e] of F|_{v=0} - F(1/v); the slice drops out since e >= 1
            out = -f.invert_variable(v).series_coefficient(v, e)
        self._reduced[(n, steps)] = out
        return out

    def chi_table(self, n: int, hodge_range: Iterable[int], exp_ranges: Sequence[Iterable[int]],
                  mode: str = "auto", jobs: int = 1) -> List[ChiResult]:
        """Every combination, ``hodge`` varying slowest, in lexicographic order."""
        hodges = list(hodge_range)
        ranges = [list(r) for r in exp_ranges]
        if len(ranges) != n:
            raise InputError(f"expected {n} exponent ranges, got {len(ranges)}")
        reqs = [ChiRequest(n, h, tuple(ex), mode) for h in hodges for ex in itertools.product(*ranges)]
        if not reqs:
            return []
        modes = [self.resolve_mode(r) for r in reqs]
        self._warm(reqs, modes)
        if jobs > 1 and len(reqs) > 1:
            values = _parallel_chi(self, reqs, jobs)
        else:
            values = [self.chi(r) for r in reqs]
        return [ChiResult(r, v, m) for r, v, m in zip(reqs, values, modes)]

    def _warm(self, reqs: List[ChiRequest], modes: List[str]) -> None:
        """Build shared data once: the exact function, or one series covering every cell."""
        n = reqs[0].n
        series = [r for r, m in zip(reqs, modes) if m == "series"]
        if len(series) != len(reqs):
            self.full_genfun(n)
        if series:
            box = [max(-r.hodge for r in series)] + [max(r.exps[i] for r in series) for i in range(n)]
            self._series_entry(n, n, box[0], max(box[1:]), None)

    def _covering_series(self, n: int, orders: Tuple[int, ...]) -> TruncatedSeries:
        """An uncapped series of ``P_{n,n}`` deep enough for ``orders``, reusing memo entries."""
        ins = max(orders[1:])
        for (k_n, k_m, qo, io, cap), s in self._series.items():
            if k_n == n and k_m == n and cap is None and qo >= orders[0] and io >= ins:
                return s
        return self._series_entry(n, n, orders[0], ins, None)


def _integral(value: Fraction, req: ChiRequest) -> int:
    if Fraction(value).denominator != 1:
        raise InternalConsistencyError(
            f"integrality violated: chi(n={req.n}, hodge={req.hodge}, exps={list(req.exps)}) = {value}"
        )
    return int(value)


def _parallel_chi(engine: Engine, reqs: List[ChiRequest], jobs: int) -> List[int]:
    import multiprocessing as mp

    global _WORKER_ENGINE
    _WORKER_ENGINE = engine
    ctx = mp.get_context("fork")
    with ctx.Pool(jobs) as pool:
        return pool.map(_worker_chi, reqs, chunksize=max(1, len(reqs) // (4 * jobs)))


_WORKER_ENGINE: Optional[Engine] = None


def _worker_chi(req: ChiRequest) -> int:
    return _WORKER_ENGINE.chi(req)


# -- module-level convenience -------------------------------------------------

_default: Optional[Engine] = None


def default_engine() -> Engine:
    global _default
    if _default is None:
        _default = Engine(MemoCache(os.environ.get(CACHE_ENV) or None))
    return _default


def partial_genfun(n: int, m: int) -> RationalFunction:
    return default_engine().partial_genfun(n, m)


def full_genfun(n: int) -> RationalFunction:
    return default_engine().full_genfun(n)


def full_genfun_series(n: int, orders: Sequence[int], cap: Optional[int] = None) -> TruncatedSeries:
    return default_engine().full_genfun_series(n, orders, cap)


def chi(n: int, hodge: int, exps: Sequence[int], mode: str = "auto") -> int:
    return default_engine().chi(ChiRequest(n, hodge, tuple(exps), mode))


def chi_table(n: int, hodge_range, exp_ranges, mode: str = "auto", jobs: int = 1) -> List[ChiResult]:
    return default_engine().chi_table(n, hodge_range, exp_ranges, mode, jobs)
