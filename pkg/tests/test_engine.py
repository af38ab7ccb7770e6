import itertools
import os
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkgenus1 import formulas
from qkgenus1.arith import taylor_expand
from qkgenus1.engine import (
    ChiRequest,
    Engine,
    InvariantKey,
    MemoCache,
    _integral,
)
from qkgenus1.errors import InputError, InternalConsistencyError, ModeError
from qkgenus1.oracles import modular_dim


def chi(engine, n, hodge, exps, mode="auto"):
    return engine.chi(ChiRequest(n, hodge, tuple(exps), mode))


# -- keys and requests -------------------------------------------------------------


def test_invariant_key():
    k = InvariantKey(3, 2)
    assert str(k) == "3,2" and InvariantKey.parse("3,2") == k
    assert InvariantKey(2, 2) < InvariantKey(3, 0)
    for bad in [(0, 0), (2, 3), (2, -1)]:
        with pytest.raises(InputError):
            InvariantKey(*bad)
    with pytest.raises(InputError):
        InvariantKey.parse("3;2")


def test_chi_request_validation():
    with pytest.raises(InputError):
        ChiRequest(0, 0, ())
    with pytest.raises(InputError):
        ChiRequest(2, 0, (1,))
    with pytest.raises(InputError):
        ChiRequest(1, 0, (1,), "fast")
    assert ChiRequest(2, 1, (0, 0)).needs_inversion
    assert ChiRequest(2, 0, (0, -1)).needs_inversion
    assert not ChiRequest(2, -3, (0, 5)).needs_inversion


# -- exact generating functions ---------------------------------------------------------


def test_base_values(engine):
    assert engine.partial_genfun(1, 1) == formulas.one_point_mixed()
    assert engine.partial_genfun(1, 0) == formulas.one_point_Linv()
    assert engine.full_genfun(1) == formulas.one_point_mixed()


def test_two_point_values(engine):
    p20 = engine.partial_genfun(2, 0)
    assert taylor_expand(p20, (0,)).coefficient((0,)) == 1
    p22 = engine.full_genfun(2)
    s = taylor_expand(p22, (0, 1, 1))
    assert s.coefficient((0, 1, 0)) == 0
    assert s.coefficient((0, 1, 1)) == 0
    assert p22.restrict(2) == engine.partial_genfun(2, 1)


def test_two_routes_agree(engine):
    # P_{2,2} with q = q_2 = 0 against the pushdown route P_{2,1} with q = 0
    a = taylor_expand(engine.full_genfun(2), (0, 6, 0))
    b = taylor_expand(engine.partial_genfun(2, 1), (0, 6))
    assert all(a.coefficient((0, d, 0)) == b.coefficient((0, d)) for d in range(7))


def test_exact_ceiling():
    e = Engine(exact_ceiling=2)
    with pytest.raises(ModeError):
        e.full_genfun(3)
    with pytest.raises(ModeError):
        e.chi(ChiRequest(3, 0, (0, 0, 0), "exact"))
    assert e.chi(ChiRequest(3, 0, (0, 0, 0))) == 1
    assert e.resolve_mode(ChiRequest(3, 0, (0, 0, 0))) == "series"


def test_series_needs_nonnegative():
    e = Engine()
    with pytest.raises(ModeError):
        e.chi(ChiRequest(1, 0, (-1,), "series"))
    with pytest.raises(ModeError):
        e.chi(ChiRequest(1, 1, (0,), "series"))


# -- series mode --------------------------------------------------------------------


def test_series_agrees_two_points(engine):
    orders = (4, 4, 4)
    assert engine.full_genfun_series(2, orders) == taylor_expand(engine.full_genfun(2), orders)


def test_series_one_point_constant():
    s = Engine().full_genfun_series(1, (0, 0))
    assert s.as_dict() == {(0, 0): 1}


def test_series_five_points_subtracted_coefficient(engine):
    # chi(prod (L_i - 1)) recovered from the 0/1 coefficients
    s = engine.full_genfun_series(5, (0,) + (1,) * 5)
    total = 0
    for u in itertools.product((0, 1), repeat=5):
        total += (-1) ** (5 - sum(u)) * s.coefficient((0,) + u)
    assert total == 1


def test_series_input_validation(engine):
    with pytest.raises(InputError):
        engine.full_genfun_series(2, (1, 1))
    with pytest.raises(InputError):
        engine.full_genfun_series(2, (1, -1, 1))
    with pytest.raises(InputError):
        engine.full_genfun_series(0, (1,))


# -- chi -----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n,hodge,exps,value",
    [(1, 0, [4], 1), (1, 0, [-1], 0), (2, 0, [0, 0], 1), (2, 0, [1, 0], 0), (2, 0, [1, 1], 0),
     (2, 0, [-1, -1], -1), (3, 0, [-1, -1, -1], 2), (1, 0, [12], 2)],
)
def test_chi_values(engine, n, hodge, exps, value):
    assert chi(engine, n, hodge, exps) == value


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_chi_structure_sheaf(engine, n):
    assert chi(engine, n, 0, [0] * n) == 1


def test_chi_negative_one_point(engine):
    s = taylor_expand(formulas.one_point_Linv(), (30,))
    assert [chi(engine, 1, 0, [-d]) for d in range(31)] == [s.coefficient((d,)) for d in range(31)]


def test_hodge_and_cotangent_agree_on_one_point(engine):
    # H = L_1 on the one-point space
    for d in range(-12, 13):
        assert chi(engine, 1, d, [0]) == chi(engine, 1, 0, [d])


def test_chi_modes_agree(engine):
    for exps in itertools.product(range(3), repeat=3):
        assert chi(engine, 3, -1, exps, "exact") == chi(engine, 3, -1, exps, "series")


def test_inversion_order_independent(engine):
    for exps in [(-1, -2, 1), (-2, -1, -1), (0, -3, -1)]:
        req = ChiRequest(3, 0, exps)
        neg = [i + 1 for i, e in enumerate(exps) if e < 0]
        values = {engine.chi(req, inversion_order=list(p)) for p in itertools.permutations(neg)}
        assert len(values) == 1
    with pytest.raises(InputError):
        engine.chi(ChiRequest(2, 0, (-1, -1)), inversion_order=[1])


def test_integrality_guard():
    req = ChiRequest(1, 0, (0,))
    assert _integral(Fraction(4), req) == 4
    with pytest.raises(InternalConsistencyError):
        _integral(Fraction(1, 2), req)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(-3, 3), min_size=n, max_size=n))),
       st.randoms(use_true_random=False))
def test_chi_symmetric(engine, args, rnd):
    n, exps = args
    perm = list(exps)
    rnd.shuffle(perm)
    assert chi(engine, n, 0, exps) == chi(engine, n, 0, perm)


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 0), st.lists(st.integers(0, 5), min_size=2, max_size=2))
def test_chi_matches_series_coefficients(engine, hodge, exps):
    s = engine.full_genfun_series(2, (4, 5, 5))
    assert chi(engine, 2, hodge, exps) == s.coefficient((-hodge, *exps))


# -- tables ------------------------------------------------------------------------------


def test_table_one_point(engine):
    rows = engine.chi_table(1, [0], [range(13)])
    assert [r.value for r in rows] == [modular_dim(d) for d in range(13)]
    assert [r.request.exps for r in rows] == [(d,) for d in range(13)]


def test_table_two_points(engine):
    rows = engine.chi_table(2, [0], [range(2), range(2)])
    assert [r.value for r in rows] == [1, 0, 0, 0]


def test_table_empty(engine):
    assert engine.chi_table(2, [], [range(2), range(2)]) == []
    assert engine.chi_table(1, [0], [[]]) == []
    with pytest.raises(InputError):
        engine.chi_table(2, [0], [range(2)])


def test_table_order_and_jobs(engine):
    serial = engine.chi_table(2, [-1, 0], [range(-1, 3), range(3)])
    assert [(r.request.hodge, r.request.exps) for r in serial] == \
        [(h, e) for h in (-1, 0) for e in itertools.product(range(-1, 3), range(3))]
    parallel = engine.chi_table(2, [-1, 0], [range(-1, 3), range(3)], jobs=2)
    assert [r.value for r in parallel] == [r.value for r in serial]


# -- cache -------------------------------------------------------------------------------


def test_cache_transparency(tmp_path):
    path = str(tmp_path / "c")
    cold = Engine(MemoCache(path))
    values = [chi(cold, 3, h, e) for h in (-1, 0, 1) for e in [(0, 1, 2), (2, -1, 0)]]
    warm = Engine(MemoCache(path))
    assert [chi(warm, 3, h, e) for h in (-1, 0, 1) for e in [(0, 1, 2), (2, -1, 0)]] == values
    assert warm.cache.hits > 0 and warm.cache.misses == 0
    none = Engine()
    assert [chi(none, 3, h, e) for h in (-1, 0, 1) for e in [(0, 1, 2), (2, -1, 0)]] == values
    for key in warm.cache.keys():
        assert warm.partial_genfun(key.n, key.m).serialize() == none.partial_genfun(key.n, key.m).serialize()


def test_cache_file_format(tmp_path):
    path = tmp_path / "c"
    Engine(MemoCache(str(path))).full_genfun(2)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# qkgenus1-cache format=1 engine=")
    keys = [line.split("\t")[0] for line in lines[1:]]
    assert sorted(keys) == ["1,0", "1,1", "2,0", "2,1", "2,2"]
    assert all(len(line.split("\t")) == 4 for line in lines[1:])


def test_cache_corrupt_record_recomputed(tmp_path):
    path = tmp_path / "c"
    ref = Engine(MemoCache(str(path))).full_genfun(2).serialize()
    lines = path.read_text().splitlines(keepends=True)
    idx = next(i for i, line in enumerate(lines) if line.startswith("2,2\t"))
    lines[idx] = lines[idx].replace("q1", "q2", 1)
    lines.insert(1, "garbage line\n")
    path.write_text("".join(lines))
    e = Engine(MemoCache(str(path)))
    assert e.full_genfun(2).serialize() == ref
    assert e.cache.discarded == 2


def test_cache_bad_payload_with_good_checksum(tmp_path):
    from qkgenus1.engine import _checksum, _header

    path = tmp_path / "c"
    body = "1,0\tnot a function\t1"
    path.write_text(_header() + f"{body}\t{_checksum(body)}\n")
    e = Engine(MemoCache(str(path)))
    assert e.partial_genfun(1, 0) == formulas.one_point_Linv()
    assert e.cache.discarded == 1


def test_cache_version_mismatch_ignored(tmp_path):
    path = tmp_path / "c"
    Engine(MemoCache(str(path))).full_genfun(1)
    text = path.read_text().replace("engine=", "engine=old", 1)
    path.write_text(text)
    e = Engine(MemoCache(str(path)))
    e.full_genfun(1)
    assert e.cache.hits == 0 and e.cache.discarded == 1


def test_cache_clear(tmp_path):
    path = tmp_path / "c"
    c = MemoCache(str(path))
    Engine(c).full_genfun(1)
    assert os.path.exists(path) and c.keys()
    c.clear()
    assert not os.path.exists(path) and c.keys() == []


def test_cache_idempotent_put(tmp_path):
    path = tmp_path / "c"
    c = MemoCache(str(path))
    f = formulas.one_point_Linv()
    c.put(InvariantKey(1, 0), f, f.at_zero(0))
    c.put(InvariantKey(1, 0), f, f.at_zero(0))
    assert len(path.read_text().splitlines()) == 2


def test_default_engine_uses_env(tmp_path, monkeypatch):
    import qkgenus1.engine as eng

    path = tmp_path / "env.cache"
    monkeypatch.setenv("QKGENUS1_CACHE", str(path))
    monkeypatch.setattr(eng, "_default", None)
    assert eng.chi(1, 0, [6]) == 1
    assert path.exists()
    assert [r.value for r in eng.chi_table(1, [0], [range(3)])] == [1, 0, 0]
