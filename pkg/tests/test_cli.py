import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qkgenus1 import formulas
from qkgenus1.cli import emit_table, run
from qkgenus1.engine import ChiRequest, ChiResult


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


# -- chi ---------------------------------------------------------------------------------


def test_chi_text():
    assert call("chi", "--n", "1", "--hodge", "0", "--exps", "4", "--no-cache") == (0, "1\n")
    assert call("chi", "--n", "2", "--hodge", "0", "--exps", "1,1", "--no-cache") == (0, "0\n")


def test_chi_negative_exponents():
    assert call("chi", "--n", "2", "--exps=-1,-1", "--no-cache") == (0, "-1\n")
    assert call("chi", "--n", "1", "--hodge=-10", "--exps", "0", "--no-cache") == (0, "-1\n")
    assert call("chi", "--n", "1", "--hodge", "10", "--exps", "0", "--no-cache") == (0, "1\n")


def test_chi_formats():
    code, text = call("chi", "--n", "2", "--exps", "0,0", "--format", "json", "--no-cache")
    assert code == 0
    assert json.loads(text) == [{"n": 2, "hodge": 0, "exps": [0, 0], "mode": "exact", "chi": 1}]
    code, text = call("chi", "--n", "2", "--exps", "0,0", "--format", "csv", "--no-cache")
    assert text == "n,hodge,d1,d2,chi\n2,0,0,0,1\n"


@pytest.mark.parametrize("argv", [
    ["chi", "--n", "0", "--exps", "1"],
    ["chi", "--n", "2", "--exps", "1"],
    ["chi", "--n", "1", "--exps", "x"],
    ["chi", "--n", "1", "--exps=-1", "--mode", "series"],
    ["chi", "--n", "5", "--exps", "0,0,0,0,0", "--mode", "exact"],
    ["chi", "--n", "1", "--exps", "0", "--exact-ceiling", "0"],
    ["chi", "--n", "1", "--exps", "0", "--mode", "fast"],
    ["chi", "--n", "1"],
    ["table", "--n", "2", "--exps", "0:1"],
    ["table", "--n", "1", "--exps", "3:1"],
    ["table", "--n", "1", "--exps", "0:1", "--jobs", "0"],
    ["series", "--n", "1", "--order", "-1"],
    ["cache", "info", "--no-cache"],
    [],
])
def test_invalid_input_exit_2(argv, capsys):
    code, _ = call(*argv, "--no-cache") if argv and argv[0] != "cache" else call(*argv)
    assert code == 2
    err = capsys.readouterr().err
    assert err.strip()


def test_error_message_names_contract(capsys):
    call("chi", "--n", "0", "--exps", "1", "--no-cache")
    assert "n must be at least 1" in capsys.readouterr().err


def test_internal_failure_exit_3(monkeypatch, capsys):
    from qkgenus1 import engine as eng

    def broken(value, req):
        raise eng.InternalConsistencyError("integrality violated: test")

    monkeypatch.setattr(eng, "_integral", broken)
    assert call("chi", "--n", "1", "--exps", "4", "--no-cache")[0] == 3
    assert "integrality" in capsys.readouterr().err


def test_inversion_unsupported_exit_3(monkeypatch):
    from qkgenus1.engine import Engine
    from qkgenus1.errors import InversionUnsupported

    def refuse(self, req, inversion_order=None):
        raise InversionUnsupported("factor stays singular")

    monkeypatch.setattr(Engine, "chi", refuse)
    assert call("chi", "--n", "2", "--hodge", "1", "--exps=-1,-1", "--no-cache")[0] == 3


def test_mixed_sign_request():
    assert call("chi", "--n", "2", "--hodge", "1", "--exps=-1,-1", "--no-cache") == (0, "1\n")


# -- tables -------------------------------------------------------------------------------


def test_emit_table_csv_row():
    row = ChiResult(ChiRequest(1, 0, (12,)), 2, "exact")
    assert emit_table([row], "csv", 1) == "n,hodge,d1,chi\n1,0,12,2\n"


def test_emit_table_empty():
    assert emit_table([], "csv", 2) == "n,hodge,d1,d2,chi\n"
    assert json.loads(emit_table([], "json", 2)) == []


def test_emit_table_json_round_trip():
    rows = [ChiResult(ChiRequest(2, h, (a, b)), a - b, "exact") for h in (0, -1) for a in (0, 1) for b in (2, 3)]
    text = emit_table(rows, "json", 2)
    assert text.endswith("\n")
    back = json.loads(text)
    assert back == [{"n": r.request.n, "hodge": r.request.hodge, "exps": list(r.request.exps), "mode": r.mode,
                     "chi": r.value} for r in rows]


def test_table_one_point_row():
    code, text = call("table", "--n", "1", "--exps", "0:12", "--no-cache")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "hodge", "d1", "chi"]
    assert [int(r[3]) for r in rows[1:]] == [1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 2]


def test_table_ranges_and_order():
    code, text = call("table", "--n", "2", "--hodge=-1:0", "--exps=-1:0,0:1", "--no-cache", "--format", "json")
    assert code == 0
    recs = json.loads(text)
    assert [(r["hodge"], r["exps"]) for r in recs] == [
        (-1, [-1, 0]), (-1, [-1, 1]), (-1, [0, 0]), (-1, [0, 1]),
        (0, [-1, 0]), (0, [-1, 1]), (0, [0, 0]), (0, [0, 1]),
    ]


def test_table_jobs_identical():
    a = call("table", "--n", "2", "--hodge=-1:1", "--exps=-2:2,0:2", "--no-cache")
    b = call("table", "--n", "2", "--hodge=-1:1", "--exps=-2:2,0:2", "--no-cache", "--jobs", "3")
    assert a == b and a[0] == 0


def test_table_text_format():
    code, text = call("table", "--n", "1", "--exps", "4", "--format", "text", "--no-cache")
    assert text == "n hodge d1 chi\n1 0 4 1\n"


# -- series, genfun ----------------------------------------------------------------------


def test_series_text_and_json():
    code, text = call("series", "--n", "1", "--order", "6", "--no-cache")
    assert code == 0 and text.startswith("[orders 6,6 | cap 6] 1 + q*q1")
    code, text = call("series", "--n", "1", "--order", "6", "--no-cache", "--format", "json")
    doc = json.loads(text)
    assert doc["orders"] == [6, 6] and doc["cap"] == 6
    terms = {tuple(t["exponents"]): Fraction(t["coefficient"]) for t in doc["terms"]}
    assert terms[(0, 4)] == 1 and (0, 2) not in terms


def test_series_csv():
    code, text = call("series", "--n", "2", "--order", "2", "--no-cache", "--format", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["q", "q1", "q2", "coefficient"] and rows[1] == ["0", "0", "0", "1"]


def test_series_large_n():
    code, text = call("series", "--n", "5", "--order", "2", "--no-cache", "--format", "csv")
    assert code == 0 and len(text.splitlines()) > 2


def test_genfun_canonical():
    code, text = call("genfun", "--n", "1", "--no-cache")
    assert code == 0 and text == formulas.one_point_mixed().serialize() + "\n"
    code, text = call("genfun", "--n", "1", "--m", "0", "--no-cache", "--format", "json")
    assert json.loads(text)["genfun"] == formulas.one_point_Linv().serialize()
    assert call("genfun", "--n", "2", "--m", "3", "--no-cache")[0] == 2


# -- verify ------------------------------------------------------------------------------


def test_verify_fast():
    code, text = call("verify", "--suite", "fast", "--no-cache")
    assert code == 0
    assert text.count("PASS") == 4 and "FAIL" not in text


def test_verify_json_records():
    code, text = call("verify", "--no-cache", "--format", "json")
    recs = json.loads(text)
    assert {r["status"] for r in recs} == {"pass"} and all("name" in r for r in recs)


def test_verify_mutation_exit_4(monkeypatch):
    monkeypatch.setattr(formulas, "SIGMA4_CONSTANT", Fraction(1, 4))
    # no cache file: the mutated constant must not leak into stored values
    code, text = call("verify", "--suite", "all", "--no-cache", "--exact-ceiling", "3", "--format", "csv")
    assert code == 4
    rows = {r[0]: r[1] for r in csv.reader(io.StringIO(text))}
    assert rows["p1_stratum_four_points"] == "fail"


def test_verify_all_census(engine, cache_path):
    # the session cache already holds the four-point function
    code, text = call("verify", "--suite", "all", "--cache", cache_path, "--format", "csv")
    rows = list(csv.reader(io.StringIO(text)))[1:]
    assert len(rows) >= 10
    failed = [r[0] for r in rows if r[1] == "fail"]
    assert code == (4 if failed else 0)


# -- cache and determinism ---------------------------------------------------------------------


def test_cache_round_trip(tmp_path, capsys):
    path = str(tmp_path / "c")
    argv = ["table", "--n", "3", "--hodge=-1:0", "--exps", "0:1,0:1,0:2", "--cache", path]
    cold = call(*argv)
    cold_err = capsys.readouterr().err
    warm = call(*argv)
    warm_err = capsys.readouterr().err
    assert cold == warm and cold[0] == 0
    assert "cache_misses=0" not in cold_err
    assert "cache_hits=0" not in warm_err and "cache_misses=0" in warm_err
    assert call(*argv[:-2], "--no-cache") == cold


def test_cache_env_default(tmp_path, monkeypatch):
    path = tmp_path / "env.cache"
    monkeypatch.setenv("QKGENUS1_CACHE", str(path))
    assert call("chi", "--n", "2", "--exps", "0,0")[0] == 0
    assert path.exists()


def test_cache_info_and_clear(tmp_path):
    path = str(tmp_path / "c")
    call("chi", "--n", "2", "--exps", "1,0", "--cache", path)
    code, text = call("cache", "info", "--cache", path)
    assert code == 0 and "entries 5" in text
    code, text = call("cache", "info", "--cache", path, "--format", "json")
    assert json.loads(text)["entries"] == ["1,0", "1,1", "2,0", "2,1", "2,2"]
    assert call("cache", "clear", "--cache", path)[0] == 0
    assert "entries 0" in call("cache", "info", "--cache", path)[1]


def test_corrupted_cache_recomputed(tmp_path):
    path = tmp_path / "c"
    argv = ["table", "--n", "2", "--exps", "0:2,0:2", "--cache", str(path)]
    ref = call(*argv)
    text = path.read_text().replace("q1", "q2", 3)
    path.write_text(text)
    assert call(*argv) == ref


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "qkgenus1", "chi", "--n", "1", "--exps", "12", "--no-cache"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "2\n"
    out = subprocess.run([sys.executable, "-m", "qkgenus1", "chi", "--n", "0", "--exps", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 2
