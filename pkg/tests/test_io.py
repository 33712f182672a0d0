import json
import os
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import ideals, valuations
from newton_lct import cli
from newton_lct.cache import TermCache
from newton_lct.errors import ValidationError
from newton_lct.kiselman import ToricPsh
from newton_lct.monomial import MonomialIdeal
from newton_lct.polyhedron import NewtonPolyhedron
from newton_lct.sequences import ExplicitTerms, GradedSequence, PowerFamily, SubadditiveSequence, ValuationFamily, multiplier_family
from newton_lct.serialize import from_json, to_json, validate_document
from newton_lct.valuation import MonomialValuation

x = MonomialIdeal.of


# -- round trips -------------------------------------------------------------


def _roundtrip(obj):
    return from_json(json.loads(json.dumps(to_json(obj))))


@given(ideals(proper=False))
def test_roundtrip_ideal(a):
    assert _roundtrip(a) == a


@given(st.integers(1, 4).flatmap(valuations))
def test_roundtrip_valuation(v):
    assert _roundtrip(v) == v


def test_roundtrip_polyhedron_and_psh():
    P = NewtonPolyhedron(2, ((F(1, 2), 3), (4, F(0))))
    assert _roundtrip(P) == P
    phi = ToricPsh(2, (((F(1, 2), 0), F(-3, 4)), ((0, 5), F(0))))
    assert _roundtrip(phi) == phi


def test_roundtrip_sequences():
    seqs = [
        GradedSequence(PowerFamily(x((2, 0), (0, 3)))),
        GradedSequence(ValuationFamily(MonomialValuation.of(F(1, 2), 3), F(3, 2))),
        GradedSequence(ExplicitTerms((x((1, 1)), x((2, 2), (3, 0))))),
        SubadditiveSequence(ExplicitTerms((MonomialIdeal.unit(2), x((1, 0), (0, 1))))),
        multiplier_family(GradedSequence(PowerFamily(x((2, 0), (0, 3))))),
    ]
    for s in seqs:
        back = _roundtrip(s)
        assert type(back) is type(s)
        assert [back.term(j) for j in (1, 2)] == [s.term(j) for j in (1, 2)]
        assert to_json(back) == to_json(s)


def test_schema_rejects_unknown_fields_and_floats():
    ok = {"kind": "ideal", "dim": 2, "generators": [[2, 0], [0, 3]]}
    assert validate_document(ok) is ok
    for bad in (
        {**ok, "extra": 1},
        {"kind": "ideal", "dim": 2},
        {"kind": "valuation", "dim": 2, "weights": [0.5, 1]},
        {"kind": "nope", "dim": 1},
        {"kind": "ideal", "dim": 0, "generators": []},
        [1, 2],
    ):
        with pytest.raises(ValidationError):
            validate_document(bad)


# -- cache -------------------------------------------------------------------


def test_cache_hits_and_poisoning(tmp_path):
    cache = TermCache(tmp_path)
    seq = GradedSequence(ValuationFamily(MonomialValuation.of(1, 2), 1), cache=cache)
    terms = [seq.term(j) for j in range(1, 17)]
    assert cache.misses == 16 and cache.hits == 0
    cache2 = TermCache(tmp_path)
    seq2 = GradedSequence(ValuationFamily(MonomialValuation.of(1, 2), 1), cache=cache2)
    assert [seq2.term(j) for j in range(1, 17)] == terms
    assert cache2.hits == 16
    # flip one byte inside a stored generator list
    victim = sorted(tmp_path.rglob("*.json"))[0]
    raw = bytearray(victim.read_bytes())
    i = raw.index(b"generators") + 16
    raw[i] = ord("7") if raw[i] != ord("7") else ord("8")
    victim.write_bytes(bytes(raw))
    cache3 = TermCache(tmp_path)
    seq3 = GradedSequence(ValuationFamily(MonomialValuation.of(1, 2), 1), cache=cache3)
    assert [seq3.term(j) for j in range(1, 17)] == terms
    assert cache3.corrupt == 1


def test_cache_unwritable_dir_warns(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cache = TermCache(blocker / "sub")
    assert not cache.enabled
    seq = GradedSequence(PowerFamily(x((1, 1))), cache=cache)
    assert seq.term(3) == x((3, 3))
    assert "not writable" in caplog.text


def test_cache_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("NEWTON_LCT_CACHE", str(tmp_path))
    assert TermCache.from_env().directory == tmp_path
    monkeypatch.delenv("NEWTON_LCT_CACHE")
    assert TermCache.from_env() is None


# -- CLI ---------------------------------------------------------------------


def run_cli(capsys, argv, doc=None, tmp_path=None):
    if doc is not None:
        p = tmp_path / "in.json"
        p.write_text(json.dumps(doc))
        argv = argv + ["--input", str(p)]
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


X2Y3 = {"kind": "ideal", "dim": 2, "generators": [[2, 0], [0, 3]]}


def test_cli_lct(capsys, tmp_path):
    code, out, _ = run_cli(capsys, ["lct"], X2Y3, tmp_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["value"] == "5/6"
    assert doc["result"]["witness"] == ["3/5", "2/5"]
    assert doc["result"]["witness_min_one"] == ["3/2", "1"]
    assert set(doc) == {"tool", "version", "operation", "input_sha256", "seed", "parameters", "passed", "result"}
    assert list(json.loads(out)) == sorted(doc)


def test_cli_witness(capsys, tmp_path):
    doc = {"kind": "graded_sequence", "dim": 2, "presentation": {"type": "valuation", "weights": ["1", "2"]}}
    code, out, _ = run_cli(capsys, ["witness"], doc, tmp_path)
    res = json.loads(out)["result"]
    assert code == 0
    assert res["certificate"]["value"] == "3" and res["certificate"]["witness"] == ["1", "2"]


def test_cli_exit_codes(capsys, tmp_path):
    assert run_cli(capsys, ["lct"], {**X2Y3, "bogus": 1}, tmp_path)[0] == 2
    assert run_cli(capsys, ["jump"], {"kind": "valuation", "dim": 1, "weights": ["1"]}, tmp_path)[0] == 2
    explicit = {"kind": "graded_sequence", "dim": 2, "presentation": {"type": "explicit", "terms": [[[1, 1]]]}}
    assert run_cli(capsys, ["witness"], explicit, tmp_path)[0] == 3
    big = {"kind": "experiment", "dim": 5, "pieces": [{"c": ["1", "0", "0", "0", "0"]}]}
    assert run_cli(capsys, ["volume"], big, tmp_path)[0] == 3
    nongraded = {"kind": "graded_sequence", "dim": 1, "presentation": {"type": "explicit", "terms": [[[1]], [[3]]]}}
    code, _, err = run_cli(capsys, ["sequence"], nongraded, tmp_path)
    assert code == 2 and "not graded" in err


def test_cli_property_failure_exit_4(capsys, tmp_path):
    m2 = lambda k: [[i, k - i] for i in range(k + 1)]
    doc = {
        "kind": "subadditive_sequence",
        "dim": 2,
        "presentation": {"type": "explicit", "terms": [m2(j * j) for j in range(1, 6)]},
        "valuations": [["1", "1"]],
    }
    code, out, err = run_cli(capsys, ["sequence", "--max-index", "5"], doc, tmp_path)
    assert code == 4
    assert json.loads(out)["passed"] is False
    assert "property check failed" in err


def test_cli_other_operations(capsys, tmp_path):
    code, out, _ = run_cli(capsys, ["multiplier"], {"kind": "ideal", "dim": 2, "generators": [[1, 0], [0, 1]], "c": "2"}, tmp_path)
    assert code == 0 and json.loads(out)["result"]["multiplier_ideal"]["generators"] == [[1, 0], [0, 1]]
    code, out, _ = run_cli(capsys, ["jump"], {"kind": "ideal", "dim": 2, "generators": [[1, 0], [0, 1]], "q": [[1, 0]]}, tmp_path)
    assert json.loads(out)["result"]["value"] == "3"
    code, out, _ = run_cli(capsys, ["valuate"], {"kind": "valuation", "dim": 2, "weights": ["1", "2"], "threshold": "2"}, tmp_path)
    assert json.loads(out)["result"]["valuation_ideal"]["generators"] == [[0, 1], [2, 0]]
    psh = {"kind": "toric_psh", "dim": 2, "pieces": [{"c": ["2", "0"]}, {"c": ["0", "3"]}], "valuations": [["3", "2"]]}
    code, out, _ = run_cli(capsys, ["kiselman", "--epsilon", "1/4"], psh, tmp_path)
    assert code == 0 and json.loads(out)["result"]["numbers"][0]["value"] == "6"
    code, out, _ = run_cli(capsys, ["p102", "--max-index", "6"], psh, tmp_path)
    assert code == 0 and json.loads(out)["result"]["battery"]["details"]["exponent"] == "5/6"
    exp = {"kind": "experiment", "dim": 1, "pieces": [{"c": ["1"]}], "points": 5}
    code, out, _ = run_cli(capsys, ["volume", "--format", "csv", "--delta", "1"], exp, tmp_path)
    assert code == 0 and out.splitlines()[0] == "r,volume,log_r,log_volume" and len(out.splitlines()) == 6


def test_cli_pretty_goes_to_stderr(capsys, tmp_path):
    code, out, err = run_cli(capsys, ["lct", "--pretty"], X2Y3, tmp_path)
    assert code == 0 and json.loads(out)
    assert "value" in err and "5/6" in err


def test_cli_sequence_cache_determinism(tmp_path):
    doc = {
        "kind": "subadditive_sequence",
        "dim": 2,
        "presentation": {"type": "multiplier", "source": {"type": "power", "generators": [[2, 0], [0, 3]]}},
        "valuations": [["1", "1"]],
    }
    p = tmp_path / "s.json"
    p.write_text(json.dumps(doc))
    base = [sys.executable, "-m", "newton_lct.cli", "sequence", "--input", str(p), "--j", "16"]
    env = {**os.environ}
    env.pop("NEWTON_LCT_CACHE", None)
    plain = subprocess.run(base, capture_output=True, env=env, check=True)
    first = subprocess.run(base + ["--cache-dir", str(tmp_path / "c"), "-v"], capture_output=True, env=env, check=True)
    second = subprocess.run(base + ["-v"], capture_output=True, env={**env, "NEWTON_LCT_CACHE": str(tmp_path / "c")}, check=True)
    assert plain.stdout == first.stdout == second.stdout
    assert b"'hits': 16" in second.stderr


def test_cli_stdin(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "newton_lct.cli", "lct"], input=json.dumps(X2Y3).encode(), capture_output=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["value"] == "5/6"


def test_cli_selftest_subset(capsys):
    code, out, err = run_cli(capsys, ["selftest", "--only", "2,3,6"])
    assert code == 0
    crit = json.loads(out)["result"]["criteria"]
    assert [c["criterion"] for c in crit] == [2, 3, 6]
    assert err.count("[PASS]") == 3
