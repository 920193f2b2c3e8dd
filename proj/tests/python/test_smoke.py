"""Smoke tests for the _alwb Python module.

Run with the built extension on sys.path, e.g.
    PYTHONPATH=build pytest tests/python
"""

import pytest

import _alwb


def test_parse_print_round_trip():
    assert _alwb.parse_print("program", "skip") == "skip"
    assert _alwb.parse_print("term", "s(P((x+y)))") == "s(P((x + y)))"
    assert _alwb.parse_print("open", "!(x=0)") == "!(x = 0)"
    f = "forall x . (exists y . (x < y) -> (0 = 0))"
    assert _alwb.parse_print("formula", f) == f


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        _alwb.parse_print("program", "while oops")
    with pytest.raises(ValueError):
        _alwb.parse_print("sonnet", "skip")


def test_artifacts():
    names = _alwb.artifact_names()
    assert "E" in names and "H" in names and "H-union" in names
    e = _alwb.artifact("E")
    assert e["kind"] == "program"
    assert e["text"].startswith("while !(n = m) do")
    assert _alwb.parse_print("program", "@E") == e["text"]
    with pytest.raises(KeyError):
        _alwb.artifact("nope")


def test_run_gcd():
    out = _alwb.run("@E", {"n": 12, "m": 18})
    assert out["outcome"] == "Halted"
    assert out["final"]["n"] == "6"
    assert out["final"]["m"] == "6"


def test_run_nsn_diverges():
    out = _alwb.run(
        "@E", {"n": "NSN(12,0,1)", "m": "NSN(15,1,2)"}, model="nsn", budget=100, trace=True
    )
    assert out["outcome"] == "BudgetExhausted"
    rows = out["trace"]
    assert rows[0]["state"]["m"] == "NSN(15,1,2)"
    assert rows[1]["state"]["m"] == "NSN(3,1,2)"
    assert rows[2]["state"]["m"] == "NSN(-9,1,2)"
    assert all(r["state"]["n"] == "NSN(12,0,1)" for r in rows)


def test_eval_with_witness():
    matrix = (
        "((!(n = 0) & !(m = 0)) -> "
        "U[if (m < n) then n := (n -. m) else m := (m -. n) fi] (n = m))"
    )
    out = _alwb.eval(matrix, {"n": 4, "m": 6})
    assert out["value"] == "True"
    assert out["witness"] == 3
    assert out["witness"] == _alwb.loop_iteration_count(4, 6)


def test_validate():
    out = _alwb.validate("(x < s(x))", var_bound=4)
    assert out["verdict"] == "ValidUpToBound"
    assert out["valuations_checked"] == 5
    out = _alwb.validate("(s(x) < x)", var_bound=4)
    assert out["verdict"] == "Refuted"
    assert out["counterexample"] == {"x": "0"}


def test_oracles():
    assert _alwb.gcd_oracle(12, 18) == 6
    assert _alwb.gcd_oracle(12, 15) == 3
    assert _alwb.max_oracle(4, 9) == 9
    with pytest.raises(ValueError):
        _alwb.gcd_oracle(0, 3)
    assert _alwb.engeler_witness(4, 6) == (3, 2, 3)
    dis = _alwb.engeler_disjunction(2)
    assert [(a, b) for a, b, _ in dis] == [(1, 1), (1, 2), (2, 1)]
    assert dis[1][2] == "(n = (m + m))"


def test_demo():
    out = _alwb.demo("standard", n=12, m=18)
    assert out["pass"]
    assert "3 loop iterations" in out["detail"]
    assert out["text"].startswith("demo: standard\n")
    assert out["text"].rstrip().endswith("verdict: PASS final n = 6, 3 loop iterations")


def test_check_proof():
    script = """
step s1:
  formula: (0 = 0)
  by: trusted zero-refl validate bound=2 budget=50
"""
    out = _alwb.check_proof(script)
    assert out["accepted"]
    assert out["trusted"] == ["zero-refl"]
    assert out["steps"][0]["verdict"] == "OK"
    assert out["render"].endswith("ACCEPTED trusting [zero-refl]\n")
