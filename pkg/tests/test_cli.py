import json
from pathlib import Path

import pytest

from katohull import cli
from katohull.errors import DecompositionInconclusive

DATA = Path(__file__).resolve().parent.parent / "data"


def run_json(capsys, *argv):
    status = cli.main([*argv, "--format", "json"])
    out = capsys.readouterr()
    return status, json.loads(out.out), out.err


def test_hull_test_on_kato_complex_of_simple(capsys):
    status, rep, _ = run_json(capsys, "hull-test", "--algebra", str(DATA / "a2.json"),
                              "--module", str(DATA / "s1.json"))
    assert status == 0
    assert rep["result"]["verdict"] == "InL"
    assert rep["schema"] == cli.SCHEMA


def test_self_injective_dual_numbers(capsys):
    status, rep, _ = run_json(capsys, "self-injective", "--algebra", str(DATA / "dual_numbers.json"))
    assert status == 0
    res = rep["result"]
    assert res["selfInjective"] and all(c["holds"] for c in res["conditions"].values())


def test_stalk_complex_verdict(capsys):
    status, rep, _ = run_json(capsys, "hull-test", "--algebra", str(DATA / "a2.json"),
                              "--complex", str(DATA / "stalk_p1.json"))
    assert status == 0 and rep["result"]["verdict"] == "InHstp"


@pytest.mark.parametrize("verb,key,value", [
    ("g0p", "group", "Z/2"),
    ("g0st", "group", "Z/2"),
    ("stp", "stronglyProjectiveInjective", ["1"]),
])
def test_dual_numbers_verbs(capsys, verb, key, value):
    status, rep, _ = run_json(capsys, verb, "--algebra", str(DATA / "dual_numbers.json"))
    assert status == 0 and rep["result"][key] == value


def test_g0_report_fields(capsys):
    _, rep, _ = run_json(capsys, "g0p", "--algebra", str(DATA / "a2.json"))
    assert set(rep["result"]) >= {"generators", "relationCount", "invariantFactors", "freeRank", "exactnessStamp"}


def test_json_is_deterministic(capsys):
    argv = ["sigma-check", "--algebra", str(DATA / "cyclic_nakayama.json"), "--seed", "3", "--format", "json"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    assert capsys.readouterr().out == first


def test_resolve_and_kato_verbs(capsys):
    status, rep, _ = run_json(capsys, "resolve", "--algebra", str(DATA / "a2.json"), "--module", str(DATA / "s1.json"))
    assert status == 0 and rep["result"]["terms"] == [[0], [1]]
    status, rep, _ = run_json(capsys, "kato", "--algebra", str(DATA / "a2.json"), "--module",
                              str(DATA / "s1.json"), "--window=-2:2")
    assert rep["result"]["complex"]["terms"] == {"-1": [1], "0": [0]}


def test_nu_domdim(capsys):
    _, rep, _ = run_json(capsys, "nu-domdim", "--algebra", str(DATA / "dual_numbers.json"), "--cap", "4")
    assert rep["result"]["display"] == ">=4"


def test_morita_check_from_files(capsys, tmp_path):
    import subprocess
    import sys

    script = Path(__file__).resolve().parent.parent / "scripts" / "make_morita_pair.py"
    subprocess.run([sys.executable, str(script), "--algebra", str(DATA / "a2.json"), "--out", str(tmp_path)],
                   check=True, capture_output=True)
    status, rep, _ = run_json(capsys, "morita-check", "--m", str(tmp_path / "m.json"), "--n", str(tmp_path / "n.json"))
    assert status == 0 and rep["result"]["passes"]


def test_morita_check_builtin_pair(capsys):
    status, rep, _ = run_json(capsys, "morita-check", "--algebra", str(DATA / "dual_numbers.json"), "--pair", "identity")
    assert status == 0 and rep["result"]["passes"]


def test_malformed_spec_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    status, rep, err = run_json(capsys, "stp", "--algebra", str(bad))
    assert status == 1 and rep["error"]["type"] == "ParseError"


def test_unknown_keys_rejected(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": 2, "quiver": {"vertices": ["1"]}, "extra": 1}))
    status, rep, _ = run_json(capsys, "stp", "--algebra", str(bad))
    assert status == 1 and "extra" in rep["error"]["message"]


def test_structure_constant_algebra_spec(capsys):
    status, rep, _ = run_json(capsys, "g0p", "--algebra", str(DATA / "dual_numbers_table.json"))
    assert status == 0 and rep["result"]["group"] == "Z/2"


def test_semisimple_warning(capsys, tmp_path):
    spec = tmp_path / "k2.json"
    spec.write_text(json.dumps({"field": 2, "quiver": {"vertices": ["1", "2"], "arrows": []}}))
    status, rep, err = run_json(capsys, "stp", "--algebra", str(spec))
    assert status == 0 and "semisimple" in err and rep["warnings"]


def test_inconclusive_exits_two(capsys, monkeypatch):
    def boom(cfg, alg):
        raise DecompositionInconclusive("no split found")

    monkeypatch.setitem(cli.HANDLERS, "stp", boom)
    status, rep, _ = run_json(capsys, "stp", "--algebra", str(DATA / "a2.json"))
    assert status == 2 and rep["error"]["type"] == "DecompositionInconclusive"


def test_window_must_contain_zero(capsys):
    status = cli.main(["stp", "--algebra", str(DATA / "a2.json"), "--window=1:3"])
    assert status == 1


def test_text_format(capsys):
    status = cli.main(["stp", "--algebra", str(DATA / "a2.json")])
    out = capsys.readouterr().out
    assert status == 0 and "projectiveInjective" in out
