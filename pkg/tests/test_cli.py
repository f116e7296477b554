"""Command line: exit codes, determinism, canonicalization."""
import json

import pytest

from superq.catalog import construct, d21a_raw
from superq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_report_gl22(capsys):
    code, out, _ = run(capsys, "report", "gl(2,2)")
    d = json.loads(out)
    assert code == 0 and d["filtration"]["Z"] == [1, 0]
    assert d["core"]["h2_restricted"] == 3


def test_report_osp32_rigid(capsys):
    code, out, _ = run(capsys, "report", "osp(3,2)", "--skip", "repn")
    assert code == 0 and json.loads(out)["rigid"] is True


def test_report_jacobi_violation(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(d21a_raw(1, 1, 1).dumps())
    code, _, err = run(capsys, "report", str(p))
    assert code == 1 and "violation jacobi" in err


def test_report_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "report", "gl(2,1)", "--json", str(a), "--seed", "4")[0] == 0
    assert run(capsys, "report", "gl(2,1)", "--json", str(b), "--seed", "4")[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [("report", "osp((3"), ("report", "gl(2,1)", "--skip", "nope"),
                                  ("verify", "no-such-lemma"), ("frobnicate",)])
def test_parse_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bad_json_file(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(capsys, "report", str(p))[0] == 2


def test_extension_needed_and_field(monkeypatch, capsys):
    code, out, _ = run(capsys, "verify", "cartan", "--algebra", "q(2)", "--weight", "1,2")
    assert code == 3 and "t^2 + 1/2" in out
    monkeypatch.setenv("SUPERQ_FIELD", "1/2,0,1")
    code, out, _ = run(capsys, "verify", "cartan", "--algebra", "q(2)", "--weight", "1,2")
    assert code == 0 and "PASS" in out


def test_verify_failure_exit(capsys):
    code, out, err = run(capsys, "verify", "rootspace", "--algebra", "co(3,2)")
    assert code == 1 and "FAIL" in out and "witness" in err


def test_verify_reciprocity_q2(capsys):
    code, out, _ = run(capsys, "verify", "reciprocity", "--algebra", "q(2)")
    assert code == 0 and "1/1 passed" in out


def test_convert_canonicalizes(tmp_path, capsys):
    g = construct("osp(1,2)")
    d = g.to_json()
    d["brackets"] = list(reversed(d["brackets"]))
    src, dst = tmp_path / "in.json", tmp_path / "out.json"
    src.write_text(json.dumps(d))
    assert run(capsys, "convert", str(src), str(dst))[0] == 0
    assert json.loads(dst.read_text()) == json.loads(g.dumps())


def test_convert_module_and_spec(tmp_path, capsys):
    m = tmp_path / "m.json"
    assert run(capsys, "construct", "gl(1,1)", "--module", "standard", "-o", str(m))[0] == 0
    out = tmp_path / "m2.json"
    assert run(capsys, "convert", str(m), str(out))[0] == 0
    assert json.loads(out.read_text())["basis"] == json.loads(m.read_text())["basis"]
    s = tmp_path / "s.json"
    s.write_text(json.dumps({"params": [3, 2], "family": "osp"}))
    code, text, _ = run(capsys, "convert", str(s))
    assert code == 0 and json.loads(text) == {"family": "osp", "params": [3, 2]}


def test_report_from_spec_json(tmp_path, capsys):
    s = tmp_path / "s.json"
    s.write_text(json.dumps({"family": "osp", "params": [1, 2]}))
    code, out, _ = run(capsys, "report", str(s), "--skip", "rootsys,repn")
    assert code == 0 and json.loads(out)["dim"] == [3, 2]


def test_report_projective_realization(capsys):
    # psl only acts projectively on the standard space, so no standard probe
    code, out, _ = run(capsys, "report", "psl(2,2)")
    d = json.loads(out)
    assert code == 0 and "standard_simple" not in d["repn"]
