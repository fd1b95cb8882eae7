import json
import pathlib

import pytest

from jumpseq.cli import main

SPECS = pathlib.Path(__file__).resolve().parent.parent / "specs"
SPEC_A = str(SPECS / "spec-a.json")
SPEC_B = str(SPECS / "spec-b.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_ext(tmp_path, t, spec_path, delta="1"):
    with open(spec_path) as fh:
        spec = json.load(fh)
    p = tmp_path / ("ext-t%d.json" % t)
    p.write_text(json.dumps({"t": t, "delta": delta, "spec": spec}))
    return str(p)


def test_genseq(capsys):
    code, out, _ = run(capsys, "genseq", SPEC_A)
    assert code == 0
    data = json.loads(out)
    assert data["sequence"]["n"] == [[3], [10, 1]]
    assert data["sequence"]["beta"] == ["1", "3/2", "23/6"]
    assert data["independent"]["pbar"] == [3, 5]


def test_euclid(capsys):
    code, out, _ = run(capsys, "euclid", "5", "3")
    assert code == 0
    data = json.loads(out)
    assert data == {"N": 3, "f": [1, 1, 2], "epsilon": 4, "bezout": [2, 1]}


def test_eval(capsys, tmp_path):
    poly = tmp_path / "f.json"
    poly.write_text(json.dumps(
        {"vars": ["u", "v"], "terms": [{"e": [0, 2], "c": "1"}, {"e": [3, 0], "c": "-1"}]}
    ))
    code, out, _ = run(capsys, "eval", SPEC_A, str(poly))
    assert code == 0
    assert json.loads(out)["value"] == "23/6"


def test_eval_insufficient_depth_exit_3(capsys, tmp_path):
    # T_3 = (v^2 - u^3)^3 - u^10 v has no certified value at depth 2
    from jumpseq.engine import build_jumping_sequence, ValuationSpec
    with open(SPEC_A) as fh:
        js = build_jumping_sequence(ValuationSpec.from_json(json.load(fh)))
    poly = tmp_path / "t3.json"
    poly.write_text(json.dumps(js.T[3].to_json()))
    code, out, _ = run(capsys, "eval", SPEC_A, str(poly))
    assert code == 3
    data = json.loads(out)
    assert data["error"] == "insufficient-depth" and data["extra_depth"] == 1


def test_expand(capsys, tmp_path):
    poly = tmp_path / "f.json"
    poly.write_text(json.dumps(
        {"vars": ["u", "v"], "terms": [{"e": [0, 2], "c": "1"}]}
    ))
    code, out, _ = run(capsys, "expand", SPEC_A, str(poly))
    assert code == 0
    terms = json.loads(out)["terms"]
    # v^2 = T_2 + u^3
    assert {"c": "1", "e": [3, 0, 0, 0]} in terms
    assert {"c": "1", "e": [0, 0, 1, 0]} in terms


def test_ladder_contradiction_exit_2(capsys, tmp_path):
    ext = write_ext(tmp_path, 2, SPEC_A)
    code, out, _ = run(capsys, "ladder", ext)
    assert code == 2
    data = json.loads(out)
    assert data["outcome"] == {"kind": "contradiction", "M": 1, "l": 1,
                               "g": 1, "pbar_prime": 3}


def test_ladder_pass_exit_0(capsys, tmp_path):
    ext = write_ext(tmp_path, 5, SPEC_A)
    code, out, _ = run(capsys, "ladder", ext)
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True
    assert [r["value_ratio"] for r in data["rungs"]] == [[15, 2], [25, 3]]


def test_classify_discrete(capsys, tmp_path):
    ext = write_ext(tmp_path, 3, SPEC_B)
    code, out, _ = run(capsys, "classify", ext)
    assert code == 0
    data = json.loads(out)
    assert data["form"]["case"] == 5 and data["form"]["minimal"] is False
    assert data["discrete_branch"]["pass"] is True


def test_classify_nondiscrete(capsys, tmp_path):
    ext = write_ext(tmp_path, 5, SPEC_A)
    code, out, _ = run(capsys, "classify", ext)
    assert code == 0
    data = json.loads(out)
    assert data["form"]["case"] == 4 and data["form"]["minimal"] is True


def test_monoidal(capsys):
    code, out, _ = run(capsys, "monoidal", SPEC_A)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_blowup(capsys):
    code, out, _ = run(capsys, "blowup", SPEC_A, "--steps", "3")
    assert code == 0
    charts = json.loads(out)["charts"]
    assert len(charts) == 4
    assert charts[3]["free"] is True and charts[3]["values"] == ["1/2", "5/6"]


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "nosuchcommand")[0] == 64
    assert run(capsys, "genseq", str(tmp_path / "missing.json"))[0] == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "genseq", str(bad))[0] == 64


def test_text_format(capsys):
    code, out, _ = run(capsys, "euclid", "3", "2", "--format", "text")
    assert code == 0
    assert "epsilon: 3" in out


def test_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "euclid", "3", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["epsilon"] == 3
