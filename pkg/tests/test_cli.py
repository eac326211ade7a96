import json
from fractions import Fraction

import pytest

from eksr.cli import run_command


@pytest.fixture()
def ex1_path(tmp_path, example1_text):
    path = tmp_path / "ex1.eksr"
    path.write_text(example1_text)
    return str(path)


def run_json(capsys, argv):
    rc = run_command(argv)
    out = capsys.readouterr().out
    assert rc == 0, out
    report = json.loads(out)
    assert set(report) == {"value", "sequence", "flips", "meta"}
    return report


def test_exact_command(ex1_path, capsys):
    report = run_json(capsys, ["exact", ex1_path])
    assert report["value"] == "5/6"
    assert report["sequence"][0] == "0000" and report["sequence"][-1] == "1111"
    assert len(report["flips"]) == len(report["sequence"]) - 1


def test_value_command(ex1_path, capsys):
    report = run_json(capsys, ["value", ex1_path, "0111"])
    assert report["value"] == "2/3"


def test_table_command(capsys):
    report = run_json(capsys, ["table", "--k-min", "3", "--k-max", "10"])
    rows = report["meta"]["rows"]
    assert len(rows) == 8
    assert [r["decimal"] for r in rows] == [
        "0.572", "0.631", "0.679", "0.718", "0.749", "0.775", "0.796", "0.814",
    ]


def test_approx_then_check_seq_round_trip(ex1_path, tmp_path, capsys):
    report = run_json(capsys, ["approx", ex1_path])
    assert Fraction(report["value"]) >= Fraction(55, 96)
    report_path = tmp_path / "approx.json"
    report_path.write_text(json.dumps(report))
    check = run_json(capsys, ["check-seq", ex1_path, str(report_path)])
    assert check["meta"]["valid"] is True
    assert check["value"] == report["value"]


def test_check_seq_bitstrings(ex1_path, capsys):
    check = run_json(capsys, ["check-seq", ex1_path, "0000,0001,0011,0111,1111"])
    assert check["value"] == "2/3"
    bad = run_json(capsys, ["check-seq", ex1_path, "0000,0011"])
    assert bad["meta"]["valid"] is False


def test_gen_and_exact_pipeline(tmp_path, capsys):
    out = tmp_path / "gen.eksr"
    report = run_json(capsys, ["gen", "--n", "6", "--m", "12", "--k", "3", "--out", str(out)])
    assert report["meta"]["out"] == str(out)
    exact = run_json(capsys, ["exact", str(out)])
    assert Fraction(exact["value"]) > 0


def test_gen_deterministic(capsys):
    a = run_json(capsys, ["gen", "--n", "5", "--m", "8", "--k", "3"])
    b = run_json(capsys, ["gen", "--n", "5", "--m", "8", "--k", "3"])
    assert a["meta"]["instance"] == b["meta"]["instance"]


def test_reduce_command(ex1_path, tmp_path, capsys):
    out = tmp_path / "np4.eksr"
    report = run_json(capsys, ["reduce", "np4", ex1_path, "--delta", "1/2",
                               "--witness", "--out", str(out)])
    assert report["value"] == "1/1"
    assert report["meta"]["params"]["m1"] == 3
    exact = run_json(capsys, ["exact", str(out)])
    assert Fraction(exact["value"]) == 1  # endpoints connect at value 1 on a satisfiable source


def test_reduce_np3_emits_uniform_companion(ex1_path, capsys):
    report = run_json(capsys, ["reduce", "np3", ex1_path, "--delta", "1/2"])
    assert "p eksr" in report["meta"]["instance"]
    header = report["meta"]["instance"].splitlines()[0]
    assert header.split()[-1] == "3"


def test_verify_curve(capsys):
    report = run_json(capsys, ["verify", "curve", "--lambda", "5"])
    assert report["meta"]["argmax"] == "1/5"


def test_verify_accept(tmp_path, example1, capsys):
    from eksr.verifiers import make_clause_verifier, spec_to_json

    spec_path = tmp_path / "cv.json"
    spec_path.write_text(spec_to_json(make_clause_verifier(example1.formula)))
    report = run_json(capsys, ["verify", "accept", str(spec_path), "0111"])
    assert report["value"] == "2/3"


def test_domain_error_exit_code(capsys):
    rc = run_command(["exact", "nope.eksr"])
    captured = capsys.readouterr()
    assert rc == 1
    assert "error:" in captured.err
    assert captured.out == ""


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run_command(["frobnicate"])
    assert exc.value.code == 2
