import io
import json
import subprocess
import sys

import pytest

from fixtures import two_reticulations
from spinaltc import counting
from spinaltc.cli import main


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv, value", [
    (("count", "stc", "3", "1"), "15"),
    (("count", "nlstc", "5", "2"), "45"),
    (("count", "stc", "1", "0"), "1"),
    (("count", "--family", "c2", "--n", "4", "--k", "2"), "84"),
])
def test_count(argv, value):
    code, out, _ = run(*argv)
    assert code == 0
    assert out.splitlines()[1].split(",")[3] == value


def test_count_json():
    code, out, _ = run("count", "bessel", "4", "2", "--format", "json")
    assert code == 0 and json.loads(out)["value"] == 45


@pytest.mark.parametrize("argv", [
    ("count", "trees", "3", "1"),
    ("count", "stc"),
    ("count", "stc", "-1", "0"),
    ("table", "--family", "stc", "--n", "3"),
    ("bogus",),
    ("enumerate", "--family", "c1", "--n", "x", "--k", "1"),
])
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 1
    assert out == ""
    assert len(err.splitlines()) == 1 and err.startswith("error: usage:")


def test_table_rows():
    code, out, _ = run("table", "--family", "nlstc", "--n", "5", "--k", "3")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert all(r[2] == "1" for r in rows if r[1] == "0")
    assert len(rows) == 5 * 4


def test_table_is_deterministic():
    assert run("table", "--family", "stc", "--n", "6", "--k", "5") == run("table", "--family", "stc", "--n", "6", "--k", "5")


def test_encode_example(tmp_path):
    net, _ = two_reticulations()
    path = tmp_path / "net.json"
    path.write_text(net.to_json())
    code, out, _ = run("encode", "--input", str(path), "--roundtrip")
    assert code == 0 and out == "3,1,2,1,1,2,2,4,3,4\n"


def test_encode_strips_labels(tmp_path):
    net, ids = two_reticulations()
    leaves = net.leaves
    path = tmp_path / "net.json"
    path.write_text(net.with_labels({v: i for i, v in enumerate(leaves, 1)}).to_json())
    assert run("encode", "--input", str(path))[1] == "3,1,2,1,1,2,2,4,3,4\n"


def test_decode_then_encode(tmp_path):
    code, out, _ = run("decode", "--word", "3,1,2,1,1,2,2,4,3,4", "--roundtrip")
    assert code == 0
    path = tmp_path / "n.json"
    path.write_text(out)
    assert run("encode", "--input", str(path))[1] == "3,1,2,1,1,2,2,4,3,4\n"


def test_decode_empty_word():
    code, out, _ = run("decode", "--word", "")
    data = json.loads(out)
    assert code == 0 and data["n"] == 1 and data["arcs"] == [[0, 1]]


def test_decode_dot():
    code, out, _ = run("decode", "--word", "1,1,1", "--format", "dot")
    assert code == 0 and "shape=box" in out


def test_decode_class_error_names_condition():
    code, _, err = run("decode", "--word", "1,1,2,1,2")
    assert code == 1 and "adjacent" in err and err.count("\n") == 1
    assert run("decode", "--word", "1,1,2,1,2", "--class", "c2")[0] == 0


def test_parse_error_line_number(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("n=4 k=2\n3,1,x\n")
    code, _, err = run("decode", "--input", str(path))
    assert code == 1 and "line 2" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [],\n "arcs": [}')
    code, _, err = run("encode", "--input", str(bad))
    assert code == 1 and err.startswith("error: network: line 2")


def test_missing_file():
    code, _, err = run("encode", "--input", "/nonexistent/file.json")
    assert code == 1 and err.startswith("error: io:")


def test_transform_with_steps():
    code, out, _ = run("transform", "--lrq", "L R1 L R2 L Q1 Q2 L", "--steps", "--roundtrip")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "w2: 4,2,2,1,1,2,1,3"
    assert lines[-1] == "3,1,2,1,1,2,2,4,3,4"


def test_transform_bad_lrq():
    code, _, err = run("transform", "--lrq", "L R1 Q1 L")
    assert code == 1 and "followed by L" in err


@pytest.mark.parametrize("family, fmt, lines", [("c1", "word", 45), ("c2", "word", 84)])
def test_enumerate_words(family, fmt, lines):
    code, out, _ = run("enumerate", "--family", family, "--n", "4", "--k", "2", "--format", fmt)
    assert code == 0 and len(out.splitlines()) == lines


def test_enumerate_networks_and_dedup_report():
    code, out, err = run("enumerate", "--family", "stc", "--n", "3", "--k", "1", "--dedup-report")
    assert code == 0 and len(json.loads(out)) == 15
    assert err == "generated=15 distinct=15\n"


def test_enumerate_marked_and_bessel():
    assert len(json.loads(run("enumerate", "--family", "marked", "--n", "4", "--k", "2")[1])) == 6
    code, out, _ = run("enumerate", "--family", "bessel", "--n", "2", "--k", "1")
    assert out == "index,pairs\n0,1-2\n1,1-3\n2,2-3\n"


def test_enumerate_budget():
    code, _, err = run("enumerate", "--family", "c1", "--n", "5", "--k", "2", "--max-objects", "3")
    assert code == 3 and err.startswith("error: budget:")


def test_enumerate_bad_format():
    assert run("enumerate", "--family", "nlstc", "--n", "3", "--k", "1", "--format", "csv")[0] == 1


def test_oracle_command():
    code, out, _ = run("oracle", "--n", "4", "--k", "2", "--labeled")
    assert code == 0 and out.splitlines()[1] == "4,2,324,oracle"
    code, out, _ = run("oracle", "--n", "3", "--k", "1", "--caterpillar", "--format", "json")
    assert len(json.loads(out)) == 4


def test_oracle_budget():
    code, _, err = run("oracle", "--n", "5", "--k", "3", "--labeled", "--max-objects", "100")
    assert code == 3 and err.startswith("error: budget")


def test_verify_subset():
    code, out, _ = run("verify", "--only", "labeled_vs_unlabeled,worked_example")
    assert code == 0
    rows = out.splitlines()[1:]
    assert len(rows) == 36 and all(",pass," in r for r in rows)


def test_verify_unknown_identity():
    code, _, err = run("verify", "--only", "nope")
    assert code == 1 and "nope" in err


def test_verify_reports_injected_fault(monkeypatch):
    real = counting.count_stc
    monkeypatch.setattr(counting, "count_stc", lambda n, k: real(n, k) + (1 if (n, k) == (5, 2) else 0))
    code, out, _ = run("verify", "--only", "labeled_vs_unlabeled")
    assert code == 2
    fails = [r for r in out.splitlines() if ",fail," in r]
    assert fails == ["labeled_vs_unlabeled,5,2,fail,4500 != 4501"]


def test_verify_budget_marks_skips():
    code, out, _ = run("verify", "--only", "oracle_stc", "--budget-seconds", "0.05")
    assert code == 3
    assert ",skip," in out and ",fail," not in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spinaltc", "count", "stc", "3", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "family,n,k,value,provenance\nstc,3,1,15,formula\n"
