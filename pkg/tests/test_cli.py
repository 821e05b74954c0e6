import json

import pytest

from nch.algebra import builtin
from nch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_homology_json(capsys):
    code, doc = run_json(capsys, "homology", "--algebra", "dual", "--theory", "hh", "--max-degree", "3")
    assert code == 0
    assert [r["dim"] for r in doc["results"]] == [2, 1, 1, 1]
    assert doc["command"] == "homology"
    assert all(a["pass"] for a in doc["assertions"])


def test_homology_connes_nonunital(capsys):
    code, doc = run_json(capsys, "homology", "--algebra", "strict_upper2", "--max-degree", "4")
    assert code == 0
    assert [r["dim"] for r in doc["results"]] == [1, 0, 1, 0, 1]


def test_table_header_and_rows(capsys):
    code, out, _ = run(capsys, "homology", "--algebra", "C", "--max-degree", "3", "--seed", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# homology  seed=5"
    assert lines[1].split() == ["0", "1"]
    assert lines[-1].startswith("PASS")


@pytest.mark.parametrize("argv", [
    ("homology", "--algebra", "M2", "--max-degree", "2"),
    ("toeplitz", "--symbol", "z^2", "--N", "1..6"),
    ("verify", "--suite", "index", "--seed", "3"),
])
def test_byte_identical_reruns(capsys, argv):
    a = run(capsys, *argv, "--format", "json")
    b = run(capsys, *argv, "--format", "json")
    assert a == b and a[0] == 0


def test_describe(capsys):
    code, doc = run_json(capsys, "describe", "--algebra", "upper2")
    assert code == 0
    assert doc["results"][0]["dim"] == 3 and not doc["results"][0]["commutative"]


def test_describe_tampered_reports_tuple(capsys, tmp_path):
    data = builtin("M2").to_json()
    data["structure"] = [t for t in data["structure"] if t[:3] != [1, 2, 0]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, doc = run_json(capsys, "describe", "--algebra", str(p))
    assert code == 1
    bad = [a for a in doc["assertions"] if not a["pass"]]
    assert bad[0]["name"] == "associative"
    assert "first offending basis tuple" in bad[0]["detail"]


def test_tampered_algebra_rejected_for_homology(capsys, tmp_path):
    data = builtin("M2").to_json()
    data["structure"] = [t for t in data["structure"] if t[:3] != [1, 2, 0]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, out, err = run(capsys, "homology", "--algebra", str(p))
    assert code == 2 and "fails validation" in err and out == ""


@pytest.mark.parametrize("argv", [
    ("homology", "--algebra", "C", "--max-degree", "4", "--N", "5"),
    ("homology", "--algebra", "/nonexistent/alg.json"),
    ("verify", "--suite", "nosuch"),
    ("toeplitz", "--symbol", "z^^2"),
    ("index", "--symbol", "1+z"),
    ("chern", "--levels", "a..b"),
])
def test_bad_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["homology", "--theory", "xx"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_resource_cap_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("NCH_MAX_DIM", "50")
    code, doc = run_json(capsys, "verify", "--suite", "lie")
    assert code == 3
    assert doc["assertions"][-1]["name"] == "resource cap" and not doc["assertions"][-1]["pass"]


@pytest.mark.parametrize("suite", ["operators", "harmonic", "xcomplex", "sbi"])
def test_verify_suites_on_dual(capsys, suite):
    code, doc = run_json(capsys, "verify", "--suite", suite, "--algebra", "dual", "--N", "4")
    assert code == 0
    assert doc["results"][0]["failed"] == 0 and doc["results"][0]["count"] > 0


@pytest.mark.parametrize("suite", ["excision", "goodwillie", "derivation", "cuntz", "lie", "cochains", "index"])
def test_verify_other_suites(capsys, suite):
    code, doc = run_json(capsys, "verify", "--suite", suite)
    assert code == 0, [a for a in doc["assertions"] if not a["pass"]]


def test_chern_even_and_odd(capsys):
    code, doc = run_json(capsys, "chern", "--algebra", "M2", "--element", "[[[1,0,0,0]]]")
    assert code == 0 and [r["n"] for r in doc["results"]] == [1, 2]
    code, doc = run_json(capsys, "chern", "--algebra", "dual", "--parity", "odd",
                         "--element", "[[[1,1]]]", "--levels", "1")
    assert code == 0


def test_index_even_dual(capsys):
    code, doc = run_json(capsys, "index", "--algebra", "dual", "--ideal", "[[0,1]]",
                         "--weights", '{"0": 1, "1": 3}', "--levels", "1..3", "--seed", "4")
    assert code == 0
    assert doc["results"][0]["value"] == "1"


@pytest.mark.parametrize("sym,val", [("z", "-1"), ("z^3", "-3"), ("2*z^-2", "2")])
def test_index_toeplitz_monomial(capsys, sym, val):
    code, doc = run_json(capsys, "index", "--symbol", sym, "--seed", "7")
    assert code == 0
    assert doc["results"][0]["value"] == val


def test_toeplitz_command(capsys):
    code, doc = run_json(capsys, "toeplitz", "--symbol", "2+z", "--N", "1..5")
    assert code == 0
    code, doc = run_json(capsys, "toeplitz", "--symbol", "z^-1*(1+z/3)", "--N", "2..6")
    assert code == 0
