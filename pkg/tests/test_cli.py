import csv
import json

import pytest

from insepdim.cli import GUARD_ENV, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# tau and dims

def test_tau_example(capsys):
    code, doc = run_json(capsys, "tau", "-p", "2", "-n", "1", "-e", "2,1")
    assert code == 0 and doc["tau"] == doc["upper"] == doc["tv_lower"] == 3


@pytest.mark.parametrize("argv", [["tau", "-p", "2", "-n", "1", "-e", "1,2"],
                                  ["tau", "-p", "4", "-n", "1", "-e", "1"],
                                  ["tau", "-p", "2", "-n", "0", "-e", "1"]])
def test_tau_validation_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_tau_several_rows_csv(capsys):
    code, out, _ = run(capsys, "tau", "-p", "3", "-n", "1", "-n", "2", "-e", "2,2",
                       "--format", "csv")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0
    assert [(r["n"], r["e"], r["tau"]) for r in rows] == [("1", "2,2", "2"), ("2", "2,2", "4")]


def test_dims_text(capsys):
    code, out, _ = run(capsys, "dims", "-p", "2", "-e", "2,1", "--format", "text")
    assert code == 0 and "dim_X=13" in out and "dim_tangent=16" in out


# counts

def test_count_alpha_example(capsys):
    code, doc = run_json(capsys, "count", "-p", "2", "-e", "1,1", "-q", "2",
                         "--scheme", "alpha", "--l", "1")
    assert code == 0
    assert (doc["count"], doc["closed_form"], doc["match"]) == (8, 8, True)
    assert doc["scheme"] == "alpha" and doc["l"] == 1


def test_count_aut_example(capsys):
    code, doc = run_json(capsys, "count", "-p", "2", "-e", "1", "-q", "2", "--scheme", "aut")
    assert code == 0 and doc["count"] == 1


def test_count_guard_gives_formula_only(capsys):
    code, doc = run_json(capsys, "count", "-p", "2", "-e", "4,4", "--scheme", "end")
    assert code == 2
    assert doc["formula_only"] is True and doc["count"] is None and doc["closed_form"] > 0


def test_guard_env_and_flag(capsys, monkeypatch):
    argv = ["count", "-p", "2", "-e", "1,1", "-q", "2", "--scheme", "end"]
    monkeypatch.setenv(GUARD_ENV, "4")
    assert run(capsys, *argv)[0] == 2
    # the flag wins over the environment
    assert run(capsys, *argv, "--guard", "100000")[0] == 0
    monkeypatch.setenv(GUARD_ENV, "lots")
    assert run(capsys, *argv)[0] == 1


def test_output_is_independent_of_workers(capsys):
    argv = ["count", "-p", "2", "-e", "2,1", "-q", "4", "--scheme", "alpha"]
    outs = {run(capsys, *argv, "-j", str(j))[1] for j in (1, 3)}
    assert len(outs) == 1


# towers

@pytest.fixture
def example_file(tmp_path, capsys):
    code, out, _ = run(capsys, "example", "-p", "2", "-e", "2,1", "--seed", "7")
    assert code == 0
    path = tmp_path / "tower.json"
    path.write_text(out)
    return path


def test_example_document(capsys):
    code, doc = run_json(capsys, "example", "-p", "2", "-e", "2,1")
    assert code == 0
    assert doc["levels"] == [{"exp": 2, "rhs": "z1"}, {"exp": 1, "rhs": "z2"}]


def test_type_of_example(capsys, example_file):
    code, doc = run_json(capsys, "type", str(example_file))
    assert code == 0
    assert doc["type"]["e"] == [2, 1] and doc["certificate"]["bound"] == 3


def test_scramble_keeps_type(capsys, example_file):
    code, doc = run_json(capsys, "type", str(example_file), "--scramble", "7")
    assert code == 0 and doc["type"]["e"] == [2, 1]


def test_descend(capsys, example_file):
    code, doc = run_json(capsys, "descend", str(example_file))
    assert code == 0 and doc["k_lp_index"] == 4
    levels = doc["coefficients"]["levels"]
    assert doc["coefficients"]["count"] == sum(len(level) for level in levels) == 3
    assert levels[1] == [{"d": [0], "a": "z2"}, {"d": [1], "a": "z1"}]


def test_non_field_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"p": 2, "base_vars": ["t"], "levels": [{"exp": 1, "rhs": "t^2"}]}))
    code, out, err = run(capsys, "type", str(path))
    assert code == 1 and "level 1" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "type", str(tmp_path / "absent.json"))
    assert code == 1 and "cannot read" in err


def test_tower_degree_guard(capsys, tmp_path):
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"p": 2, "base_vars": ["z1", "z2"],
                                "levels": [{"exp": 3, "rhs": "z1"}, {"exp": 3, "rhs": "z2"}]}))
    assert run(capsys, "type", str(path), "--max-degree", "32")[0] == 2


# verify

def test_verify_default_grid(capsys):
    code, doc = run_json(capsys, "verify")
    assert code == 0 and doc["failed"] == 0 and doc["checks"] > 100


def test_verify_subgrid(capsys):
    code, doc = run_json(capsys, "verify", "--grid", "r<=2,p=2,q<=4")
    assert code == 0
    assert {r["params"].get("p", r["params"].get("q")) for r in doc["rows"]} <= {2, 4}


def test_verify_fault_injection(capsys):
    code, doc = run_json(capsys, "verify", "--grid", "r<=1,p=2", "--inject-fault", "modulus")
    assert code == 1 and doc["failed"] >= 1
    bad = [r for r in doc["rows"] if not r["ok"]]
    assert bad[0]["check"] == "field_table" and bad[0]["params"] == {"q": 4}


def test_verify_bad_grid(capsys):
    assert run(capsys, "verify", "--grid", "x<=3")[0] == 1
