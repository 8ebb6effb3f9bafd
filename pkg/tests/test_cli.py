import json
import subprocess
import sys
from pathlib import Path

import pytest

from modyangian.cli import RunConfig, UsageError, main
from modyangian.repmod import MatrixModule

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.mark.parametrize("argv,expected", [
    (["irreps", "--p", "2", "--n", "1", "--count"], "4"),
    (["irreps", "--p", "2", "--n", "0", "--count"], "1"),
    (["dim", "--p", "3", "--alpha", "1,2", "--beta", "0,0"], "6"),
    (["drinfeld-poly", "--p", "2", "--lambda1", "1+u^-1", "--lambda2", "1"], "P(u)=u"),
])
def test_golden_one_liners(capsys, argv, expected):
    rc, out, _ = run(capsys, *argv)
    assert rc == 0
    assert out.strip() == expected


def test_irreps_list(capsys):
    rc, out, _ = run(capsys, "irreps", "--p", "3", "--n", "1", "--list")
    assert rc == 0
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert len(rows) == 9
    assert {a for a, _ in rows} == {"1", "1 + u^-1", "1 + 2u^-1"}


def test_tensor_golden(capsys, tmp_path):
    path = tmp_path / "m.json"
    rc, out, _ = run(capsys, "tensor", "--p", "3", "--factors", "(1,0);(2,0)", "--check-irreducible",
                     "--highest-weight", "--verify", "--save", str(path))
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "irreducible, dim 6"
    assert "highest weight (1 + 2u^-2, 1)" in lines
    assert "relations: pass" in lines
    saved = MatrixModule.loads(path.read_text())
    assert saved == MatrixModule.loads((GOLDEN / "l10_l20_p3.json").read_text())


def test_drinfeld_poly_infinite_dimensional(capsys):
    # over F_4 the roots of u^2 + u + 1 exist but are not restricted
    rc, out, _ = run(capsys, "drinfeld-poly", "--p", "2", "--m", "2", "--lambda1", "1+u^-1+u^-2", "--lambda2", "1")
    assert rc == 0
    assert out.strip() == "no Drinfeld polynomial: the module is infinite-dimensional"


def test_verify_yangian(capsys):
    rc, out, _ = run(capsys, "verify", "--suite", "yangian", "--p", "3", "--no-timing")
    assert rc == 0
    assert out.split() == ["nilpotency:", "pass", "rtt:", "pass", "straightening:", "pass"]


def test_verify_walgebra(capsys):
    rc, out, _ = run(capsys, "verify", "--suite", "walgebra", "--p", "2", "--n", "2")
    assert rc == 0 and "FAIL" not in out


@pytest.mark.parametrize("name,rc", [("l10_l20_p3.json", 0), ("corrupted_module_p3.json", 1)])
def test_verify_module_file(capsys, name, rc):
    got, out, _ = run(capsys, "verify", "--suite", "modules", "--p", "3", "--module-file", str(GOLDEN / name))
    assert got == rc
    assert ("FAIL" in out) == (rc == 1)


def test_wverify_and_uchi(capsys):
    rc, out, _ = run(capsys, "wverify", "--p", "2", "--n", "2", "--all")
    assert rc == 0 and "pass: 16/16 tuples" in out
    rc, out, _ = run(capsys, "uchi", "--p", "2", "--n", "2", "--alpha", "1,1", "--beta", "0,0",
                     "--invariants", "--simplicity", "--powers", "--format", "json")
    assert rc == 0
    rep = json.loads(out)
    assert rep["schema"] == 1
    assert rep["dim"] == 64 and rep["invariants_dim"] == 4


def test_parse_error_reports_position(capsys):
    rc, _, err = run(capsys, "drinfeld-poly", "--p", "3", "--lambda1", "1+u^-1+", "--lambda2", "1")
    assert rc == 2
    assert err.startswith("parse error:")
    assert "^" in err


def test_larger_field_needed(capsys):
    rc, _, err = run(capsys, "drinfeld-poly", "--p", "2", "--lambda1", "1+u^-1+u^-2", "--lambda2", "1")
    assert rc == 3
    assert "--m 2" in err
    assert run(capsys, "drinfeld-poly", "--p", "3", "--lambda1", "1+u^-2", "--lambda2", "1")[0] == 3
    rc, out, _ = run(capsys, "drinfeld-poly", "--p", "3", "--m", "2", "--lambda1", "1+u^-2", "--lambda2", "1")
    assert rc == 0 and "infinite-dimensional" in out


@pytest.mark.parametrize("argv", [
    ["irreps", "--p", "4", "--n", "1"],
    ["irreps", "--p", "3"],
    ["dim", "--p", "3", "--alpha", "1,2", "--beta", "0"],
    ["tensor", "--p", "3", "--factors", "1,0"],
    ["irreps", "--p", "3", "--n", "1", "--format", "xml"],
    ["tensor", "--p", "3", "--factors", "(1,0)", "--format", "csv"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_budget_exit_code_and_env_override(capsys, monkeypatch):
    assert run(capsys, "irreps", "--p", "3", "--n", "9", "--enum-budget", "10")[0] == 3
    monkeypatch.setenv("MODYANGIAN_ENUM_BUDGET", "10")
    assert run(capsys, "irreps", "--p", "3", "--n", "9")[0] == 3
    # an explicit flag wins over the environment
    assert run(capsys, "irreps", "--p", "3", "--n", "2", "--enum-budget", "1000")[0] == 0
    monkeypatch.setenv("MODYANGIAN_ENUM_BUDGET", "lots")
    assert run(capsys, "irreps", "--p", "3", "--n", "1")[0] == 2


def test_dim_budget_for_induction(capsys):
    rc, _, _ = run(capsys, "uchi", "--p", "2", "--n", "2", "--alpha", "1,1", "--beta", "0,0", "--dim-budget", "10")
    assert rc == 3


def test_json_reports_are_byte_identical(capsys, tmp_path):
    args = ["verify", "--suite", "walgebra", "--p", "2", "--n", "2", "--seed", "7", "--no-timing",
            "--format", "json"]
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert run(capsys, *args, "-o", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["schema"] == 1 and rep["seed"] == 7
    assert [r["suite"] for r in rep["reports"]] == sorted(r["suite"] for r in rep["reports"])


def test_csv_tables(capsys):
    rc, out, _ = run(capsys, "irreps", "--p", "2", "--n", "1", "--format", "csv")
    assert rc == 0 and out == "p,n,count\n2,1,4\n"
    rc, out, _ = run(capsys, "dim", "--p", "3", "--alpha", "1,2", "--beta", "0,0", "--format", "csv")
    assert rc == 0 and out == 'dim,pairs\n6,"(1,0) (2,0)"\n'


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(p=6)
    with pytest.raises(UsageError):
        RunConfig(p=3, n=-1)
    with pytest.raises(UsageError):
        RunConfig(p=3, budgets={"dim_budget": 0})
    assert RunConfig(p=2, m=2).field.q == 4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "modyangian", "irreps", "--p", "2", "--n", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "4"
