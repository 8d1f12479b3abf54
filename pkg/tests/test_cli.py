import json

import pytest

import config
from commands import listing
from exactsys import SolverError
from main import main
from numeric import ReconstructionError, VerificationError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dims_json(capsys):
    code, out, _ = run(capsys, "dims", "-k", "12", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"dm_bound": 1, "pz_bound": 3, "mf_dim": 2, "dz_bound": 4}


def test_reduce_json(capsys):
    code, out, _ = run(capsys, "reduce", "-k", "12", "-q", "3", "-p", "9", "-e", "0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert {"sym": "DZ", "args": [2, 10], "num": "-9", "den": "2"} in data["coeffs"]
    assert data["epsilon"] == "0"


def test_reduce_top_index_note(capsys):
    code, out, _ = run(capsys, "reduce", "-k", "12", "-q", "11", "-p", "1", "-e", "0")
    assert code == 0
    assert "lies in PZ_12" in out


def test_reduce_odd_weight(capsys):
    code, out, err = run(capsys, "reduce", "-k", "13", "-q", "3", "-p", "10")
    assert code == 2
    assert out == ""
    assert "weight must be even" in err


@pytest.mark.parametrize("argv", [
    ["reduce", "-k", "12", "-q", "3", "-p", "9", "-e", "01"],
    ["reduce", "-k", "12", "-q", "3", "-p", "8"],
    ["reduce", "-q", "1", "-p", "11"],
    ["generators", "-k", "4", "-e", "1"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_verify_digits_below_minimum(capsys):
    code, _, err = run(capsys, "verify", "-k", "12", "-d", "5")
    assert code == 2
    assert "digits below minimum (10)" in err


def test_span_and_relations_at_weight_four(capsys):
    code, out, _ = run(capsys, "span", "-k", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)["elements"] == [[{"sym": "DZ", "args": [3, 1], "num": "1", "den": "1"}]]
    code, out, _ = run(capsys, "relations", "-k", "4", "--format", "json")
    assert code == 0
    assert json.loads(out) == []


def test_generators_text_and_latex(capsys):
    code, out, _ = run(capsys, "generators", "-k", "24", "-e", "101")
    assert code == 0
    assert out.split() == ["DZ(3,21)", "DZ(4,20)", "DZ(7,17)"]
    code, out, _ = run(capsys, "generators", "-k", "24", "-e", "101", "--format", "latex")
    assert out.splitlines()[0] == r"\zeta(3,21)"


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "-r", "1", "-q", "1", "-p", "1")
    assert code == 0
    assert out.strip() == "T(1,1,1) = 2*DZ(2,1)"


def test_reduce_with_verification(capsys):
    code, out, _ = run(capsys, "reduce", "-q", "3", "-p", "9", "--verify", "30", "--format", "json")
    assert code == 0
    assert json.loads(out)["verify"]["passed"] is True


def test_verify_records_history(capsys, ledger):
    code, out, _ = run(capsys, "verify", "-k", "4", "-d", "20", "--record")
    assert code == 0
    assert out.startswith("pass")
    lines = out.splitlines()
    code, out, _ = run(capsys, "history", "-k", "4", "--limit", "100", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == len(lines)
    assert all(row["passed"] for row in rows)
    code, out, _ = run(capsys, "history", "--failed", "--format", "json")
    assert json.loads(out) == []


def test_table_writes_then_validates(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(config, "TABLE_WORKERS", 2)
    out_dir = tmp_path / "tables"
    code, out, _ = run(capsys, "table", "--max-k", "10", "-o", str(out_dir))
    assert code == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == ["dzv_k10_e0.json", "dzv_k10_e1.json", "dzv_k8_e0.json", "dzv_k8_e1.json"]
    assert out.count("written") == 4

    code, out, _ = run(capsys, "table", "--max-k", "10", "-o", str(out_dir))
    assert code == 0
    assert out.count("validated") == 4

    path = out_dir / "dzv_k8_e0.json"
    data = json.loads(path.read_text())
    data["entries"][0]["coeffs"] = []
    path.write_text(json.dumps(data))
    code, out, err = run(capsys, "table", "--max-k", "10", "-o", str(out_dir))
    assert code == 3
    assert "mismatch" in out
    assert "failed validation" in err

    code, out, _ = run(capsys, "table", "--max-k", "10", "-o", str(out_dir), "--force")
    assert code == 0
    assert out.count("written") == 4


def test_generators_at_weight_two(capsys):
    code, out, _ = run(capsys, "generators", "-k", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["weight"] == 2
    assert data["generators"] == []


def test_verify_latex(capsys):
    code, out, _ = run(capsys, "verify", "-k", "4", "-d", "20", "--format", "latex")
    assert code == 0
    lines = out.splitlines()
    assert r"2\zeta(3,1) + \zeta(2)\zeta(2) - 3\zeta(4) = 0" in lines
    assert any(line.endswith(r"\in \mathcal{PZ}_{4}") for line in lines)
    assert not any("None" in line for line in lines)


@pytest.mark.parametrize("error", [SolverError, ReconstructionError, VerificationError])
def test_computation_failures_exit_three(capsys, monkeypatch, error):
    def fail(*args, **kwargs):
        raise error("weight 12: could not certify")

    monkeypatch.setattr(listing, "nontrivial_equations", fail)
    code, out, err = run(capsys, "relations", "-k", "12")
    assert code == 3
    assert out == ""
    assert "could not certify" in err
