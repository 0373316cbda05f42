import json
import subprocess
import sys

import numpy as np
import pytest

from qmatops import cli
from qmatops.matrixio import MatrixFormatError, load_matrix, matrix_from_obj, matrix_to_obj, save_matrix


@pytest.fixture
def files(tmp_path):
    def write(name, mat):
        path = tmp_path / name
        save_matrix(path, mat)
        return str(path)

    return {
        "A": write("A.json", [[1, 2], [3, 4]]),
        "B": write("B.json", [[1j, 2], [0.5, -1]]),
        "I2": write("I2.json", np.eye(2)),
        "X": write("X.json", [[0, 1], [1, 0]]),
        "W": write("W.json", np.arange(8).reshape(2, 4) + 1),
        "D1": write("D1.json", [[1, 0], [0, 0]]),
        "D2": write("D2.json", [[0, 0], [0, 1]]),
    }


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_matrix_format_round_trip(tmp_path):
    obj = {"rows": 2, "cols": 2, "entries": [[1, 0], 2.5, [0, -1], 0]}
    mat = matrix_from_obj(obj)
    np.testing.assert_array_equal(mat, [[1, 2.5], [-1j, 0]])
    assert matrix_from_obj(matrix_to_obj(mat)).tolist() == mat.tolist()


@pytest.mark.parametrize(
    "obj,field",
    [
        ({"rows": 2, "cols": 2}, "entries"),
        ({"rows": 2, "cols": 2, "entries": [1, 2, 3]}, "entries"),
        ({"rows": "2", "cols": 2, "entries": [1, 2, 3, 4]}, "rows"),
        ({"rows": 2, "cols": 2, "entries": [1, 2, [3], 4]}, "entries[2]"),
        ({"rows": 2, "cols": 2, "entries": [1, True, 3, 4]}, "entries[1]"),
    ],
)
def test_matrix_format_errors_name_field(obj, field):
    with pytest.raises(MatrixFormatError, match=field.replace("[", r"\[").replace("]", r"\]")):
        matrix_from_obj(obj)


def test_missing_file(tmp_path, capsys):
    code, _, err = _run(["hadamard", str(tmp_path / "nope.json"), str(tmp_path / "nope.json")], capsys)
    assert code == 2
    assert "file not found" in err
    with pytest.raises(MatrixFormatError):
        load_matrix(tmp_path / "nope.json")


def test_col_swap_report(files, capsys):
    code, out, _ = _run(["col-swap", files["A"], "--k", "0", "--l", "1"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["success_probability"] == pytest.approx(1 / 24, abs=1e-15)
    assert f"{1/24:.15g}" in out
    dec = matrix_from_obj(report["decoded_matrix"])
    np.testing.assert_allclose(dec, np.array([[2, 1], [4, 3]]) / np.sqrt(30), atol=1e-12)
    assert set(report) >= {"decoded_matrix", "success_probability", "gate_stats"}


def test_kron_report(files, capsys):
    code, out, _ = _run(["kron", files["I2"], files["X"]], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["success_probability"] == 1.0
    assert report["gate_stats"]["swap_count"] == 1


def test_kron_general_flag(files, capsys):
    code, _, err = _run(["kron", files["W"], files["A"]], capsys)
    assert code == 2 and "general" in err
    code, out, _ = _run(["verify", "kron", files["W"], files["A"], "--general"], capsys)
    assert code == 0 and json.loads(out)["passed"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "hadamard", "A", "B"],
        ["verify", "col-add", "W", "--k", "3", "--l", "1"],
        ["verify", "col-swap", "W", "--k", "0", "--l", "2"],
        ["verify", "kron", "I2", "X"],
    ],
)
def test_verify_passes(files, capsys, argv):
    argv = [files.get(a, a) for a in argv]
    code, out, _ = _run(argv, capsys)
    report = json.loads(out)
    assert code == 0
    assert report["max_abs_diff"] < 1e-9
    assert abs(report["probability_observed"] - report["probability_expected"]) < 1e-10


def test_verify_mismatch_exits_nonzero(files, capsys, monkeypatch):
    from qmatops import oracle

    monkeypatch.setattr(oracle, "expected_probability", lambda *a, **k: 0.5)
    code, out, _ = _run(["verify", "col-swap", files["A"], "--k", "0", "--l", "1"], capsys)
    assert code == 1 and json.loads(out)["passed"] is False


def test_trace_stats_sample(files, capsys):
    argv = ["col-add", files["A"], "--k", "1", "--l", "0", "--trace", "--stats", "--sample", "500", "--seed", "3"]
    code, out, _ = _run(argv, capsys)
    report = json.loads(out)
    assert code == 0
    assert [t["stage"] for t in report["trace"]] == [f"Phi{i}" for i in range(8)]
    assert all(abs(t["norm"] - 1) < 1e-10 for t in report["trace"])
    assert report["samples"]["count"] == 500
    assert 0 < report["samples"]["successes"] < 500
    assert sum(s["cswap_count"] for s in report["stage_stats"]) == report["gate_stats"]["cswap_count"]
    _, again, _ = _run(argv, capsys)
    assert again == out


def test_out_path(files, tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = _run(["hadamard", files["A"], files["B"], "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert "success_probability" in json.loads(target.read_text())


@pytest.mark.parametrize(
    "argv",
    [
        ["col-add", "A"],
        ["col-add", "A", "--k", "0", "--l", "0"],
        ["hadamard", "A", "B", "--k", "0"],
        ["hadamard", "A"],
        ["hadamard", "A", "W"],
        ["col-swap", "A", "--k", "0", "--l", "1", "--general"],
        ["bogus"],
    ],
)
def test_validation_exit_code(files, capsys, argv):
    argv = [files.get(a, a) for a in argv]
    code, _, _ = _run(argv, capsys)
    assert code == 2


def test_postselection_exit_code(files, capsys):
    code, _, err = _run(["hadamard", files["D1"], files["D2"]], capsys)
    assert code == 3 and "post-selection" in err


def test_qubit_cap_exit_code(files, capsys, monkeypatch):
    from qmatops import qstate

    monkeypatch.setattr(qstate, "_max_qubits", 6)
    code, _, _ = _run(["hadamard", files["A"], files["B"]], capsys)
    assert code == 4
    code, _, _ = _run(["stats-sweep", "col-swap", "--sizes", "3"], capsys)
    assert code == 4


def test_stats_sweep_kron(capsys):
    code, out, _ = _run(["stats-sweep", "kron", "--sizes", "1,2,3"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == ",".join(cli.SWEEP_COLUMNS)
    rows = [dict(zip(cli.SWEEP_COLUMNS, map(int, line.split(",")))) for line in lines[1:]]
    assert [r["swap_count"] for r in rows] == [1, 2, 3]
    assert len({r["depth_layers"] for r in rows}) == 1


def test_stats_sweep_function():
    rows = cli.stats_sweep("col-add", [1, 2, 3])
    totals = [r["total_control_qubits"] for r in rows]
    assert totals[1] - totals[0] == totals[2] - totals[1] > 0


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "qmatops", "col-swap", files["A"], "--k", "0", "--l", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["success_probability"] == pytest.approx(1 / 24)
