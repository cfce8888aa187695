import csv
import json

import numpy as np
import pytest

from cqadc import cli, eps_bsc
from cqadc.errors import ConvergenceError, StructureError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sweep_spc_collective_beats_individual(tmp_path):
    out = tmp_path / "spc.csv"
    assert cli.main(["sweep", "--gamma-step", "0.05", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["gamma", "individual_ml", "collective_optimal", "hykl_residual"]
    assert len(rows) == 22
    for g, ind, col, res in rows[1:]:
        g, ind, col, res = map(float, (g, ind, col, res))
        assert col >= ind - 1e-9
        assert res <= 1e-7
        if 0 < g < 1:
            assert col > ind
    assert not (tmp_path / "spc.csv.log").exists()


def test_sweep_trivial_columns_agree(tmp_path):
    out = tmp_path / "t.csv"
    assert cli.main(["sweep", "--code", "trivial_3_3", "--gamma-step", "0.05", "--out", str(out)]) == 0
    for row in read_csv(out)[1:]:
        assert abs(float(row[1]) - float(row[2])) <= 1e-6


def test_sweep_noiseless_row(capsys):
    code, out, _ = run(
        capsys, "sweep", "--gamma-stop", "0", "--strategies", "individual_ml,collective_optimal,pgm,converse,rcb"
    )
    assert code == 0
    header, row = list(csv.reader(out.splitlines()))
    assert header == ["gamma", "individual_ml", "collective_optimal", "hykl_residual", "pgm", "converse", "rcb"]
    for name, value in zip(header, row):
        if name not in ("gamma", "hykl_residual", "rcb"):
            assert float(value) == 1.0


def test_sweep_bound_columns(capsys):
    code, out, _ = run(capsys, "sweep", "--gamma-start", "0.4", "--gamma-stop", "0.4", "--strategies", "converse,individual_ml")
    assert code == 0
    row = list(csv.reader(out.splitlines()))[1]
    assert float(row[1]) == pytest.approx(float(row[2]), abs=1e-9)


def test_sweep_format_and_line_endings(tmp_path):
    out = tmp_path / "f.csv"
    cli.main(["sweep", "--gamma-start", "0.3", "--gamma-stop", "0.3", "--out", str(out)])
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    row = raw.decode().splitlines()[1].split(",")
    assert row[0] == "0.3"
    assert len(row[1].replace("0.", "", 1)) <= 9


def test_sweep_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["sweep", "--code", "reduced_hamming_6_3", "--gamma-step", "0.25", "--strategies", "individual_ml,collective_optimal,pgm,rcb"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_capacity_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["capacity", "--gamma-step", "0.1", "--resolution", "0.01"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_capacity_report(tmp_path):
    out = tmp_path / "cap.csv"
    assert cli.main(["capacity", "--gamma-step", "0.05", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["gamma", "c_bsc", "two_thirds_c_qsc"]
    assert rows[-1][0] == "crossing"
    assert 0.90 <= float(rows[-1][1]) <= 0.96
    first = rows[1]
    assert float(first[1]) == 1.0 and float(first[2]) == pytest.approx(2 / 3, abs=1e-9)
    c = np.array([float(r[1]) for r in rows[1:-1]])
    assert np.all(np.diff(c) <= 0)


def test_povm_text(capsys):
    code, out, _ = run(capsys, "povm", "--gamma", "0.5")
    assert code == 0
    fields = dict(line.split(": ") for line in out.splitlines())
    assert fields["M"] == "4" and fields["n"] == "3"
    assert float(fields["hykl_residual"]) <= 1e-6
    assert float(fields["success_probability"]) > float(fields["individual_ml_success"])


def test_povm_noiseless_analytic(capsys):
    code, out, _ = run(capsys, "povm", "--code", "reduced_hamming_6_3", "--gamma", "0", "--json")
    report = json.loads(out)
    assert code == 0
    assert report["success_probability"] == 1.0
    assert report["hykl_residual"] <= 1e-14
    assert report["iterations"] == 0


@pytest.mark.slow
def test_povm_hamming_gap(capsys):
    code, out, _ = run(capsys, "povm", "--code", "hamming_7_4", "--gamma", "0.3", "--json")
    report = json.loads(out)
    assert code == 0
    assert report["success_probability"] > report["individual_ml_success"]
    assert report["hykl_residual"] <= 1e-6


def test_bounds_text(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "3", "--M", "4", "--eps", "0.1")
    assert code == 0
    assert out.splitlines()[0].startswith("converse: 0.81 ")
    assert "t=1" in out


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "2", "--M", "2", "--q", "2", "--eps", "0", "--json")
    report = json.loads(out)
    assert code == 0
    assert report["rcb"] == 0.875 and report["converse"] == 1.0


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gamma_start": 0.2, "gamma_stop": 0.4, "gamma_step": 0.1, "strategies": ["individual_ml"]}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--gamma-stop", "0.3")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["gamma", "individual_ml"]
    assert [r[0] for r in rows[1:]] == ["0.2", "0.3"]
    e = eps_bsc(0.2)
    assert float(rows[1][1]) == pytest.approx((1 - e) ** 3 + e * (1 - e) ** 2, rel=1e-8)


def test_code_json_path(tmp_path, capsys):
    path = tmp_path / "code.json"
    path.write_text(json.dumps({"q": 2, "generator": [[1, 0, 1], [0, 1, 1]]}))
    _, by_path, _ = run(capsys, "sweep", "--code", str(path), "--gamma-step", "0.25")
    _, by_name, _ = run(capsys, "sweep", "--code", "spc_3_2", "--gamma-step", "0.25")
    assert by_path == by_name


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--gamma-start", "0.5", "--gamma-stop", "0.2"],
        ["sweep", "--gamma-step", "0"],
        ["sweep", "--strategies", "magic"],
        ["sweep", "--code", "no_such_code"],
        ["sweep", "--config", "/nonexistent/config.json"],
        ["povm", "--gamma", "1.5"],
        ["bounds", "--n", "3", "--M", "4"],
        ["bounds", "--n", "3", "--M", "9", "--eps", "0.1"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2


def test_non_binary_code_rejected(tmp_path):
    path = tmp_path / "q4.json"
    path.write_text(json.dumps({"q": 4, "generator": [[1, 1, 1]]}))
    assert cli.main(["sweep", "--code", str(path)]) == 2


def test_non_convergence_leaves_empty_cell(tmp_path, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("no progress", best_residual=3e-5, iterations=100)

    monkeypatch.setattr(cli.measurement, "optimal_povm", fail)
    out = tmp_path / "nc.csv"
    code = cli.main(["sweep", "--gamma-start", "0.5", "--gamma-stop", "0.5", "--out", str(out)])
    assert code == 3
    assert read_csv(out)[1][2:] == ["", ""]
    log = read_csv(str(out) + ".log")
    assert log[1] == ["0.5", "collective_optimal", "non-convergence", "3e-05"]


def test_povm_non_convergence_exit_3(monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("no progress", best_residual=1e-4, iterations=10)

    monkeypatch.setattr(cli.measurement, "collective_optimum", fail)
    assert cli.main(["povm", "--gamma", "0.5"]) == 3


def test_structure_error_exit_4(monkeypatch):
    def broken(*args, **kwargs):
        raise StructureError("off-diagonal spread 1e-3")

    monkeypatch.setattr(cli.bounds, "capacities", broken)
    assert cli.main(["capacity", "--gamma-step", "0.5"]) == 4
