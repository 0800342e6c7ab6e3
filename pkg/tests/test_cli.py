import json
import math
import pathlib
import subprocess
import sys

import pytest

from qutrit_entanglement.analysis import evaluate_point
from qutrit_entanglement.cli import main
from qutrit_entanglement.io import CSV_COLUMNS, read_sweep_csv
from qutrit_entanglement.spin import HamiltonianParams

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    record = json.loads(out.strip().splitlines()[-1]) if out.strip() else None
    return code, record, err


def test_point_near_optimum(capsys):
    code, rec, err = run(capsys, "point", "--J", "-1", "--K", "0", "--Delta", "-1", "--B", "0", "--T", "0.2")
    assert code == 0
    assert rec["negativity"] > 0 and rec["R"] > 0
    assert rec["entangled_by_N"] and rec["entangled_by_R"]
    assert rec["log_base"] == "e"
    lib = evaluate_point(HamiltonianParams(J=-1, K=0, Delta=-1, B=0), 0.2)
    assert rec["negativity"] == lib.negativity and rec["R"] == lib.R and rec["trace_norm"] == lib.trace_norm
    assert "negativity" in err


def test_point_zero_hamiltonian(capsys):
    code, rec, _ = run(capsys, "point", "--J", "0", "--K", "0", "--Delta", "0", "--B", "0", "--T", "1")
    assert code == 0
    assert rec["negativity"] == 0
    assert rec["R"] == pytest.approx(math.log(1 / 3), abs=1e-12)


def test_point_log_base_recorded(capsys):
    _, nat, _ = run(capsys, "point", "--J", "-1", "--Delta", "-1", "--T", "0.2")
    _, dec, _ = run(capsys, "point", "--J", "-1", "--Delta", "-1", "--T", "0.2", "--log-base", "10")
    assert dec["log_base"] == "10"
    assert dec["R"] == pytest.approx(nat["R"] / math.log(10), rel=1e-12)


def test_point_rejects_negative_temperature(capsys):
    code, rec, err = run(capsys, "point", "--T", "-1")
    assert code == 2
    assert rec is None
    assert "--T" in err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["point", "--Q", "1"])
    assert info.value.code == 2


def test_config_file_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"J": -1, "Delta": -1, "T": 0.2, "log-base": "2"}))
    _, rec, _ = run(capsys, "point", "--config", str(cfg))
    assert (rec["J"], rec["Delta"], rec["T"], rec["log_base"]) == (-1, -1, 0.2, "2")
    _, rec, _ = run(capsys, "point", "--config", str(cfg), "--T", "0.5")
    assert rec["T"] == 0.5 and rec["J"] == -1


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    code, _, err = run(capsys, "point", "--config", str(cfg))
    assert code == 2 and "--config" in err
    cfg.write_text(json.dumps({"T": "hot"}))
    code, _, err = run(capsys, "point", "--config", str(cfg))
    assert code == 2 and "--T" in err


def test_sweep_writes_csv(capsys, tmp_path):
    out = tmp_path / "fig3a.csv"
    code, rec, _ = run(capsys, "sweep", "--J", "-1", "--B", "0", "--T", "0.2",
                       "--axis1", "K:-3:3:13", "--axis2", "Delta:-3:3:13", "--out", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 13 * 13
    assert rec["rows"] == 169
    rows = read_sweep_csv(out)
    assert [r["K"] for r in rows[:14:13]] == [-3.0, -2.5]  # axis1 outer
    best = max(rows, key=lambda r: r["negativity"])
    assert rec["max_negativity"]["value"] == best["negativity"]


def test_sweep_axis_validation(capsys, tmp_path):
    out = str(tmp_path / "x.csv")
    code, _, err = run(capsys, "sweep", "--axis1", "B:0:1:3", "--axis2", "B:0:1:3", "--out", out)
    assert code == 2 and "--axis2" in err
    code, _, err = run(capsys, "sweep", "--axis1", "B:1:0:3", "--out", out)
    assert code == 2 and "--axis1" in err
    code, _, err = run(capsys, "sweep", "--axis1", "B:0:1:3")
    assert code == 2 and "--out" in err


def test_sweep_parallelism_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--J", "-1", "--T", "0.3", "--axis1", "B:-2:2:6", "--axis2", "Delta:-2:2:5"]
    assert run(capsys, *args, "--parallelism", "1", "--out", str(a))[0] == 0
    assert run(capsys, *args, "--parallelism", "4", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name, argv", [
    ("sweep_k_delta_3x3.csv",
     ["--J", "-1", "--K", "0", "--B", "0", "--T", "0.2", "--axis1", "K:-1:1:3", "--axis2", "Delta:-1:1:3"]),
    ("sweep_b_5_negativity.csv",
     ["--J", "-1", "--Delta", "-1", "--K", "0.5", "--T", "0.6", "--axis1", "B:-2:2:5",
      "--detectors", "negativity", "--log-base", "10"]),
])
def test_sweep_golden_files(capsys, tmp_path, name, argv):
    out = tmp_path / name
    assert run(capsys, "sweep", *argv, "--out", str(out))[0] == 0
    assert out.read_bytes() == (GOLDEN / name).read_bytes()


def test_spectrum_case1_clean(capsys):
    code, rec, _ = run(capsys, "spectrum", "--J", "-1", "--K", "0", "--Delta", "1", "--B", "0")
    assert code == 0 and rec["case"] == 1
    assert rec["flagged"] == []
    assert all(r["residual"] < 1e-10 for r in rec["rows"])


def test_spectrum_case2_flags_central_pair(capsys):
    code, rec, err = run(capsys, "spectrum", "--J", "0", "--K", "1", "--Delta", "0", "--B", "0")
    assert code == 0 and rec["case"] == 2
    assert rec["flagged"] == ["Phi-"]
    row = next(r for r in rec["rows"] if r["label"] == "Phi-")
    assert row["analytic"] == 0 and row["rayleigh"] == pytest.approx(2)
    assert "FLAGGED" in err


def test_spectrum_heisenberg_multiset(capsys):
    _, rec, _ = run(capsys, "spectrum", "--J", "1", "--K", "0", "--Delta", "1", "--B", "0")
    assert sorted(r["analytic"] for r in rec["rows"]) == pytest.approx([-2, -1, -1, -1, 1, 1, 1, 1, 1])


def test_spectrum_case1_needs_k_zero(capsys):
    code, _, err = run(capsys, "spectrum", "--K", "1", "--case", "1")
    assert code == 2 and "--case" in err


def test_threshold_at_optimum(capsys):
    code, rec, _ = run(capsys, "threshold", "--J", "-1", "--K", "0", "--Delta", "-1", "--B", "0",
                       "--lo", "0.5", "--hi", "3")
    assert code == 0
    assert 1.35 <= rec["results"]["negativity"]["t_c"] <= 1.38
    assert "realignment" in rec["results"]


def test_threshold_not_bracketed(capsys):
    code, rec, err = run(capsys, "threshold", "--J", "-1", "--K", "0", "--Delta", "-1", "--B", "0",
                         "--lo", "2", "--hi", "3")
    assert code == 3
    assert rec["results"]["negativity"]["value_lo"] == 0
    assert "not bracketed" in err
    code, _, _ = run(capsys, "threshold", "--J", "0", "--K", "0", "--Delta", "0", "--B", "0",
                     "--lo", "0.1", "--hi", "1")
    assert code == 3


def test_threshold_usage_errors(capsys):
    code, _, err = run(capsys, "threshold", "--lo", "1")
    assert code == 2 and "--hi" in err
    code, _, err = run(capsys, "threshold", "--lo", "2", "--hi", "1")
    assert code == 2 and "--lo" in err


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qutrit_entanglement", "point", "--T", "-1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "--T" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "qutrit_entanglement", "point", "--J", "-1", "--T", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(proc.stdout.strip().splitlines()) == 1


def test_numeric_failure_exit_code(capsys, monkeypatch):
    import numpy as np

    from qutrit_entanglement import analysis

    def broken(*args, **kwargs):
        raise np.linalg.LinAlgError("eigensolver did not converge")

    monkeypatch.setattr(analysis, "evaluate_point", broken)
    code, rec, err = run(capsys, "point", "--T", "1")
    assert code == 1
    assert rec is None
    assert "did not converge" in err
