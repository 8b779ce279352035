import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from cyclet.cli import CSV_COLUMNS, COMMANDS, run

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"

EXAMPLES = [
    ("solve", "glueball_solve.json", "glueball_solve.json"),
    ("critical", "critical_gaussian.json", "critical_gaussian.csv"),
    ("harmonic", "harmonic_n6.json", "harmonic_n6.json"),
]


def invoke(capsys, *args):
    code = run(list(args))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("command,config,golden", EXAMPLES)
def test_golden(capsys, command, config, golden):
    code, out, _ = invoke(capsys, command, "--config", str(CONFIGS / config))
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


@pytest.mark.parametrize("command,config,golden", EXAMPLES)
def test_out_file_matches_stdout(tmp_path, capsys, command, config, golden):
    path = tmp_path / golden
    code, out, _ = invoke(capsys, command, "--config", str(CONFIGS / config), "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes() == (GOLDEN / golden).read_bytes()


def test_glueball_value(capsys):
    _, out, _ = invoke(capsys, "solve", "--config", str(CONFIGS / "glueball_solve.json"))
    rec = json.loads(out)["results"][0]
    assert rec["E"] == pytest.approx(6 * 3**0.25, rel=1e-11)
    assert rec["character"] == "UpperBound"


def test_critical_ratio(capsys):
    _, out, _ = invoke(capsys, "critical", "--config", str(CONFIGS / "critical_gaussian.json"))
    rows = {r["N"]: r for r in csv.DictReader(io.StringIO(out))}
    assert list(rows)[-1] == "inf"
    ratio = float(rows["3"]["g_c"]) / float(rows["inf"]["g_c"])
    assert ratio == pytest.approx(math.pi**2 / 12, rel=1e-11)
    assert float(rows["3"]["ratio_to_limit"]) == pytest.approx(0.8225, abs=1e-4)


def test_harmonic_merged_level(capsys):
    _, out, _ = invoke(capsys, "harmonic", "--config", str(CONFIGS / "harmonic_n6.json"))
    results = json.loads(out)["results"]
    q0 = results[0]["Q"]
    (merged,) = [r for r in results if abs(r["Q"] - q0 - 2) < 1e-9]
    assert [2, 0, 0, 0, 0] in merged["nu_patterns"]
    assert [0, 0, 1, 0, 0] in merged["nu_patterns"]


def test_json_round_trip(capsys):
    _, out, _ = invoke(capsys, "spectrum", "--config", str(CONFIGS / "glueball_solve.json"), "--set", "level={\"lowest\": 5}")
    payload = json.loads(out)
    assert json.loads(json.dumps(payload, indent=2) + "\n") == payload
    for rec in payload["results"]:
        for key in ("Q", "E", "r0", "L"):
            assert float(f"{rec[key]:.12g}") == rec[key]
        assert rec["E"] == pytest.approx(2 * math.sqrt(3 * rec["Q"]), rel=1e-11)


@pytest.mark.parametrize("command", COMMANDS)
def test_csv_header(capsys, tmp_path, command):
    cfg = {
        "kinetics": {"A": 0.5, "B": 2},
        "potential": {"kind": "power", "C": 1, "F": 1},
        "shape": "Gaussian",
        "n": 2,
        "n_max": 5,
        "level": {"lowest": 3},
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    code, out, err = invoke(capsys, command, "--config", str(path), "--format", "csv")
    assert code == 0, err
    lines = out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS[command])
    assert all(len(line.split(",")) == len(CSV_COLUMNS[command]) for line in lines[1:])


def test_set_overrides_config(capsys):
    _, out, _ = invoke(
        capsys, "solve", "--config", str(CONFIGS / "glueball_solve.json"), "--set", "potential.C=4", "--set", "N=2"
    )
    rec = json.loads(out)["results"][0]
    assert rec["E"] == pytest.approx(2 * math.sqrt(2 * 4 * 3), rel=1e-11)


def test_inline_only(capsys):
    code, out, _ = invoke(
        capsys, "regge", "--set", "n=3", "--set", "level={\"lowest\": 4}", "--set", "regge.sigma=0.5", "--format", "csv"
    )
    assert code == 0
    for row in csv.DictReader(io.StringIO(out)):
        assert float(row["E_squared"]) / float(row["Q"]) == pytest.approx(4 * 3 * 0.5, rel=1e-11)


def test_oracle_compare(capsys):
    code, out, _ = invoke(capsys, "oracle-compare", "--config", str(CONFIGS / "oracle_linear.json"))
    assert code == 0
    payload = json.loads(out)
    rec = payload["results"][0]
    assert rec["character"] == "UpperBound"
    assert rec["gap"] == pytest.approx(rec["E_et"] - rec["E_oracle"], abs=1e-10)
    assert rec["gap"] > 0
    assert payload["diagnostics"][0]["gap_sign_consistent"] is True


def test_oracle_compare_exact(capsys):
    code, out, _ = invoke(
        capsys, "oracle-compare", "--config", str(CONFIGS / "oracle_linear.json"), "--set", "potential.C=0.5", "--set", "potential.F=2"
    )
    rec = json.loads(out)["results"][0]
    assert code == 0
    assert rec["character"] == "Exact"
    assert abs(rec["gap"]) < 1e-6


@pytest.mark.parametrize(
    "args,fragment",
    [
        (["solve", "--set", "n=3", "--set", "kinetics.A=1", "--set", "kinetics.B=1"], "potential.kind"),
        (["solve", "--config", str(CONFIGS / "glueball_solve.json"), "--set", "n=1"], "'n'"),
        (["solve", "--set", "n=3", "--set", "kinetics.A=-1", "--set", "kinetics.B=1",
          "--set", "potential.kind=\"power\"", "--set", "potential.C=1", "--set", "potential.F=1"], "kinetics"),
        (["critical", "--set", "kinetics.A=1", "--set", "kinetics.B=2", "--set", "n_max=4"], "shape"),
        (["harmonic", "--set", "n=3", "--set", "level=\"top\""], "level"),
        (["oracle-compare", "--config", str(CONFIGS / "oracle_linear.json"), "--set", "n=3"], "'n'"),
        (["bogus"], ""),
        (["solve", "--format", "xml"], ""),
    ],
)
def test_config_errors_exit_1(capsys, args, fragment):
    code, _, err = invoke(capsys, *args)
    assert code == 1
    assert fragment in err


def test_bad_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "n": 3,\n  "d": oops\n}\n')
    code, _, err = invoke(capsys, "solve", "--config", str(path))
    assert code == 1
    assert f"{path}:3:" in err


def test_numerical_failure_exit_2(capsys):
    args = ["solve", "--config", str(CONFIGS / "oracle_linear.json"), "--set", 'potential={"kind": "finite", "g": 0.5, "shape": "Gaussian"}']
    code, out, err = invoke(capsys, *args)
    assert code == 2
    payload = json.loads(out)
    assert payload["error"]["type"] == "NoBoundState"
    assert "best_E" in payload["error"]
    assert "numerical failure" in err


def test_deterministic_across_processes(tmp_path):
    outputs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        subprocess.run(
            [sys.executable, "-m", "cyclet.cli", "spectrum", "--config", str(CONFIGS / "glueball_solve.json"),
             "--set", "level={\"lowest\": 6}", "--out", str(path)],
            check=True,
        )
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
