import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from cli import run


ROOT = Path(__file__).resolve().parents[1]


def run_cli_script(*args: str) -> subprocess.CompletedProcess:
    cmd = [sys.executable, str(ROOT / "cli.py"), *args]
    return subprocess.run(cmd, capture_output=True, text=True, cwd=ROOT)


def _rows(text: str) -> list[dict]:
    lines = text.splitlines()
    assert lines[0].startswith("# pfkernel ")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_partition_command(capsys):
    assert run(["partition", "--ensemble", "hermitian-beta1", "--n", "3"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert float(row["z_pfaffian"]) == pytest.approx(6.0 * math.sqrt(2.0) * math.pi, rel=1e-9)
    assert float(row["relative_gap"]) < 1e-5


def test_partition_skips_bruteforce_above_three(capsys):
    assert run(["partition", "--n", "5"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert row["z_bruteforce"] == ""
    assert float(row["z_pfaffian"]) > 0


def test_even_n_is_a_usage_error(capsys):
    assert run(["partition", "--n", "4"]) == 2
    assert "odd" in capsys.readouterr().err


def test_unknown_command_is_a_usage_error():
    assert run(["integrate"]) == 2


def test_library_error_writes_json_record(capsys):
    assert run(["kernel", "--n", "3"]) == 1
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["error"] == "ConfigurationError"
    assert record["command"] == "kernel"


def test_validate_command(capsys):
    assert run(["validate", "--seed", "7"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 5
    assert all(row["passed"] == "true" for row in rows)


def test_family_command_json(capsys):
    assert run(["family", "--ensemble", "real-asymmetric", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["columns"][:3] == ["k", "r", "s"]
    assert len(payload["rows"]) == 3
    assert payload["rows"][0][1] == pytest.approx(-2.0 * math.sqrt(2.0 * math.pi), rel=1e-8)
    assert payload["rows"][2][1] is None


def test_kernel_grid(capsys):
    assert run(["kernel", "--grid=-1:1:5"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 5
    assert all(float(row["s_re"]) > 0 for row in rows)


def test_correlate_with_oracle(capsys):
    assert run(["correlate", "--points=-0.5,0.7", "--oracle"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert row["real_points"] == "-0.5;0.69999999999999996"
    assert float(row["relative_gap"]) < 1e-4


def test_config_file_precedence(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"n": 5, "ensemble": "real-asymmetric"}))
    assert run(["partition", "--config", str(config)]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert (row["ensemble"], row["n"]) == ("real-asymmetric", "5")

    assert run(["partition", "--config", str(config), "--n", "3"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert (row["ensemble"], row["n"]) == ("real-asymmetric", "3")

    config.write_text(json.dumps({"n": 4}))
    assert run(["partition", "--config", str(config)]) == 2


def test_missing_config_file(tmp_path, capsys):
    assert run(["partition", "--config", str(tmp_path / "absent.json")]) == 1
    assert "ConfigurationError" in capsys.readouterr().err


def test_sample_output_is_reproducible(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        code = run(["sample", "--ensemble", "real-asymmetric", "--count", "10000", "--seed", "5",
                    "--bins=-3:3:12", "--out", str(path)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = _rows(paths[0].read_text())
    assert len(rows) == 12


def test_sample_needs_enough_draws(capsys):
    assert run(["sample", "--count", "500"]) == 1
    assert "10000" in capsys.readouterr().err


def test_script_entry_point():
    cp = run_cli_script("partition", "--ensemble", "hermitian-beta1", "--n", "3")
    assert cp.returncode == 0, cp.stderr
    assert "26.657297" in cp.stdout

    cp = run_cli_script("correlate", "--n", "4", "--points", "0.0")
    assert cp.returncode == 2
