import json
import subprocess
import sys

import numpy as np
import pytest

from clusterpersist.cli import main
from helpers import DATA_DIR


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_estimate_two_disks(capsys):
    code, out, err = run_cli(
        ["estimate", "--gen", "two-disks", "--R", "1", "--gap", "4",
         "--n", "5000", "--k-max", "6", "--seed", "1"],
        capsys,
    )
    assert code == 0
    assert out == "k_t = 2\n"
    assert err == ""


def test_estimate_iris(capsys):
    code, out, _ = run_cli(
        ["estimate", "--input", str(DATA_DIR / "iris.csv"),
         "--label-col", "4", "--k-max", "10"],
        capsys,
    )
    assert code == 0
    assert out == "k_t = 2\n"


def test_estimate_writes_profile_file(capsys, tmp_path):
    out_path = tmp_path / "prof.csv"
    code, out, _ = run_cli(
        ["estimate", "--gen", "two-disks", "--n", "300", "--k-max", "4",
         "--output", str(out_path)],
        capsys,
    )
    assert code == 0
    assert out == "k_t = 2\n"
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "k,beta_bar,log_beta_bar,v"
    assert len(lines) == 1 + 4


def test_k_max_too_small_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["estimate", "--gen", "two-disks", "--k-max", "1"])
    assert exc.value.code == 2


def test_kernel_mode_requires_sigma(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["profile", "--gen", "rings", "--k-max", "4", "--mode", "kernel"])
    assert exc.value.code == 2


def test_missing_source_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["estimate", "--k-max", "4"])
    assert exc.value.code == 2


def test_unknown_shape_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "torus"])
    assert exc.value.code == 2


def test_missing_input_file_is_runtime_error(capsys, tmp_path):
    code, out, err = run_cli(
        ["estimate", "--input", str(tmp_path / "nope.csv"), "--k-max", "3"],
        capsys,
    )
    assert code == 1
    assert err.startswith("error:")
    assert out == ""


def test_gen_rings_deterministic(capsys):
    argv = ["gen", "rings", "--n", "50", "--seed", "3"]
    _, first, _ = run_cli(argv, capsys)
    _, second, _ = run_cli(argv, capsys)
    assert first == second
    rows = first.strip().split("\n")
    assert len(rows) == 150
    for row in rows:
        x, y, label = row.split(",")
        float(x)
        float(y)
        assert label in ("0", "1", "2")


def test_gen_respects_output_path(capsys, tmp_path):
    p = tmp_path / "disks.csv"
    code, out, _ = run_cli(
        ["gen", "two-disks", "--n", "20", "--output", str(p)], capsys
    )
    assert code == 0
    assert out == ""
    rows = p.read_text().strip().split("\n")
    assert len(rows) == 40
    labels = {row.split(",")[-1] for row in rows}
    assert labels == {"0", "1"}


def test_profile_csv_stdout(capsys):
    code, out, _ = run_cli(
        ["profile", "--gen", "two-disks", "--n", "2000", "--k-max", "6",
         "--seed", "1"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k,beta_bar,log_beta_bar,v"
    assert len(lines) == 1 + 6
    assert lines[1].split(",")[3] == ""
    v2 = float(lines[2].split(",")[3])
    assert v2 == pytest.approx(3.53, abs=0.15)
    vs = [float(line.split(",")[3]) for line in lines[2:]]
    assert max(vs) == v2


def test_profile_kernel_rings_at_default_n(capsys):
    # regression: at the generator's default size the merged partial-ring
    # clusters carry near-degenerate kernel scatter pairs that once pushed
    # the eigensolver past its iteration cap and aborted the whole profile
    code, out, _ = run_cli(
        ["profile", "--gen", "rings", "--normalize", "--k-max", "6",
         "--mode", "kernel", "--sigma", "0.01"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k,beta_bar,log_beta_bar,v"
    assert len(lines) == 1 + 6


def test_profile_json_document(capsys):
    code, out, _ = run_cli(
        ["profile", "--gen", "two-disks", "--n", "300", "--k-max", "4",
         "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"version", "config", "profile"}
    cfg = doc["config"]
    assert cfg["source"] == "two-disks"
    assert cfg["mode"] == "linear"
    assert cfg["k_max"] == 4
    assert cfg["normalize"] is False
    assert doc["profile"]["k_t"] == 2
    assert set(doc["profile"]["beta_bar"]) == {"1", "2", "3", "4"}


def test_profile_json_normalize_defaults_on_for_files(capsys):
    code, out, _ = run_cli(
        ["profile", "--input", str(DATA_DIR / "iris.csv"), "--label-col", "4",
         "--k-max", "3", "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["normalize"] is True
    assert doc["config"]["source"].endswith("iris.csv")


def test_normalize_flag_changes_scale_sensitivity(capsys):
    # raw coordinates put beta_bar at the data's own scale; z-scoring first
    # moves it, so the two runs must disagree
    base = ["profile", "--gen", "two-disks", "--n", "400", "--k-max", "3"]
    _, raw, _ = run_cli(base, capsys)
    _, normed, _ = run_cli(base + ["--normalize"], capsys)
    _, raw_again, _ = run_cli(base + ["--no-normalize"], capsys)
    assert raw_again == raw
    b_raw = float(raw.strip().split("\n")[1].split(",")[1])
    b_norm = float(normed.strip().split("\n")[1].split(",")[1])
    assert b_norm != pytest.approx(b_raw, rel=1e-3)


def test_da_trace_gaussians(capsys, tmp_path):
    out_path = tmp_path / "trace.csv"
    argv = ["da-trace", "--gen", "gaussians4", "--seed", "0",
            "--output", str(out_path)]
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("predicted critical beta = ")
    assert lines[1].startswith("first split observed at beta = ")
    rel = float(lines[2].removeprefix("relative error = ").removesuffix("%"))
    assert rel < 5.0
    assert lines[3] == "final distinct centroids = 4"
    trace_lines = out_path.read_text().strip().split("\n")
    assert trace_lines[0] == "beta,k_distinct,free_energy"
    assert len(trace_lines) > 10
    code2, again, _ = run_cli(argv, capsys)
    assert code2 == 0
    assert again == out


def test_da_trace_without_split_reports_failure(capsys):
    code, out, _ = run_cli(
        ["da-trace", "--gen", "two-disks", "--n", "200",
         "--beta-min", "0.001", "--beta-max", "0.002"],
        capsys,
    )
    assert code == 1
    assert "no split observed; raise --beta-max" in out


def test_da_trace_rejects_bad_schedule(capsys):
    code, _, err = run_cli(
        ["da-trace", "--gen", "two-disks", "--n", "100",
         "--beta-min", "0.5", "--beta-max", "0.1"],
        capsys,
    )
    assert code == 1
    assert "error:" in err


def test_console_script_runs():
    res = subprocess.run(
        ["clusterpersist", "--version"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout.startswith("clusterpersist ")


def test_module_entry_point_matches_console_script():
    res = subprocess.run(
        [sys.executable, "-m", "clusterpersist.cli",
         "gen", "spirals", "--n", "10", "--seed", "1"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert len(res.stdout.strip().split("\n")) == 30
