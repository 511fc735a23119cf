import json

import pytest

from hypwalk.cli import main

GOOD = """
[experiment]
id = "cli-drift"
kind = "drift"
master_seed = 5

[group]
spec = "free(2)"

[distribution]
uniform_generators = true

[grid]
n = [4]
trials = 5
"""

NO_SEED = GOOD.replace("master_seed = 5", "")

BUDGET = """
[experiment]
id = "cli-budget"
kind = "relation-search"
master_seed = 5

[group]
spec = "free(2)"

[distribution]
uniform_generators = true

[grid]
n = [4]
trials = 1

[params]
max_syllables = 8
exponent_bound = 6
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(GOOD)
    return path


def test_validate_ok(config_file, capsys):
    assert main(["validate", str(config_file)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("ok: cli-drift (drift)")
    assert "n_grid=[4]" in out and "trials=5" in out


def test_validate_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.toml")]) == 1
    assert "error:" in capsys.readouterr().err


def test_validate_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text(GOOD.replace('kind = "drift"', 'kind = "wat"'))
    assert main(["validate", str(path)]) == 1
    err = capsys.readouterr().err
    assert "invalid config:" in err
    assert "experiment.kind:" in err


def test_run_writes_outputs(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", str(config_file), "--out", str(out)]) == 0
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 3
    assert (out / "records.jsonl").exists()
    assert (out / "summary.csv").exists()
    assert (out / "report.json").exists()
    meta = json.loads((out / "report.json").read_text())
    assert meta["master_seed"] == 5
    assert meta["seed_source"] == "config"
    assert meta["complete"] is True


def test_run_threads_byte_identical(config_file, tmp_path):
    out1, out4 = tmp_path / "o1", tmp_path / "o4"
    assert main(["run", str(config_file), "--out", str(out1)]) == 0
    assert main(["run", str(config_file), "--out", str(out4),
                 "--threads", "4"]) == 0
    assert (out1 / "records.jsonl").read_bytes() == \
        (out4 / "records.jsonl").read_bytes()
    assert (out1 / "summary.csv").read_bytes() == \
        (out4 / "summary.csv").read_bytes()


def test_run_seed_override(config_file, tmp_path):
    out = tmp_path / "out"
    assert main(["run", str(config_file), "--out", str(out),
                 "--seed", "99"]) == 0
    meta = json.loads((out / "report.json").read_text())
    assert meta["master_seed"] == 99
    assert meta["seed_source"] == "cli-override"
    recs = (out / "records.jsonl").read_text().splitlines()
    assert json.loads(recs[0])["derived_seed"] != 0


def test_run_env_seed(tmp_path, monkeypatch):
    path = tmp_path / "exp.toml"
    path.write_text(NO_SEED)
    out = tmp_path / "out"
    monkeypatch.setenv("HYPWALK_SEED", "123")
    assert main(["run", str(path), "--out", str(out)]) == 0
    meta = json.loads((out / "report.json").read_text())
    assert meta["master_seed"] == 123
    assert meta["seed_source"] == "env"


def test_run_no_seed_anywhere(tmp_path, monkeypatch, capsys):
    path = tmp_path / "exp.toml"
    path.write_text(NO_SEED)
    monkeypatch.delenv("HYPWALK_SEED", raising=False)
    assert main(["run", str(path), "--out", str(tmp_path / "o")]) == 1
    assert "master_seed" in capsys.readouterr().err


def test_run_bad_env_seed(tmp_path, monkeypatch, capsys):
    path = tmp_path / "exp.toml"
    path.write_text(NO_SEED)
    monkeypatch.setenv("HYPWALK_SEED", "minus one")
    assert main(["run", str(path), "--out", str(tmp_path / "o")]) == 1
    assert "HYPWALK_SEED" in capsys.readouterr().err


def test_run_budget_exceeded_exit_2(tmp_path, capsys):
    path = tmp_path / "exp.toml"
    path.write_text(BUDGET)
    out = tmp_path / "out"
    assert main(["run", str(path), "--out", str(out)]) == 2
    captured = capsys.readouterr()
    assert "incomplete:" in captured.err
    meta = json.loads((out / "report.json").read_text())
    assert meta["complete"] is False


def test_replay_round_trip(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    main(["run", str(config_file), "--out", str(out)])
    capsys.readouterr()
    assert main(["replay", str(out / "records.jsonl")]) == 0
    assert "replay ok" in capsys.readouterr().out


def test_replay_detects_corruption(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    main(["run", str(config_file), "--out", str(out)])
    rec_path = out / "records.jsonl"
    lines = rec_path.read_text().splitlines()
    obj = json.loads(lines[0])
    obj["payload"]["distance"] += 2
    lines[0] = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    rec_path.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["replay", str(rec_path)]) == 1
    assert capsys.readouterr().err.strip()


def test_replay_missing_file(tmp_path, capsys):
    assert main(["replay", str(tmp_path / "none.jsonl")]) == 1
    assert "error:" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("hypwalk ")


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run(
        [sys.executable, "-m", "hypwalk", "--version"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("hypwalk ")
