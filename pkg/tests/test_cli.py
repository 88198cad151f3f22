import json
import math

import pytest

from framerecon import cli
from framerecon import expharness as eh
from framerecon.errors import InvariantViolation, NumericalFailure

FAST = ["--n", "20", "--m", "3", "--trials", "2"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_noise_table_csv(capsys):
    code, out = run(capsys, "noise-table", *FAST, "--lambda", "0", "--lambda", "1", "--snr", "inf", "--snr", "10")
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0] == ",".join(eh.AGGREGATE_HEADER)
    assert len(lines) == 1 + 2 * 2
    assert lines[1].startswith("3,0,inf,")


def test_default_table_grid(capsys):
    code, out = run(capsys, "noise-table", *FAST)
    assert code == 0
    assert len(out.out.splitlines()) == 1 + 11 * 3


def test_deterministic_output(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["bias-table", *FAST, "--seed", "5", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_metadata_records_grid(capsys):
    code, out = run(capsys, "snr-lambdaopt", *FAST, "--format", "json", "--snr", "inf", "--snr", "0")
    assert code == 0
    doc = json.loads(out.out)
    assert doc["metadata"]["lambda_grid"] == "log"
    assert doc["metadata"]["lambda_values"] == list(eh.LOG_GRID)
    assert list(doc["rows"][0]) == list(eh.LAMBDAOPT_HEADER)
    assert doc["rows"][0]["lambda_opt_mean"] == 0


def test_sweep_and_tradeoff(capsys):
    code, out = run(capsys, "lambda-sweep", *FAST, "--lambda", "grid:paper", "--snr", "20")
    assert code == 0 and len(out.out.splitlines()) == 12
    code, out = run(capsys, "tradeoff-curve", *FAST, "--solver", "cg")
    assert code == 0 and len(out.out.splitlines()) == 12


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\nn = 20\nm = 3, 4\ntrials = 2\nlambda = 0\nlambda = 1\nsnr = inf\n")
    code, out = run(capsys, "noise-table", "--config", str(cfg))
    assert code == 0
    assert [line.split(",")[0] for line in out.out.splitlines()[1:]] == ["3", "3", "4", "4"]
    code, out = run(capsys, "noise-table", "--config", str(cfg), "--m", "5")
    assert [line.split(",")[0] for line in out.out.splitlines()[1:]] == ["5", "5"]


def test_invalid_config_exit_code(tmp_path, capsys):
    assert run(capsys, "noise-table", *FAST, "--lambda", "2")[0] == 2
    assert run(capsys, "noise-table", *FAST, "--lambda", "grid:fine")[0] == 2
    assert run(capsys, "bias-table", "--n", "21", "--trials", "1")[0] == 2
    assert run(capsys, "noise-table", "--trials", "x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert run(capsys, "noise-table", "--config", str(bad))[0] == 2
    assert run(capsys, "noise-table", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_numerical_and_invariant_exit_codes(monkeypatch, capsys):
    def numerical(config):
        raise NumericalFailure("every trial failed")

    monkeypatch.setattr(eh, "run_noise_table", numerical)
    assert run(capsys, "noise-table", *FAST)[0] == 3

    def broken(config):
        raise InvariantViolation("mu(Q_0) is not minimal", dump={"trial": 0})

    monkeypatch.setattr(eh, "run_noise_table", broken)
    code, out = run(capsys, "noise-table", *FAST)
    assert code == 4
    assert '"trial": 0' in out.err


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "--trials", "10")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.out.splitlines())
