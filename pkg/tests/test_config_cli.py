import json
import subprocess
import sys

import pytest
from pydantic import ValidationError

from randflight.cli import main
from randflight.config import ExperimentConfig, load_config


def base(tmp_path, **over):
    cfg = {
        "schema_version": 1,
        "model": "A",
        "dimension": 2,
        "rate": {"kind": "PowerLaw", "alpha": 0.5},
        "stop": {"by": "count", "n": 64},
        "replicas": 8,
        "master_seed": 17,
        "outputs": str(tmp_path / "out"),
    }
    cfg.update(over)
    return cfg


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def test_round_trip(tmp_path):
    cfg = ExperimentConfig.model_validate(base(tmp_path, checkpoints=[4, 16], trajectory_dumps=2))
    again = ExperimentConfig.model_validate_json(cfg.to_json())
    assert again == cfg


def test_defaults_and_derived_objects(tmp_path):
    cfg = ExperimentConfig.model_validate(base(tmp_path))
    assert cfg.rho == 1.0
    assert cfg.region == "Box"
    assert cfg.resolved_checkpoints() == [1, 2, 4, 8, 16, 32, 64]
    assert cfg.rate_function().alpha == 0.5
    assert cfg.direction_model().dimension == 2


def test_model_b_needs_two_dimensions(tmp_path):
    with pytest.raises(ValidationError, match="dimension"):
        ExperimentConfig.model_validate(base(tmp_path, model="B", dimension=1))


@pytest.mark.parametrize(
    "over",
    [
        {"colour": "blue"},
        {"replicas": 0},
        {"schema_version": 2},
        {"rate": {"kind": "PowerLaw", "alpha": 1.5}},
        {"rate": {"kind": "LogPower", "alpha": 2.0}},
        {"stop": {"by": "time", "T": -1.0}},
        {"master_seed": 2**64},
        {"checkpoints": [4, 2]},
    ],
)
def test_invalid_configs(tmp_path, over):
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(base(tmp_path, **over))


def test_load_rejects_non_object(tmp_path):
    p = tmp_path / "list.json"
    p.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_config(p)


def test_simulate_exit_zero_and_files(tmp_path, capsys):
    p = write(tmp_path, base(tmp_path, trajectory_dumps=1))
    assert main(["simulate", "--config", str(p), "--threads", "1"]) == 0
    out = tmp_path / "out"
    for name in ["config.json", "replicas.jsonl", "return_frequency.csv", "window_hits.csv",
                 "last_hit.csv", "gap_quantiles.csv", "ring_occupancy.csv", "envelope.csv",
                 "summary.json", "trajectories/replica_0.csv"]:
        assert (out / name).exists(), name
    assert len((out / "replicas.jsonl").read_text().splitlines()) == 8
    assert json.loads(capsys.readouterr().out)["outputs"] == str(out)


def test_invalid_config_names_field(tmp_path, capsys):
    p = write(tmp_path, base(tmp_path, model="B", dimension=1))
    assert main(["simulate", "--config", str(p)]) == 2
    assert "dimension" in capsys.readouterr().err


def test_unknown_field_named(tmp_path, capsys):
    p = write(tmp_path, base(tmp_path, replica=3))
    assert main(["simulate", "--config", str(p)]) == 2
    assert "replica" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 2


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["simulate", "--config", str(p)]) == 2


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    p = write(tmp_path, base(tmp_path, outputs=str(blocker / "sub")))
    assert main(["simulate", "--config", str(p)]) == 2


def test_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2


def test_threads_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("RANDFLIGHT_THREADS", "0")
    p = write(tmp_path, base(tmp_path))
    assert main(["simulate", "--config", str(p)]) == 2


@pytest.mark.parametrize("suite", ["rates", "geometry", "mathkit"])
def test_verify_quick_passes(suite, capsys):
    assert main(["verify", "--suite", suite, "--quick"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_verify_all_quick_via_module():
    res = subprocess.run([sys.executable, "-m", "randflight", "verify", "--suite", "all", "--quick"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stdout + res.stderr
