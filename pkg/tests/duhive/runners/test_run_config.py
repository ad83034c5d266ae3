import json
import os
import sys
from unittest.mock import patch

import pandas as pd
import pytest

import duhive
from duhive.runners import run_config
from duhive.runners.jobs import JOB_KINDS, get_job
from duhive.runners.utils import load_config
from duhive.utils.loggers import NullLogger
from duhive.utils.registry import ConfigError

CONFIG = "tests/duhive/runners/test_run_config.yml"


class FakeLogger(NullLogger):
    def __init__(self, arg1: int = 0):
        super().__init__()
        self.arg1 = arg1
        self.metrics = []

    def log_metrics(self, metrics, prefix):
        self.metrics.append((prefix, dict(metrics)))


duhive.registry.register("FakeLogger", FakeLogger, FakeLogger)


@pytest.fixture()
def config(tmpdir, monkeypatch):
    monkeypatch.setattr(sys, "argv", ["run_config.py"])
    config = load_config(CONFIG)
    config["save_dir"] = os.path.join(tmpdir, config["save_dir"])
    return config


@pytest.fixture()
def runner(config):
    return run_config.set_up_run(config)


def test_set_up_run(runner):
    assert [job.kind for job in runner._jobs] == [
        "verify",
        "schmidt",
        "membrane",
        "bounds",
        "search",
    ]
    assert runner._jobs[0].name == "cnot_verify"
    assert runner._jobs[1].name == "schmidt"
    assert len(runner._logger._logger_list) == 2


def test_run_writes_report(runner, config):
    bundle = runner.run()
    assert bundle.passed
    run_dir = os.path.join(config["save_dir"], "test-run")
    with open(os.path.join(run_dir, "manifest.json")) as f:
        manifest = json.load(f)
    assert manifest["passed"]
    assert [job["name"] for job in manifest["jobs"]] == [
        "cnot_verify",
        "schmidt",
        "membrane",
        "bounds",
        "search",
    ]
    residuals = pd.read_csv(os.path.join(run_dir, "cnot_verify", "residuals.csv"))
    assert set(residuals.direction) == {"left", "right", "dual_unitary", "t_dual"}
    scan = pd.read_csv(os.path.join(run_dir, "membrane", "scan.csv"))
    assert list(scan.columns) == ["x", "t", "m", "n", "Z", "S", "ELT"]
    assert os.path.isfile(os.path.join(run_dir, "cnot_verify", "gate.json"))
    assert not os.path.exists(os.path.join(run_dir, "search", "gate.json"))
    assert os.path.isfile(os.path.join(run_dir, "config.yml"))
    assert os.path.isdir(os.path.join(run_dir, "logger", "logger_1"))


def test_claims_reach_the_logger(runner):
    runner.run()
    fake = runner._logger._logger_list[0]
    claims = [metrics["claim"] for prefix, metrics in fake.metrics if prefix == "cnot_verify"]
    assert "monotone" in claims
    assert "recipe_roundtrip" in claims


def test_threaded_run_keeps_order(config):
    config["workers"] = 3
    bundle = run_config.set_up_run(config).run()
    assert [report.name for report in bundle.reports][0] == "cnot_verify"
    assert bundle.passed


def test_kind_filter(config):
    runner = run_config.set_up_run(config, kinds=["membrane", "bounds"])
    assert [job.kind for job in runner._jobs] == ["membrane", "bounds"]


def test_failed_job_is_reported(config):
    config["jobs"] = [
        {"name": "verify", "kwargs": {"gate": {"name": "named", "kwargs": {"name": "O8_block"}}}},
        {"name": "verify", "kwargs": {"gate": {"name": "named", "kwargs": {"name": "SWAP"}}}},
    ]
    bundle = run_config.set_up_run(config).run()
    assert not bundle.passed
    first, second = bundle.reports
    assert first.status == "error"
    assert first.error.startswith("ValueError")
    assert second.name == "verify_1"
    assert second.passed


def test_failed_claim_fails_run(config):
    config["jobs"] = [
        {
            "name": "schmidt",
            "kwargs": {
                "gate": {"name": "named", "kwargs": {"name": "CNOT"}},
                "expect": {"schmidt_rank": 3},
            },
        }
    ]
    bundle = run_config.set_up_run(config).run()
    assert bundle.reports[0].status == "ok"
    assert not bundle.passed


@pytest.mark.parametrize(
    "jobs,field",
    [
        (None, "jobs"),
        ({"name": "verify"}, "jobs"),
        ([{"name": "nope"}], "jobs.0.name"),
        ([{"name": "verify", "kwargs": {"kmax": 3}}], "jobs.0.kwargs.kmax"),
    ],
)
def test_config_errors(config, jobs, field):
    if jobs is None:
        del config["jobs"]
    else:
        config["jobs"] = jobs
    with pytest.raises(ConfigError) as error:
        run_config.set_up_run(config)
    assert error.value.field == field


def test_missing_gate():
    job_fn, _ = get_job({"name": "otoc"}, "jobs.0")
    with pytest.raises(ConfigError, match="needs a gate"):
        job_fn().run(NullLogger(), "jobs.0")


def test_every_kind_is_registered():
    assert set(duhive.registry.names("job")) == set(JOB_KINDS)


def test_load_config_errors(tmpdir):
    with pytest.raises(ValueError, match="Config needs"):
        load_config()
    path = str(tmpdir / "bad.yml")
    with open(path, "w") as f:
        f.write("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(path)


def test_jobs_config_override(tmpdir):
    path = str(tmpdir / "jobs.yml")
    with open(path, "w") as f:
        f.write("- name: bounds\n  kwargs: {k_left: 2, B_left: 2.0}\n")
    config = load_config(CONFIG, jobs_config=path)
    assert config["jobs"] == [{"name": "bounds", "kwargs": {"k_left": 2, "B_left": 2.0}}]


@pytest.mark.parametrize(
    "arg_string,cl_args",
    [
        (
            "run_config.py --seed 20 --jobs.0.k_max 3 --loggers.logger_list.0.arg1 2",
            [20, 3, 2],
        ),
        ("run_config.py --jobs.0.k_max 3", [None, 3, None]),
        ("run_config.py --seed 20", [20, None, None]),
    ],
)
@patch("duhive.runners.run_config.utils.seeder")
def test_cl_parsing(mock_seeder, config, monkeypatch, arg_string, cl_args):
    defaults = [None, 4, 0]
    expected_args = [
        cl_args[idx] if cl_args[idx] else defaults[idx] for idx in range(len(cl_args))
    ]
    monkeypatch.setattr(sys, "argv", arg_string.split())
    runner = run_config.set_up_run(config)
    full_config = runner._experiment_manager._config
    assert runner._jobs[0]._k_max == expected_args[1]
    assert full_config["jobs"][0]["kwargs"]["k_max"] == expected_args[1]
    assert runner._logger._logger_list[0].arg1 == expected_args[2]
    if cl_args[2]:
        assert (
            full_config["loggers"]["kwargs"]["logger_list"][0]["kwargs"]["arg1"]
            == expected_args[2]
        )
    else:
        assert "arg1" not in full_config["loggers"]["kwargs"]["logger_list"][0].get(
            "kwargs", {}
        )
    if cl_args[0]:
        assert mock_seeder.set_global_seed.call_args.args == (cl_args[0],)
    else:
        assert not mock_seeder.set_global_seed.called


def test_main_exit_code(tmpdir, monkeypatch):
    monkeypatch.setattr(
        sys,
        "argv",
        ["duhive_run", "-c", CONFIG, "-k", "bounds", "--save_dir", str(tmpdir)],
    )
    with pytest.raises(SystemExit) as exit_info:
        run_config.main()
    assert exit_info.value.code == 0
    assert os.path.isfile(os.path.join(str(tmpdir), "test-run", "manifest.json"))


@pytest.mark.parametrize(
    "preset", ["cnot.yml", "qubit_l2.yml", "qubit_l3.yml", "hadamard.yml", "q4_gates.yml", "search.yml"]
)
def test_presets_build(preset, monkeypatch):
    monkeypatch.setattr(sys, "argv", ["run_config.py"])
    config = load_config(preset_config=preset)
    for index, job_config in enumerate(config["jobs"]):
        job_fn, _ = get_job(job_config, f"jobs.{index}")
        job = job_fn()
        if job.needs_gate:
            job.build_gate(f"jobs.{index}")
