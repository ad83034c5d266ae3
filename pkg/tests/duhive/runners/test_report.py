import json
import os

import numpy as np
import pandas as pd
import pytest

from duhive.gates import build_gate
from duhive.runners.report import (
    JobReport,
    JobResult,
    ReportBundle,
    _plain,
    bound_claim,
    close_claim,
    emit,
    equal_claim,
    residual_claim,
)


def test_claims():
    assert close_claim("a", 0.5 + 1e-12, 0.5, 1e-10).passed
    assert not close_claim("a", [0.5, 0.7], [0.5, 0.75], 1e-3).passed
    assert equal_claim("b", 2, 2).passed
    assert not equal_claim("b", None, 2).passed
    assert bound_claim("c", 0.9, 1.0).passed
    assert not bound_claim("c", 1.1, 1.0).passed
    assert bound_claim("c", 1.1, 1.0, upper=False).passed
    claim = residual_claim("d", 1e-3, 1e-6)
    assert not claim.passed
    assert claim.value == claim.residual


def test_plain():
    value = {1: np.float64(0.5), "b": np.arange(2), "c": 1 + 2j, "d": (np.int64(3),), "e": np.inf}
    assert _plain(value) == {"1": 0.5, "b": [0, 1], "c": [1.0, 2.0], "d": [3], "e": "inf"}
    json.dumps(_plain(value))


def test_report_passed():
    ok = JobReport("a", "verify", "ok", 0.1, JobResult(claims=[equal_claim("x", 1, 1)]))
    failed = JobReport("b", "verify", "ok", 0.1, JobResult(claims=[equal_claim("x", 1, 2)]))
    error = JobReport("c", "verify", "error", 0.1, error="ValueError: boom")
    assert ok.passed
    assert not failed.passed
    assert not error.passed
    assert ReportBundle("run", {}, [ok]).passed
    assert not ReportBundle("run", {}, [ok, failed]).passed


def test_emit(tmpdir):
    gate = build_gate({"name": "named", "kwargs": {"name": "CNOT"}})
    result = JobResult(
        tables={"values": pd.DataFrame({"x": [1, 2], "y": [0.1, 1 / 3]})},
        claims=[close_claim("y", 1 / 3, 1 / 3, 1e-12)],
        artifacts={"complex": 1j},
        gate=gate,
    )
    bundle = ReportBundle("run", {"seed": 1}, [JobReport("job", "verify", "ok", 0.2, result)])
    emit(bundle, str(tmpdir))
    table = pd.read_csv(os.path.join(str(tmpdir), "job", "values.csv"))
    assert table.y[1] == pytest.approx(1 / 3, abs=1e-15)
    with open(os.path.join(str(tmpdir), "job", "gate.json")) as f:
        spec = json.load(f)
    assert spec["kind"] == "named"
    assert len(spec["matrix"]) == 4
    with open(os.path.join(str(tmpdir), "manifest.json")) as f:
        manifest = json.load(f)
    assert manifest["jobs"][0]["claims"][0]["name"] == "y"
    assert manifest["jobs"][0]["artifacts"]["complex"] == [0.0, 1.0]
    assert not any(name.endswith(".tmp") for name in os.listdir(str(tmpdir)))


def test_emit_formats(tmpdir):
    bundle = ReportBundle("run", {}, [])
    emit(bundle, str(tmpdir), formats=("csv",))
    assert not os.path.exists(os.path.join(str(tmpdir), "manifest.json"))
    with pytest.raises(ValueError, match="format"):
        emit(bundle, str(tmpdir), formats=("hdf5",))
