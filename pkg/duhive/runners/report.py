"""Claims, per-job results and the report bundle written by a run."""
import datetime
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from duhive.utils.experiment import Experiment

FORMATS = ("csv", "json")


@dataclass
class Claim:
    """A checked numeric statement.

    Attributes:
        name (str): Identifier of the claim within its job.
        value: Measured value.
        expected: Reference value, None for bounds and structural checks.
        tolerance (float): Allowed residual.
        residual (float): Measured deviation.
        passed (bool): Whether ``residual <= tolerance``.
    """

    name: str
    value: Any
    expected: Any
    tolerance: float
    residual: float
    passed: bool

    def to_dict(self):
        return _plain(asdict(self))


def close_claim(name, value, expected, tolerance):
    """``|value - expected| <= tolerance``."""
    residual = float(np.max(np.abs(np.asarray(value) - np.asarray(expected))))
    return Claim(name, value, expected, tolerance, residual, residual <= tolerance)


def equal_claim(name, value, expected):
    """Exact equality of discrete values."""
    passed = value == expected
    return Claim(name, value, expected, 0.0, 0.0 if passed else 1.0, bool(passed))


def bound_claim(name, value, bound, tolerance=0.0, upper=True):
    """``value <= bound`` (or ``>=`` when `upper` is False) up to `tolerance`."""
    excess = value - bound if upper else bound - value
    residual = float(max(0.0, excess))
    return Claim(name, value, bound, tolerance, residual, residual <= tolerance)


def residual_claim(name, residual, tolerance):
    """A residual computed elsewhere, expected to vanish."""
    residual = float(residual)
    return Claim(name, residual, 0.0, tolerance, residual, residual <= tolerance)


@dataclass
class JobResult:
    """Output of a single job.

    Attributes:
        tables (dict[str, pd.DataFrame]): Long-format tables, one CSV each.
        claims (list[Claim]): Checked statements.
        artifacts (dict): JSON-compatible extras written to the manifest.
        gate (UnitaryGate): Gate the job ran on, saved next to its tables.
    """

    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    claims: List[Claim] = field(default_factory=list)
    artifacts: Dict[str, Any] = field(default_factory=dict)
    gate: Optional[Any] = None


@dataclass
class JobReport:
    name: str
    kind: str
    status: str
    runtime: float
    result: JobResult = field(default_factory=JobResult)
    error: Optional[str] = None

    @property
    def passed(self):
        return self.status == "ok" and all(claim.passed for claim in self.result.claims)

    def to_dict(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "status": self.status,
            "passed": self.passed,
            "runtime": self.runtime,
            "error": self.error,
            "claims": [claim.to_dict() for claim in self.result.claims],
            "tables": sorted(self.result.tables),
            "artifacts": _plain(self.result.artifacts),
        }


@dataclass
class ReportBundle:
    """Everything a run produced."""

    run_name: str
    config: Dict[str, Any]
    reports: List[JobReport] = field(default_factory=list)

    @property
    def passed(self):
        return all(report.passed for report in self.reports)

    def manifest(self):
        return {
            "run_name": self.run_name,
            "created": datetime.datetime.now().isoformat(timespec="seconds"),
            "passed": self.passed,
            "config": _plain(self.config),
            "jobs": [report.to_dict() for report in self.reports],
        }


def _plain(value):
    """Converts numpy scalars, arrays and complex numbers to JSON types."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, complex):
        return value.real if value.imag == 0 else [value.real, value.imag]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def emit(bundle, save_dir, formats=FORMATS):
    """Writes the tables of every job as CSV and the manifest as JSON.

    Tables go to ``<save_dir>/<job>/<table>.csv``, gates to
    ``<save_dir>/<job>/gate.json`` and the manifest to
    ``<save_dir>/manifest.json``.

    Args:
        bundle (ReportBundle): Results of a run.
        save_dir (str): Output folder.
        formats (tuple[str]): Any of "csv" and "json".
    """
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {fmt}")
    experiment = Experiment(save_dir)
    for report in bundle.reports:
        if "csv" in formats:
            for table_name, table in report.result.tables.items():
                experiment.save_table(os.path.join(report.name, f"{table_name}.csv"), table)
        if report.result.gate is not None:
            experiment.save_gate(os.path.join(report.name, "gate.json"), report.result.gate)
    if "json" in formats:
        experiment.save_json("manifest.json", bundle.manifest())
    logging.info("Wrote the report of %d jobs to %s", len(bundle.reports), save_dir)
    return experiment
