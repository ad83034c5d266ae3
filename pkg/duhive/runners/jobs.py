"""Registrable jobs run from a config.

A job builds its gate from a ``{name, kwargs}`` gate config, runs one analysis and
returns a :py:class:`~duhive.runners.report.JobResult` of tables and claims.
Claims come from two places: identities every gate of the relevant class must
satisfy, and the optional `expect` mapping of the job config.
"""
import abc
import logging

import numpy as np
import pandas as pd

from duhive.analysis.entangling import ep_gt, purity_B, purity_B1
from duhive.analysis.hierarchy import classify_hierarchy, verify_Lk
from duhive.core.tensors import UNITARITY_TOL, schmidt_decompose
from duhive.gates import build_gate, gate_from_spec, gate_to_spec
from duhive.gates.permutations import permutation_search_L2
from duhive.membrane.influence import im_area_law_check
from duhive.membrane.partition import (
    CutCoordinates,
    z2_closed_form,
    z_alpha_column,
    z_alpha_exact,
)
from duhive.membrane.tension import elt_scan, ve_bounds, ve_from_rank
from duhive.opdyn.lctm import jordan_profile, lctm_build
from duhive.opdyn.otoc import otoc_dense, otoc_profile
from duhive.opdyn.staircase import leading_space_check, staircase_overlaps
from duhive.opdyn.tripartite import tripartite_info
from duhive.quench.correlators import SUPPORT_FLOOR, correlator_map
from duhive.quench.growth import entanglement_growth
from duhive.runners.report import (
    JobResult,
    bound_claim,
    close_claim,
    equal_claim,
    residual_claim,
)
from duhive.utils.registry import ConfigError, Registrable, registry

RELATION_TOL = 1e-10
DENSE_OTOC_DIM = 4096
FRONT_FLOOR = 0.01


def with_seed(config, seed):
    """Copy of a gate config with its ``seed`` kwarg replaced.

    Nested gate configs that already carry a seed get the same one, so a dressed
    gate and the gate it dresses move together.
    """
    if seed is None or config is None:
        return config
    kwargs = dict(config.get("kwargs") or {})
    for key, value in kwargs.items():
        if isinstance(value, dict) and "name" in value and "seed" in (value.get("kwargs") or {}):
            kwargs[key] = with_seed(value, seed)
    kwargs["seed"] = seed
    return dict(config, kwargs=kwargs)


class Job(Registrable, abc.ABC):
    """Base class of all jobs.

    Args:
        name (str): Name of the job in the report, defaults to its kind.
        gate (dict): Gate config ``{name, kwargs}``. Jobs that do not need a gate
            ignore it.
        expect (dict): Expected values checked as claims.
        tol (float): Residual threshold of exact claims.
        seeds (list[int]): Runs the job once per seed, overriding the ``seed``
            kwarg of the gate config. Each claim is then reported as the number
            of gates that passed it.
        min_pass (int): Gates of an ensemble that must pass each claim, defaults
            to all of them.
    """

    kind = None
    needs_gate = True

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
    ):
        self.name = name or self.kind
        self._gate_config = gate
        self._expect = dict(expect or {})
        self._tol = tol
        self._seeds = None if seeds is None else [int(seed) for seed in seeds]
        if self._seeds is not None and not self._seeds:
            raise ValueError("seeds must not be empty")
        self._min_pass = len(self._seeds or ()) if min_pass is None else int(min_pass)
        self._active_seed = None

    @classmethod
    def type_name(cls):
        """
        Returns:
            "job"
        """
        return "job"

    @property
    def seeds(self):
        return None if self._seeds is None else list(self._seeds)

    def build_gate(self, prefix, seed=None):
        if self._gate_config is None:
            raise ConfigError(f"{prefix}.gate", f"job kind '{self.kind}' needs a gate")
        return build_gate(with_seed(self._gate_config, seed), f"{prefix}.gate")

    def run(self, logger, prefix):
        """Runs the job and appends the recipe round-trip claim.

        With `seeds`, the job runs on one gate per seed. Tables gain a ``seed``
        column and each claim becomes ``<claim>_passes``, the number of gates
        that passed it, bounded below by `min_pass`.

        Args:
            logger (Logger): Receives one metrics dict per grid point or claim.
            prefix (str): Dotted config path of the job, e.g. ``jobs.0``.
        """
        if self._seeds is None:
            gate = self.build_gate(prefix) if self.needs_gate else None
            result = self._run_gate(gate, logger)
        elif not self.needs_gate:
            raise ConfigError(f"{prefix}.seeds", f"job kind '{self.kind}' has no gate to seed")
        else:
            result = self._run_ensemble(logger, prefix)
        for claim in result.claims:
            logger.update_step(self.name)
            logger.log_metrics(
                {"claim": claim.name, "residual": claim.residual, "passed": int(claim.passed)},
                self.name,
            )
        return result

    def _run_gate(self, gate, logger):
        result = self.execute(gate, logger)
        if gate is not None:
            result.gate = gate
            rebuilt = gate_from_spec(gate_to_spec(gate))
            result.claims.append(
                equal_claim(
                    "recipe_roundtrip", bool(np.array_equal(rebuilt.matrix, gate.matrix)), True
                )
            )
        return result

    def _run_ensemble(self, logger, prefix):
        members = {}
        for seed in self._seeds:
            gate = self.build_gate(prefix, seed)
            self._active_seed = seed
            members[seed] = self._run_gate(gate, logger)
            failed = [claim.name for claim in members[seed].claims if not claim.passed]
            logging.info("%s seed %d failed claims: %s", self.name, seed, failed or "none")
        self._active_seed = None
        names = list(
            dict.fromkeys(claim.name for result in members.values() for claim in result.claims)
        )
        counts = {}
        for claim_name in names:
            counts[claim_name] = sum(
                any(claim.name == claim_name for claim in result.claims)
                and all(claim.passed for claim in result.claims if claim.name == claim_name)
                for result in members.values()
            )
        claims = [
            bound_claim(f"{claim_name}_passes", count, self._min_pass, upper=False)
            for claim_name, count in counts.items()
        ]
        gates_passed = sum(all(claim.passed for claim in result.claims) for result in members.values())
        claims.append(bound_claim("gates_passed", gates_passed, self._min_pass, upper=False))
        table_names = list(dict.fromkeys(key for result in members.values() for key in result.tables))
        tables = {
            key: pd.concat(
                [
                    result.tables[key].assign(seed=seed)
                    for seed, result in members.items()
                    if key in result.tables
                ],
                ignore_index=True,
            )
            for key in table_names
        }
        artifacts = {
            "seeds": list(self._seeds),
            "min_pass": self._min_pass,
            "pass_counts": counts,
            "gates_passed": gates_passed,
            "members": {
                seed: {
                    "gate": gate_to_spec(result.gate),
                    "passed": [claim.name for claim in result.claims if claim.passed],
                    "failed": [claim.name for claim in result.claims if not claim.passed],
                    "claims": [claim.to_dict() for claim in result.claims],
                    "artifacts": result.artifacts,
                }
                for seed, result in members.items()
            },
        }
        return JobResult(tables=tables, claims=claims, artifacts=artifacts)

    @abc.abstractmethod
    def execute(self, gate, logger):
        """Computes the tables and claims of the job."""

    def expected(self, key, default=None):
        return self._expect.get(key, default)


class VerifyJob(Job):
    """Hierarchy classification of a gate.

    `expect` keys: dual_unitary, t_dual, level_left, level_right, level (both
    directions).
    """

    kind = "verify"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        k_max=4,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._k_max = k_max

    def execute(self, gate, logger):
        report = classify_hierarchy(gate, self._k_max, self._tol)
        rows = []
        for key, residual in report.residuals.items():
            direction, k = key.split("_k")
            rows.append(
                {
                    "direction": direction,
                    "k": int(k),
                    "residual": residual,
                    "passed": residual <= self._tol,
                }
            )
        rows.append(
            {"direction": "dual_unitary", "k": 1, "residual": report.dual_unitary.residual,
             "passed": report.dual_unitary.passed}
        )
        rows.append(
            {"direction": "t_dual", "k": 0, "residual": report.t_dual.residual,
             "passed": report.t_dual.passed}
        )
        claims = [equal_claim("monotone", report.monotone, True)]
        measured = {
            "dual_unitary": report.dual_unitary.passed,
            "t_dual": report.t_dual.passed,
            "level_left": report.level_left,
            "level_right": report.level_right,
        }
        for key, value in measured.items():
            if key in self._expect:
                claims.append(equal_claim(key, value, self._expect[key]))
        if "level" in self._expect:
            for key in ("level_left", "level_right"):
                claims.append(equal_claim(key, measured[key], self._expect["level"]))
        logging.info("Hierarchy of %r: %s", gate, measured)
        return JobResult(
            tables={"residuals": pd.DataFrame(rows)},
            claims=claims,
            artifacts={"hierarchy": report.to_dict()},
        )


class SchmidtJob(Job):
    """Schmidt spectrum, staircase purities, entangling power and typicality.

    `expect` keys: EP, GT, b1, schmidt_rank, v_E.
    """

    kind = "schmidt"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        ell_max=1,
        direction="right",
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._ell_max = ell_max
        self._direction = direction

    def execute(self, gate, logger):
        q = gate.q
        schmidt = schmidt_decompose(gate)
        measures = ep_gt(gate, self._ell_max, self._direction)
        report = classify_hierarchy(gate, 2, self._tol)
        second_level = report.level_left == 2 and report.level_right == 2
        claims = []
        if report.dual_unitary:
            claims.append(
                close_claim("du_relation", measures.GT, 1 - measures.EP / 2, RELATION_TOL)
            )
        if report.t_dual:
            claims.append(close_claim("t_dual_relation", measures.GT, measures.EP / 2, RELATION_TOL))
        if second_level:
            rank = schmidt.rank
            claims.append(equal_claim("flat_spectrum", schmidt.is_flat(), True))
            claims.append(equal_claim("rank_divides", (q * q) % rank == 0, True))
            claims.append(
                close_claim(
                    "l2_relation",
                    measures.GT + measures.EP / 2,
                    (1 - 1 / rank) / (1 - 1 / q**2),
                    RELATION_TOL,
                )
            )
        v_E = ve_from_rank(q, schmidt.rank) if second_level else None
        measured = {
            "EP": measures.EP,
            "GT": measures.GT,
            "b1": measures.b1,
            "schmidt_rank": measures.schmidt_rank,
            "v_E": v_E,
        }
        for key, value in measured.items():
            if key not in self._expect:
                continue
            if key == "schmidt_rank":
                claims.append(equal_claim(key, value, self._expect[key]))
            elif value is None:
                claims.append(equal_claim(key, None, self._expect[key]))
            else:
                claims.append(close_claim(key, value, self._expect[key], RELATION_TOL))
        spectrum = pd.DataFrame(
            {"index": np.arange(len(schmidt.values)), "value": schmidt.values}
        )
        row = dict(measured)
        row.update({f"B{ell}": value for ell, value in enumerate(measures.B, start=1)})
        return JobResult(
            tables={"spectrum": spectrum, "measures": pd.DataFrame([row])},
            claims=claims,
            artifacts={"measures": measures.to_dict(), "second_level": second_level},
        )


class MembraneJob(Job):
    """Entanglement line tension from the exact partition function.

    Gates of the second level are checked against the closed form
    ``B_1^{min(m,n)} / q^{m+n}`` at α = 2 on every scanned cut and, with
    `extents`, on the whole grid ``1 <= n <= n_max``, ``n <= m <= m_max``.

    `expect` keys:
        elt (list): values aligned with `velocities`, checked at the largest t.
        violation (dict): ``{m, n, threshold}``; the relative deviation of
            ``Z_2(m, n)`` from the closed form must exceed `threshold`. The
            extents default to ``(2, 2)``.
        spectrum_kept (bool): Schmidt values equal those of `reference` to 1e-9.
    """

    kind = "membrane"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        velocities: list = (0.0, 0.5, 1.0),
        t_values: list = (8,),
        alpha=2,
        extents: list = None,
        reference: dict = None,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._velocities = [float(v) for v in velocities]
        self._t_values = [int(t) for t in t_values]
        self._alpha = alpha
        self._extents = None if extents is None else (int(extents[0]), int(extents[1]))
        self._reference = reference

    def execute(self, gate, logger):
        tables = {}
        artifacts = {}
        claims = []
        grid = None
        if self._velocities and self._t_values:
            scan = elt_scan(gate, self._velocities, self._t_values, self._alpha, logger, self.name)
            grid = scan.grid
            tables["scan"] = grid[["x", "t", "m", "n", "Z", "S", "ELT"]]
            artifacts.update({"v_E": scan.v_E, "s_eq": scan.s_eq})
        if "elt" in self._expect and grid is not None:
            last = grid[grid.t == max(self._t_values)]
            for v, value, expected in zip(self._velocities, last.ELT, self._expect["elt"]):
                claims.append(close_claim(f"elt_v{v:g}", value, expected, self._tol))
        if self._extents is not None:
            m_max, n_max = self._extents
            rows = []
            for n in range(1, min(n_max, m_max) + 1):
                column = z_alpha_column(gate, n, m_max, self._alpha)
                rows += [{"m": m, "n": n, "Z": column[m - 1]} for m in range(n, m_max + 1)]
            tables["grid"] = pd.DataFrame(rows)
        B1 = purity_B1(gate)
        if (
            self._alpha == 2
            and verify_Lk(gate, 2, "left", self._tol)
            and verify_Lk(gate, 2, "right", self._tol)
        ):
            residual = 0.0
            for table in tables.values():
                for row in table.itertuples():
                    predicted = z2_closed_form(B1, gate.q, row.m, row.n)
                    residual = max(residual, abs(row.Z - predicted) / predicted)
            claims.append(residual_claim("closed_form", residual, RELATION_TOL))
        violation = self.expected("violation")
        if violation is not None:
            m, n = int(violation.get("m", 2)), int(violation.get("n", 2))
            predicted = z2_closed_form(B1, gate.q, m, n)
            deviation = abs(z_alpha_exact(gate, m, n, 2) - predicted) / predicted
            artifacts["violation"] = deviation
            claims.append(bound_claim("violation", deviation, float(violation["threshold"]), upper=False))
        if self.expected("spectrum_kept"):
            if self._reference is None:
                raise ConfigError(f"{self.name}.reference", "spectrum_kept needs a reference gate")
            reference = build_gate(with_seed(self._reference, self._active_seed), f"{self.name}.reference")
            values = schmidt_decompose(gate).values
            expected = schmidt_decompose(reference).values
            claims.append(close_claim("spectrum_kept", values, expected, 1e-9))
        return JobResult(tables=tables, claims=claims, artifacts=artifacts)


class OtocJob(Job):
    """OTOC profile with a dense cross-check at small t.

    `expect` keys:
        relaxed_from ({slope, offset}): ``|C - 1| <= tol`` for ``x >= slope t + offset``.
        below_front (bool): with `relaxed_from`, ``|C - 1| > 0.01`` for some x
            below the front at every t >= 1.
        light_ray (bool): ``|C(t, t) - 1| > 0.01`` for every t >= 1.
    """

    kind = "otoc"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        sigma_a=0,
        sigma_b=0,
        x_max=10,
        t_max=10,
        dense_t_max=3,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._sigma_a = sigma_a
        self._sigma_b = sigma_b
        self._x_max = x_max
        self._t_max = t_max
        self._dense_t_max = dense_t_max

    def execute(self, gate, logger):
        profile = otoc_profile(
            gate, self._sigma_a, self._sigma_b, self._x_max, self._t_max, logger, self.name
        )
        table = profile.table.rename(columns={"C": "C_real"})
        claims = []
        outside = table[table.x.abs() > table.t]
        if not outside.empty:
            claims.append(
                residual_claim("causality", float((outside.C_real - 1).abs().max()), 1e-12)
            )
        if self._dense_t_max:
            residual = 0.0
            for t in range(1, min(self._dense_t_max, self._t_max) + 1):
                if gate.q ** (2 * t + 2) > DENSE_OTOC_DIM:
                    break
                for x in range(-t, t + 1):
                    dense = otoc_dense(gate, profile.sigma_a, profile.sigma_b, x, t)
                    row = table[(table.x == x) & (table.t == t)]
                    if row.empty:
                        continue
                    value = complex(row.C_real.iloc[0], row.C_imag.iloc[0])
                    residual = max(residual, abs(value - dense))
            claims.append(residual_claim("dense_agreement", residual, self._tol))
        relaxed = self.expected("relaxed_from")
        if relaxed is not None:
            front = table[table.x >= relaxed["slope"] * table.t + relaxed["offset"] - 1e-12]
            residual = 0.0
            if not front.empty:
                residual = float(np.hypot(front.C_real - 1, front.C_imag).max())
            claims.append(residual_claim("relaxed_from", residual, self._tol))
            if self.expected("below_front"):
                weight = np.hypot(table.C_real - 1, table.C_imag)
                below = (table.x < relaxed["slope"] * table.t + relaxed["offset"] - 1e-12) & (table.t >= 1)
                peaks = weight[below].groupby(table.t[below]).max()
                peaks = peaks.reindex(range(1, self._t_max + 1), fill_value=0.0)
                claims.append(bound_claim("below_front", float(peaks.min()), FRONT_FLOOR, upper=False))
        if self.expected("light_ray"):
            ray = table[(table.x == table.t) & (table.t >= 1)]
            weight = float(np.hypot(ray.C_real - 1, ray.C_imag).min())
            claims.append(bound_claim("light_ray", weight, FRONT_FLOOR, upper=False))
        return JobResult(tables={"otoc": table[["x", "t", "C_real", "C_imag"]]}, claims=claims)


class TripartiteJob(Job):
    """Rényi-2 tripartite information at a list of ``(x, t)`` points.

    Gates of the second level have ``q^{m+n} Z_2 = B_1^n`` for ``x >= 0``, with
    n the light-cone extent of the cut, and ``Z~_2 >= q^{-2n}``, so I3 lies above
    ``n log b_1`` and approaches it once the circuit scrambles. At ``x = 0`` that
    is ``(t / 2) log b_1`` in layers.

    `expect` keys:
        zero (bool): ``|I3| <= tol`` everywhere.
        asymptote (float): tolerance of ``|I3 - n log b_1|`` at the last point.
        bounded_below (bool): ``I3 >= n log b_1`` at every point with ``x >= 0``.
        decreasing (bool): I3 strictly decreases along the points.
    """

    kind = "tripartite"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        points: list = ((0, 4), (0, 6), (0, 8)),
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._points = [(int(x), int(t)) for x, t in points]

    def execute(self, gate, logger):
        rows = []
        for x, t in self._points:
            info = tripartite_info(gate, x, t)
            rows.append(
                {
                    "x": x,
                    "t": t,
                    "n": CutCoordinates(x, t).n,
                    "Z2": info.z2,
                    "Z2_tilde": info.z2_tilde,
                    "I3": info.value,
                }
            )
            logger.update_step(self.name)
            logger.log_metrics(rows[-1], self.name)
        table = pd.DataFrame(rows)
        b1 = purity_B1(gate) / gate.q**2
        table["asymptote"] = table.n * np.log(b1) if b1 > 0 else -np.inf
        table["gap"] = table.I3 - table.asymptote
        claims = []
        if self.expected("zero"):
            claims.append(residual_claim("zero", float(table.I3.abs().max()), self._tol))
        if "asymptote" in self._expect:
            last = table.iloc[-1]
            claims.append(
                close_claim("asymptote", float(last.I3), float(last.asymptote), self._expect["asymptote"])
            )
        if self.expected("bounded_below"):
            gaps = table.gap[table.x >= 0]
            claims.append(bound_claim("bounded_below", float(gaps.min()), 0.0, RELATION_TOL, upper=False))
        if self.expected("decreasing"):
            steps = np.diff(table.I3.to_numpy())
            claims.append(bound_claim("decreasing", float(steps.max(initial=-np.inf)), 0.0))
        return JobResult(tables={"tripartite": table}, claims=claims, artifacts={"b1": b1})


class QuenchJob(Job):
    """Half-chain entanglement growth normalized by a dual-unitary reference.

    `expect` keys:
        v_E (float) with v_E_tol (float): reference-normalized growth rate.
        v_E_max (float): upper bound on the normalized rate, with v_E_tol slack.
        max_entropy_bits (float): bound on S over the whole run.
    """

    kind = "quench"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        N=12,
        layers=12,
        seed=0,
        alpha=2,
        reference: dict = None,
        translation_invariant=True,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._N = N
        self._layers = layers
        self._seed = seed
        self._alpha = alpha
        self._reference = reference
        self._translation_invariant = translation_invariant

    def execute(self, gate, logger):
        reference = self._reference or {
            "name": "random_dual_unitary",
            "kwargs": {"q": gate.q, "seed": self._seed},
        }
        reference = build_gate(reference, f"{self.name}.reference")
        series = entanglement_growth(
            gate,
            self._N,
            self._layers,
            self._seed,
            self._alpha,
            reference,
            self._translation_invariant,
            logger,
            self.name,
        )
        table = pd.DataFrame({"t": series.times, "S": series.entropies})
        claims = [
            bound_claim("entropy_bound", max(series.entropies), series.saturation, 1e-10)
        ]
        tolerance = self.expected("v_E_tol", 0.05)
        if "v_E" in self._expect:
            claims.append(close_claim("v_E", series.v_E, self._expect["v_E"], tolerance))
        if "v_E_max" in self._expect:
            claims.append(bound_claim("v_E_max", series.v_E, self._expect["v_E_max"], tolerance))
        if "max_entropy_bits" in self._expect:
            bits = max(series.entropies) / np.log(2)
            claims.append(bound_claim("max_entropy_bits", bits, self._expect["max_entropy_bits"]))
        return JobResult(
            tables={"growth": table},
            claims=claims,
            artifacts={
                "slope": series.slope,
                "reference_slope": series.reference_slope,
                "v_E": series.v_E,
                "window": list(series.window),
                "oscillation": series.oscillation(),
                "N": self._N,
                "layers": self._layers,
                "seed": self._seed,
                "boundary": "periodic",
            },
        )


class CorrelatorJob(Job):
    """Infinite-temperature two-point functions and their ray support.

    `expect` keys:
        vanishes (list[[v_min, v_max]]): ``|D| <= tol`` for ``v_min < |v| < v_max``.
        supported (list[str]): ray classes ("zero", "edge") whose largest
            magnitude exceeds 1e-4.
        vanishing_rays (list[str]): ray classes that must vanish.
    """

    kind = "correlator"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        op_a=0,
        op_b=0,
        t_max=8,
        support_width=1,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._op_a = op_a
        self._op_b = op_b
        self._t_max = t_max
        self._support_width = support_width

    def execute(self, gate, logger):
        op_a, op_b = self._op_a, self._op_b
        if self._support_width > 1:
            op_a = np.asarray(op_a, dtype=np.complex128)
            op_b = np.asarray(op_b, dtype=np.complex128)
        cmap = correlator_map(
            gate, op_a, op_b, self._t_max, self._support_width, tol=self._tol,
            logger=logger, prefix=self.name,
        )
        claims = []
        for v_min, v_max in self.expected("vanishes", []):
            claims.append(
                residual_claim(f"vanishes_{v_min:g}_{v_max:g}", cmap.max_abs(v_min, v_max), self._tol)
            )
        rays = cmap.rays()
        for ray in self.expected("supported", []):
            peak = rays.get(ray, {}).get("max_abs", 0.0)
            claims.append(bound_claim(f"supported_{ray}", peak, SUPPORT_FLOOR, upper=False))
        for ray in self.expected("vanishing_rays", []):
            claims.append(
                residual_claim(f"vanishing_{ray}", rays.get(ray, {}).get("max_abs", 0.0), self._tol)
            )
        return JobResult(tables={"correlator": cmap.table}, claims=claims, artifacts={"rays": rays})


class SearchJob(Job):
    """Permutation gates of the second level.

    `expect` keys: ranks (list of allowed entangling ranks).
    """

    kind = "search"
    needs_gate = False

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        q=2,
        mode="exhaustive",
        samples=10**5,
        seed=0,
        chunk_size=4096,
        workers=1,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._q = q
        self._mode = mode
        self._samples = samples
        self._seed = seed
        self._chunk_size = chunk_size
        self._workers = workers

    def execute(self, gate, logger):
        result = permutation_search_L2(
            self._q, self._mode, self._samples, self._seed, self._chunk_size,
            self._workers, self._tol,
        )
        members = pd.DataFrame(
            [
                {"permutation": " ".join(map(str, perm)), "rank": rank, "category": kind}
                for perm, rank, kind in result.members
            ],
            columns=["permutation", "rank", "category"],
        )
        histogram = pd.DataFrame(
            sorted(result.histogram.items()), columns=["rank", "count"]
        )
        claims = [equal_claim("all_ranks_divide", result.all_ranks_divide, True)]
        if "ranks" in self._expect:
            found = sorted(result.histogram)
            allowed = set(self._expect["ranks"])
            claims.append(equal_claim("ranks", all(r in allowed for r in found), True))
        return JobResult(
            tables={"members": members, "histogram": histogram},
            claims=claims,
            artifacts={"examined": result.examined, "flat": result.flat, "mode": result.mode},
        )


class BoundsJob(Job):
    """Entanglement-velocity bounds from the hierarchy levels of both directions.

    Levels and purities come from the gate when one is given, otherwise from the
    arguments. `expect` keys: lower, upper.
    """

    kind = "bounds"
    needs_gate = False

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        q=2,
        k_left=None,
        k_right=None,
        B_left=None,
        B_right=None,
        k_max=4,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self.needs_gate = gate is not None
        self._q = q
        self._levels = {"left": k_left, "right": k_right}
        self._purities = {"left": B_left, "right": B_right}
        self._k_max = k_max

    def execute(self, gate, logger):
        q = self._q
        levels = dict(self._levels)
        purities = dict(self._purities)
        if gate is not None:
            q = gate.q
            report = classify_hierarchy(gate, self._k_max, self._tol)
            levels = {"left": report.level_left, "right": report.level_right}
            purities = {
                side: None if k is None else purity_B(gate, k - 1, side)
                for side, k in levels.items()
            }
        bounds = ve_bounds(
            q, levels["left"], levels["right"], purities["left"], purities["right"]
        )
        claims = [
            close_claim(key, getattr(bounds, key), self._expect[key], self._tol)
            for key in ("lower", "upper")
            if key in self._expect
        ]
        return JobResult(
            tables={"bounds": pd.DataFrame([bounds.to_dict()])},
            claims=claims,
            artifacts={"bounds": bounds.to_dict()},
        )


class OverlapsJob(Job):
    """Staircase fixed points of the LCTM and their overlap matrix.

    Gates of level k in both directions must pass the fixed-point and Hankel
    checks, and their measured Gram matrix must have full rank exactly when
    b < 1. The leading-eigenspace dimension is reported next to n + 1.
    """

    kind = "overlaps"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        n_values: list = (1, 2),
        k=2,
        spectrum_n_max=2,
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._n_values = [int(n) for n in n_values]
        self._k = k
        self._spectrum_n_max = spectrum_n_max

    def execute(self, gate, logger):
        k = self._k
        member = verify_Lk(gate, k, "left", self._tol) and verify_Lk(gate, k, "right", self._tol)
        gram_rows = []
        spectrum_rows = []
        claims = []
        overlaps = {}
        for n in self._n_values:
            result = staircase_overlaps(gate, n, k)
            overlaps[n] = {
                "measured": [[complex(v) for v in row] for row in result.gram],
                "predicted": result.predicted.tolist(),
                "b": result.b,
                "residual": result.residual,
                "rank": result.rank,
            }
            for i in range(n + 1):
                for j in range(n + 1):
                    gram_rows.append(
                        {
                            "n": n,
                            "i": i,
                            "j": j,
                            "gram_real": result.gram[i, j].real,
                            "gram_imag": result.gram[i, j].imag,
                            "predicted": result.predicted[i, j],
                        }
                    )
            if member:
                claims.append(residual_claim(f"gram_n{n}", result.residual, self._tol))
                claims.append(residual_claim(f"hankel_n{n}", result.hankel_residual * gate.q**-n, 1e-12))
                claims.append(equal_claim(f"rank_n{n}", result.full_rank, bool(result.b < 1 - self._tol)))
            if n <= self._spectrum_n_max:
                leading, (right, left) = leading_space_check(gate, n, k)
                moduli = np.abs(lctm_build(gate, n).eigenvalues())[:6]
                for index, modulus in enumerate(moduli):
                    spectrum_rows.append(
                        {"n": n, "index": index, "modulus": modulus, "leading": leading}
                    )
                claims.append(bound_claim(f"spectral_radius_n{n}", float(moduli[0]), 1.0, 1e-9))
                if member:
                    claims.append(residual_claim(f"fixed_points_n{n}", max(right, left), self._tol))
                if leading != n + 1:
                    logging.warning(
                        "Leading eigenspace of T_%d has dimension %d, staircases give %d",
                        n, leading, n + 1,
                    )
        return JobResult(
            tables={"gram": pd.DataFrame(gram_rows), "spectrum": pd.DataFrame(spectrum_rows)},
            claims=claims,
            artifacts={"overlaps": overlaps, "member": bool(member)},
        )


class JordanJob(Job):
    """Largest Jordan block of the non-leading LCTM part per width.

    `expect` keys: sizes ("n+1", "2n" or a mapping n to m).
    """

    kind = "jordan"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        n_max=2,
        direction="right",
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._n_max = n_max
        self._direction = direction

    def execute(self, gate, logger):
        profile = jordan_profile(gate, self._n_max, self._direction, logger=logger, prefix=self.name)
        table = pd.DataFrame(
            [
                {
                    "n": n,
                    "m": profile.sizes[n],
                    "stable": profile.stable[n],
                    "leading": profile.leading[n],
                    "ranks": " ".join(map(str, profile.rank_sequences[n])),
                }
                for n in sorted(profile.sizes)
            ]
        )
        claims = [equal_claim(f"stable_n{n}", profile.stable[n], True) for n in sorted(profile.sizes)]
        sizes = self.expected("sizes")
        if sizes is not None:
            for n in sorted(profile.sizes):
                if sizes == "n+1":
                    expected = n + 1
                elif sizes == "2n":
                    expected = 2 * n
                else:
                    expected = sizes.get(n, sizes.get(str(n)))
                if expected is not None:
                    claims.append(equal_claim(f"size_n{n}", profile.sizes[n], int(expected)))
        return JobResult(tables={"jordan": table}, claims=claims)


class InfluenceJob(Job):
    """Temporal-cut ranks of the influence matrix at v = 0.

    `expect` keys: max_rank (int), t_independent (bool), growing (bool).
    """

    kind = "influence"

    def __init__(
        self,
        name=None,
        gate: dict = None,
        expect: dict = None,
        tol=UNITARITY_TOL,
        seeds: list = None,
        min_pass=None,
        t_values: list = (4, 5, 6),
    ):
        super().__init__(name, gate, expect, tol, seeds, min_pass)
        self._t_values = [int(t) for t in t_values]

    def execute(self, gate, logger):
        rows = []
        maxima = []
        for t in self._t_values:
            ranks = im_area_law_check(gate, t)
            maxima.append(max(ranks))
            rows += [{"t": t, "cut": cut, "rank": rank} for cut, rank in enumerate(ranks, start=1)]
            logger.update_step(self.name)
            logger.log_metrics({"t": t, "max_rank": max(ranks)}, self.name)
        claims = []
        if "max_rank" in self._expect:
            claims.append(bound_claim("max_rank", max(maxima), self._expect["max_rank"]))
        if self.expected("t_independent"):
            claims.append(equal_claim("t_independent", len(set(maxima)) == 1, True))
        if self.expected("growing"):
            claims.append(
                equal_claim("growing", all(b > a for a, b in zip(maxima, maxima[1:])), True)
            )
        return JobResult(
            tables={"ranks": pd.DataFrame(rows)},
            claims=claims,
            artifacts={"max_ranks": maxima},
        )


JOB_KINDS = {
    job.kind: job
    for job in (
        VerifyJob,
        SchmidtJob,
        MembraneJob,
        OtocJob,
        TripartiteJob,
        QuenchJob,
        CorrelatorJob,
        SearchJob,
        BoundsJob,
        OverlapsJob,
        JordanJob,
        InfluenceJob,
    )
}

registry.register_all(Job, JOB_KINDS)

get_job = getattr(registry, f"get_{Job.type_name()}")
