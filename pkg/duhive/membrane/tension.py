"""Entanglement line tension and velocity bounds."""
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from duhive.core.tensors import as_gate
from duhive.membrane.partition import CutCoordinates, renyi_from_z, z_alpha_exact

SCAN_COLUMNS = ["x", "t", "m", "n", "v", "Z", "S", "ELT"]


@dataclass
class MembraneScan:
    """Exact operator entanglement on a grid of cuts.

    Attributes:
        q (int): Local dimension.
        alpha (int): Rényi index.
        s_eq (float): ``log q``.
        grid (pd.DataFrame): One row per cut with columns x, t, m, n, v, Z, S, ELT.
        v_E (float): ELT at v = 0 for the largest t scanned, None without a v = 0 cut.
    """

    q: int
    alpha: int
    s_eq: float
    grid: pd.DataFrame
    v_E: Optional[float] = None

    def elt_samples(self):
        """Mean ELT per velocity over the scanned times."""
        return self.grid.groupby("v")["ELT"].mean().to_dict()


def elt_scan(gate, velocities, t_values, alpha=2, logger=None, prefix="membrane"):
    """Evaluates ``S_α(x, t)`` and ``S_α / (s_eq t)`` for ``x = round(v t)``.

    Args:
        gate (UnitaryGate): Gate of the circuit.
        velocities (list[float]): Ray velocities in [-1, 1].
        t_values (list[int]): Numbers of layers.
        alpha (int): Rényi index, at least 2.
        logger (Logger): Optional logger receiving one metrics dict per cut.
        prefix (str): Logger prefix.
    """
    gate = as_gate(gate)
    s_eq = float(np.log(gate.q))
    rows = []
    for t in t_values:
        for v in velocities:
            if not -1 <= v <= 1:
                raise ValueError(f"velocities must lie in [-1, 1], got {v}")
            cut = CutCoordinates(int(round(v * t)), int(t))
            z = z_alpha_exact(gate, cut.m, cut.n, alpha)
            s = renyi_from_z(z, alpha)
            row = {
                "x": cut.x,
                "t": cut.t,
                "m": cut.m,
                "n": cut.n,
                "v": cut.v,
                "Z": z,
                "S": s,
                "ELT": s / (s_eq * cut.t),
            }
            rows.append(row)
            logging.debug("Cut x=%d t=%d: Z=%.6g S=%.6g", cut.x, cut.t, z, s)
            if logger is not None:
                logger.update_step(prefix)
                logger.log_metrics(row, prefix)
    grid = pd.DataFrame(rows, columns=SCAN_COLUMNS)
    centre = grid[grid["x"] == 0]
    v_E = None if centre.empty else float(centre.sort_values("t")["ELT"].iloc[-1])
    return MembraneScan(gate.q, alpha, s_eq, grid, v_E)


def ve_from_rank(q, rank):
    """``log R / log q²`` for a flat Schmidt spectrum of rank R."""
    if not 1 <= rank <= q * q:
        raise ValueError(f"rank must lie in [1, q^2], got {rank}")
    return float(np.log(rank) / np.log(q * q))


def solvable(m, n, k):
    """Whether the ``m x n`` network of a level-k circuit factorizes."""
    return m >= (k - 1) * n


def v_star(k):
    """Velocity above which a level-k circuit is exactly solvable."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return (k - 2) / k


def lk_elt(v, k, B, q):
    """Line tension ``1 - (1 - |v|) log B_{k-1} / log q²`` inside the solvable window.

    Args:
        v (float): Velocity with ``v* <= |v| <= 1``.
        k (int): Level of the hierarchy.
        B (float): Staircase purity B_{k-1}.
        q (int): Local dimension.
    """
    if not v_star(k) - 1e-12 <= abs(v) <= 1:
        raise ValueError(f"|v|={abs(v)} lies outside the solvable window of level {k}")
    _check_purity(B, q)
    return float(1 - (1 - abs(v)) * np.log(B) / np.log(q * q))


def _check_purity(B, q):
    if not 1 - 1e-9 <= B <= q * q + 1e-9:
        raise ValueError(f"B must lie in [1, q^2], got {B}")


@dataclass
class VelocityBounds:
    """Bounds on the entanglement velocity of a hierarchical circuit.

    A side set to None carries no hierarchy condition.
    """

    k_left: Optional[int]
    k_right: Optional[int]
    B_left: Optional[float]
    B_right: Optional[float]
    v_star_left: Optional[float]
    v_star_right: Optional[float]
    lower: float
    upper: float
    case: str
    symmetric: bool = field(default=False)

    def to_dict(self):
        return asdict(self)


def ve_bounds(q, k_left=None, k_right=None, B_left=None, B_right=None):
    """Lower and upper bounds on v_E from the exactly solvable rays.

    Each present side pins the line tension at its threshold velocity ``v*``.
    Convexity of the line tension together with ``E(v) >= |v|`` then bounds
    ``v_E = E(0)``.

    Args:
        q (int): Local dimension.
        k_left (int): Level in the left light-cone direction, or None.
        k_right (int): Level in the right light-cone direction, or None.
        B_left (float): B_{k-1} in the left direction.
        B_right (float): B_{k-1} in the right direction.
    """
    sides = {}
    for name, k, B in (("left", k_left, B_left), ("right", k_right, B_right)):
        if k is None:
            continue
        if B is None:
            raise ValueError(f"B_{name} is required when k_{name} is set")
        _check_purity(B, q)
        vs = v_star(k)
        sides[name] = (vs, float(lk_elt(vs, k, B, q)), float(1 - np.log(B) / np.log(q * q)))
    if not sides:
        raise ValueError("at least one light-cone direction needs a level")

    lower = max(floor for _, _, floor in sides.values())
    if len(sides) == 2:
        (vl, el, _), (vr, er, _) = sides["left"], sides["right"]
        if vl + vr == 0:
            upper = min(el, er)
        else:
            upper = (vr * el + vl * er) / (vr + vl)
        symmetric = k_left == k_right and np.isclose(B_left, B_right)
        case = "symmetric" if symmetric else "two_sided"
    else:
        ((vs, e, _),) = sides.values()
        upper = (vs + e) / (vs + 1)
        symmetric = False
        case = "one_sided"
    lower, upper = float(np.clip(lower, 0, 1)), float(np.clip(upper, 0, 1))
    if lower > upper + 1e-12:
        logging.warning("Lower bound %.6g exceeds upper bound %.6g", lower, upper)
    return VelocityBounds(
        k_left=k_left,
        k_right=k_right,
        B_left=B_left,
        B_right=B_right,
        v_star_left=sides["left"][0] if "left" in sides else None,
        v_star_right=sides["right"][0] if "right" in sides else None,
        lower=lower,
        upper=upper,
        case=case,
        symmetric=bool(symmetric),
    )
