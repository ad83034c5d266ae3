"""Algebraic solvability conditions of two-site gates.

The hierarchy condition of level k in the left light-cone direction compares two
contractions of a diagonal of k folded gates ``(1, 1) ... (1, k)``. Every right
output of the diagonal and the right input of its first gate are closed with
circles. The level holds when the open legs of the diagonal (all left inputs and
the last left output) do not depend on the first left input beyond its trace,
i.e. when the first gate can be replaced by a circle on its left input. The right
direction is the left direction of the mirrored gate.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from duhive.core.networks import cached_network
from duhive.core.tensors import (
    CIRCLE,
    UNITARITY_TOL,
    as_gate,
    boundary_vector,
    mirror,
    partial_transpose,
    reshuffle,
    unitarity_residual,
)

DIRECTIONS = ("left", "right")
DEFAULT_K_MAX = 4


@dataclass(frozen=True)
class Check:
    """Outcome of a numerical identity check."""

    passed: bool
    residual: float

    def __bool__(self):
        return self.passed


def verify_unitary(gate, tol=UNITARITY_TOL):
    residual = unitarity_residual(np.asarray(getattr(gate, "matrix", gate)))
    return Check(residual <= tol, residual)


def verify_dual_unitary(gate, tol=UNITARITY_TOL):
    """Unitarity of the reshuffled gate."""
    residual = unitarity_residual(reshuffle(gate))
    return Check(residual <= tol, residual)


def verify_t_dual(gate, tol=UNITARITY_TOL):
    """Unitarity of the partially transposed gate."""
    residual = unitarity_residual(partial_transpose(gate))
    return Check(residual <= tol, residual)


def _diagonal(q, first, k, alpha, kind):
    cells = [(1, j) for j in range(first, k + 1)]
    kinds = {((1, first), "br"): kind}
    kinds.update({(cell, "tr"): kind for cell in cells})
    open_legs = [(cell, "bl") for cell in cells] + [((1, k), "tl")]
    return cached_network(q, cells, kinds, default=kind, open_legs=open_legs, alpha=alpha)


def lk_sides(gate, k, direction="left", alpha=1, kind=CIRCLE):
    """Both sides of the level-k identity as arrays of shape ``(q^{2α},) * (k+1)``."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction}")
    gate = as_gate(gate)
    if direction == "right":
        gate = mirror(gate)
    lhs = _diagonal(gate.q, 1, k, alpha, kind).contract(gate)
    rest = _diagonal(gate.q, 2, k, alpha, kind).contract(gate)
    rhs = np.multiply.outer(boundary_vector(kind, gate.q, alpha).data, rest)
    return lhs, rhs


def verify_Lk(gate, k, direction="left", tol=UNITARITY_TOL, alpha=1, kind=CIRCLE):
    """Checks the level-k condition in one light-cone direction.

    The residual is ``max|LHS - RHS| / max|RHS|``.

    Args:
        gate (UnitaryGate): Gate to check.
        k (int): Level, at least 2.
        direction (str): "left" or "right".
        tol (float): Residual threshold.
        alpha (int): Replica count of the folded diagram.
        kind (str): Boundary vector used on every closed leg.
    """
    lhs, rhs = lk_sides(gate, k, direction, alpha, kind)
    residual = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
    return Check(residual <= tol, residual)


@dataclass
class HierarchyReport:
    """Verified levels of a gate.

    Attributes:
        dual_unitary (Check): Unitarity of the reshuffled gate.
        t_dual (Check): Unitarity of the partial transpose.
        level_left (int): Smallest level holding in the left direction, None if no
            level up to k_max holds.
        level_right (int): Same for the right direction.
        monotone (bool): Every level above a verified one also holds.
        residuals (dict): ``"{direction}_k{k}"`` to residual.
    """

    dual_unitary: Check
    t_dual: Check
    level_left: Optional[int]
    level_right: Optional[int]
    k_max: int
    monotone: bool = True
    residuals: Dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {
            "dual_unitary": self.dual_unitary.passed,
            "dual_unitary_residual": self.dual_unitary.residual,
            "t_dual": self.t_dual.passed,
            "t_dual_residual": self.t_dual.residual,
            "level_left": self.level_left,
            "level_right": self.level_right,
            "k_max": self.k_max,
            "monotone": self.monotone,
            "residuals": dict(self.residuals),
        }


def classify_hierarchy(gate, k_max=DEFAULT_K_MAX, tol=UNITARITY_TOL):
    """Runs every check up to level `k_max` in both directions."""
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    gate = as_gate(gate)
    residuals = {}
    levels = {}
    monotone = True
    for direction in DIRECTIONS:
        passed = []
        for k in range(2, k_max + 1):
            check = verify_Lk(gate, k, direction, tol)
            residuals[f"{direction}_k{k}"] = check.residual
            passed.append(check.passed)
        first = next((idx for idx, ok in enumerate(passed) if ok), None)
        levels[direction] = None if first is None else first + 2
        if first is not None and not all(passed[first:]):
            monotone = False
            logging.warning(
                "Level %d holds in the %s direction but a higher level fails",
                first + 2,
                direction,
            )
    return HierarchyReport(
        dual_unitary=verify_dual_unitary(gate, tol),
        t_dual=verify_t_dual(gate, tol),
        level_left=levels["left"],
        level_right=levels["right"],
        k_max=k_max,
        monotone=monotone,
        residuals=residuals,
    )
