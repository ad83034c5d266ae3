"""Infinite-temperature two-point functions on the causal region.

``D(x, t) = q^{-N} tr[A(x, t) B(0, 0)]`` with B supported on sites ``0 ... w_B - 1``
before the first layer and A on ``x ... x + w_A - 1`` after layer t. Gates
outside both the future of B and the past of A cancel by unitarity, so the
correlator is the replica-1 contraction of the remaining gates with circles on
every dangling leg that does not carry an operator.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from duhive.core.networks import GridNetwork, gate_cell, site_leg
from duhive.core.tensors import CIRCLE, as_gate, boundary_vector
from duhive.opdyn.otoc import resolve_operator

VANISHING_TOL = 1e-10
SUPPORT_FLOOR = 1e-4


def _bonds(layer, sites):
    """Bonds ``(b, b + 1)`` of `layer` touching any of `sites`."""
    bonds = set()
    for site in sites:
        for bond in (site - 1, site):
            if (layer + bond) % 2 == 1:
                bonds.add(bond)
    return bonds


def causal_cells(support_b, support_a, t):
    """Grid cells in the future of `support_b` and the past of `support_a`."""
    future = set()
    reach = set(support_b)
    for layer in range(1, t + 1):
        bonds = _bonds(layer, reach)
        future |= {(layer, bond) for bond in bonds}
        reach |= {s for bond in bonds for s in (bond, bond + 1)}
    past = set()
    reach = set(support_a)
    for layer in range(t, 0, -1):
        bonds = _bonds(layer, reach)
        past |= {(layer, bond) for bond in bonds}
        reach |= {s for bond in bonds for s in (bond, bond + 1)}
    return sorted(gate_cell(layer, bond) for layer, bond in future & past)


def folded_operator(operator, q, width, top=False):
    """Replica-1 boundary tensor of a `width`-site operator, ``q^{-w/2} O[k, b]``.

    The closing tensor at the top uses ``O[b, k]``. Returns shape ``(q²,) * width``.
    """
    operator = np.asarray(operator, dtype=np.complex128)
    if operator.shape != (q**width, q**width):
        raise ValueError(
            f"operator on {width} sites must have shape {(q**width, q**width)}, "
            f"got {operator.shape}"
        )
    if top:
        operator = operator.T
    tensor = operator.reshape((q,) * (2 * width))
    order = [axis for site in range(width) for axis in (site, width + site)]
    tensor = tensor.transpose(order) * q ** (-width / 2)
    return tensor.reshape((q * q,) * width)


def _trace_out(tensor, slots, circle):
    """Contracts the listed slots of a joint tensor with circles."""
    for slot in sorted(slots, reverse=True):
        tensor = np.tensordot(tensor, circle, axes=([slot], [0]))
    return tensor


def correlator_value(gate, op_a, op_b, x, t, width_a=1, width_b=1):
    """``D(x, t)`` for operators given as matrices on `width` adjacent sites."""
    gate = as_gate(gate)
    q = gate.q
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    support_b = list(range(width_b))
    support_a = list(range(x, x + width_a))
    tensor_b = folded_operator(op_b, q, width_b)
    tensor_a = folded_operator(op_a, q, width_a, top=True)
    circle = boundary_vector(CIRCLE, q, 1).data
    cells = causal_cells(support_b, support_a, t)
    cell_set = set(cells)
    legs_b = [site_leg(site, 1, "in") for site in support_b]
    legs_a = [site_leg(site, t, "out") for site in support_a]
    outside_b = [slot for slot, (cell, _) in enumerate(legs_b) if cell not in cell_set]
    outside_a = [slot for slot, (cell, _) in enumerate(legs_a) if cell not in cell_set]
    tensor_b = _trace_out(tensor_b, outside_b, circle)
    tensor_a = _trace_out(tensor_a, outside_a, circle)
    legs_b = [leg for slot, leg in enumerate(legs_b) if slot not in outside_b]
    legs_a = [leg for slot, leg in enumerate(legs_a) if slot not in outside_a]
    if not cells:
        return complex(np.asarray(tensor_a)) * complex(np.asarray(tensor_b))
    joint = [(legs, tensor) for legs, tensor in ((legs_b, tensor_b), (legs_a, tensor_a)) if legs]
    scalar = 1.0 + 0.0j
    for legs, tensor in ((legs_b, tensor_b), (legs_a, tensor_a)):
        if not legs:
            scalar *= complex(np.asarray(tensor))
    network = GridNetwork(q, cells, {"default": circle}, alpha=1, joint=joint)
    return scalar * network.contract(gate)


def ray_label(x, t, width=1, slack=1.0):
    """Classifies ``(x, t)`` as on the ``v = 0`` ray, on a light-cone edge, or
    interior.

    Positions are measured from the centre of the causal cone, which for one-site
    operators spans sites ``-(t - 1) ... t``.
    """
    centre = x + (width - 1) / 2 - 0.5
    if abs(centre) <= slack - 0.5:
        return "zero"
    if abs(centre) >= t - 0.5 - (slack - 1.0):
        return "edge"
    return "interior"


@dataclass
class CorrelatorMap:
    """``D(x, t)`` on a grid.

    Attributes:
        table (pd.DataFrame): Columns x, t, v, ray, D, D_imag.
        tol (float): Magnitude below which a value counts as vanishing.
    """

    table: pd.DataFrame
    tol: float = VANISHING_TOL

    def max_abs(self, v_min, v_max, side=None):
        """Largest ``|D|`` over points with ``v_min < |v| < v_max``.

        `side` restricts to positive ("right") or negative ("left") v.
        """
        table = self.table
        magnitude = np.hypot(table.D, table.D_imag)
        speed = table.v.abs()
        mask = (speed > v_min) & (speed < v_max)
        if side == "right":
            mask &= table.v > 0
        elif side == "left":
            mask &= table.v < 0
        return float(magnitude[mask].max()) if mask.any() else 0.0

    def rays(self, floor=SUPPORT_FLOOR):
        """Per ray class, the largest ``|D|`` and whether it exceeds `floor`."""
        magnitude = np.hypot(self.table.D, self.table.D_imag)
        grouped = magnitude.groupby(self.table.ray).max()
        return {
            ray: {"max_abs": float(value), "supported": bool(value > floor)}
            for ray, value in grouped.items()
        }


def correlator_map(
    gate,
    op_a,
    op_b,
    t_max,
    support_width=1,
    x_range=None,
    tol=VANISHING_TOL,
    logger=None,
    prefix="correlator",
):
    """``D(x, t)`` for ``1 <= t <= t_max`` and every x of the causal cone.

    Args:
        gate (UnitaryGate): Gate of the circuit.
        op_a (np.ndarray | int): Operator at ``(x, t)``; an int picks a one-site
            basis element.
        op_b (np.ndarray | int): Operator at ``(0, 0)``.
        t_max (int): Last layer.
        support_width (int): Number of sites both operators act on, at most 3.
        x_range (tuple[int, int]): Optional inclusive range of x; defaults to the
            causal cone.
        tol (float): Vanishing threshold of the ray classification.
    """
    gate = as_gate(gate)
    q = gate.q
    if not 1 <= support_width <= 3:
        raise ValueError(f"support_width must be 1, 2 or 3, got {support_width}")
    if support_width == 1:
        op_a = resolve_operator(q, op_a)
        op_b = resolve_operator(q, op_b)
    rows = []
    for t in range(1, t_max + 1):
        lo, hi = x_range or (-t - support_width + 1, t + support_width - 1)
        for x in range(lo, hi + 1):
            value = correlator_value(gate, op_a, op_b, x, t, support_width, support_width)
            centre = x + (support_width - 1) / 2 - 0.5
            rows.append(
                {
                    "x": x,
                    "t": t,
                    "v": centre / t,
                    "ray": ray_label(x, t, support_width),
                    "D": value.real,
                    "D_imag": value.imag,
                }
            )
            if logger is not None:
                logger.update_step(prefix)
                logger.log_metrics({"x": x, "t": t, "D": abs(value)}, prefix)
    logging.info("Correlator map up to t=%d with %d points", t_max, len(rows))
    return CorrelatorMap(pd.DataFrame(rows), tol)
