"""Tripartite information of the brickwork evolution operator.

The operator is viewed as a state on inputs and outputs. With the input split
at site 0 and the output split at x after t layers, the Rényi-2 tripartite
information is

    I3 = log(q^{m+n} Z_2(m, n)) + log Z~_2(m, n),

where Z~_2 is the light-cone rectangle with squares on the bottom-left and
top-right edges and circles on the bottom-right and top-left edges.
"""
from dataclasses import dataclass

import numpy as np

from duhive.core.networks import contract_rectangle
from duhive.core.tensors import CIRCLE, SQUARE, as_gate, boundary_vector
from duhive.membrane.partition import CutCoordinates, _real, z_alpha_exact


def z_tilde(gate, m, n):
    """``Z~_2(m, n)``; 1 when either extent vanishes."""
    gate = as_gate(gate)
    if m == 0 or n == 0:
        return 1.0
    circle = boundary_vector(CIRCLE, gate.q, 2)
    square = boundary_vector(SQUARE, gate.q, 2)
    value = contract_rectangle(
        gate, m, n, 2, [square] * n, [circle] * m, [circle] * m, [square] * n
    )
    return _real(value, f"Z~_2({m}, {n})")


@dataclass(frozen=True)
class TripartiteInfo:
    x: int
    t: int
    z2: float
    z2_tilde: float
    value: float


def tripartite_info(gate, x, t):
    """Rényi-2 tripartite information of the evolution operator at ``(x, t)``."""
    gate = as_gate(gate)
    cut = CutCoordinates(x, t)
    m, n = cut.m, cut.n
    z2 = z_alpha_exact(gate, m, n, alpha=2)
    tilde = z_tilde(gate, m, n)
    value = np.log(gate.q ** (m + n) * z2) + np.log(tilde)
    return TripartiteInfo(x, t, z2, tilde, float(value))
