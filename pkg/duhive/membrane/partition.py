"""Operator-entanglement partition function of a brickwork circuit.

``Z_α(m, n)`` is the folded ``m x n`` rectangle of gates with squares on the
bottom-left and top-left edges and circles on the bottom-right and top-right
edges. The Rényi-α operator entanglement across the cut at ``(x, t)`` is
``S_α = -log Z_α / (α - 1)``.
"""
from dataclasses import dataclass

import numpy as np

from duhive.core.networks import (
    RectangleSweep,
    contract_grid,
    contract_rectangle,
    rectangle,
)
from duhive.core.tensors import (
    CIRCLE,
    SQUARE,
    as_gate,
    boundary_vector,
    mirror,
)

IMAGINARY_TOL = 1e-12


@dataclass(frozen=True)
class CutCoordinates:
    """Light-cone extents of the cut at offset `x` after `t` layers."""

    x: int
    t: int

    def __post_init__(self):
        if self.t < 0 or abs(self.x) > self.t:
            raise ValueError(f"cut (x={self.x}, t={self.t}) needs |x| <= t")

    @property
    def n(self):
        return (self.t - self.x - self.x % 2) // 2

    @property
    def m(self):
        return (self.t + self.x - self.x % 2) // 2

    @property
    def v(self):
        return self.x / self.t if self.t else 0.0


def _real(value, what):
    if abs(value.imag) > IMAGINARY_TOL * max(1.0, abs(value.real)):
        raise ValueError(f"{what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def _edges(q, alpha, m, n):
    circle = boundary_vector(CIRCLE, q, alpha)
    square = boundary_vector(SQUARE, q, alpha)
    return [square] * n, [circle] * m, [square] * m, [circle] * n


def trivial_z(q, m, n, alpha=2):
    """Value of the network when one extent vanishes, ``q^{(1-α)(m+n)}``."""
    return float(q ** ((1 - alpha) * (m + n)))


def z_alpha_exact(gate, m, n, alpha=2):
    """Contracts the ``m x n`` network with a column sweep over the shorter side.

    Args:
        gate (UnitaryGate): Gate of the circuit.
        m (int): Extent along i.
        n (int): Extent along j.
        alpha (int): Replica count, at least 1.
    """
    if m < 0 or n < 0:
        raise ValueError(f"extents must be nonnegative, got m={m}, n={n}")
    gate = as_gate(gate)
    if m == 0 or n == 0:
        return trivial_z(gate.q, m, n, alpha)
    bl, br, tl, tr = _edges(gate.q, alpha, m, n)
    value = contract_rectangle(gate, m, n, alpha, bl, br, tl, tr)
    return _real(value, f"Z_{alpha}({m},{n})")


def z_alpha_column(gate, n, m_max, alpha=2):
    """``[Z_α(1, n), ..., Z_α(m_max, n)]`` from a single sweep of width n."""
    gate = as_gate(gate)
    if n < 1 or m_max < 1:
        raise ValueError(f"need n >= 1 and m_max >= 1, got n={n}, m_max={m_max}")
    circle = boundary_vector(CIRCLE, gate.q, alpha)
    square = boundary_vector(SQUARE, gate.q, alpha)
    sweep = RectangleSweep(gate, alpha, [square] * n)
    values = []
    for m in range(1, m_max + 1):
        sweep.step(circle, square)
        values.append(_real(sweep.close([circle] * n), f"Z_{alpha}({m},{n})"))
    return values


def z_alpha_dense(gate, m, n, alpha=2):
    """Brute-force contraction of the same network, used as an oracle."""
    gate = as_gate(gate)
    circle = boundary_vector(CIRCLE, gate.q, alpha)
    square = boundary_vector(SQUARE, gate.q, alpha)

    def boundary(cell, leg):
        return square if leg in ("bl", "tl") else circle

    value = contract_grid(gate, rectangle(m, n), boundary, alpha=alpha)
    return _real(value, f"dense Z_{alpha}({m},{n})")


def z2_closed_form(B1, q, m, n):
    """``B_1^{min(m,n)} / q^{m+n}``, exact for gates in the second level."""
    if not 1 - 1e-12 <= B1 <= q * q + 1e-12:
        raise ValueError(f"B1 must lie in [1, q^2], got {B1}")
    return float(B1 ** min(m, n) / q ** (m + n))


def z_lk_form(B, q, m, n, k):
    """Factorized value ``B_{k-1}^n / q^{m+n}`` valid when ``m >= (k-1) n``."""
    if m < (k - 1) * n:
        raise ValueError(f"(m={m}, n={n}) lies outside the solvable window of level {k}")
    return float(B**n / q ** (m + n))


def renyi_from_z(z, alpha):
    if alpha < 2:
        raise ValueError(f"alpha must be >= 2, got {alpha}")
    if z <= 0:
        raise ValueError(f"Z must be positive, got {z}")
    return float(-np.log(z) / (alpha - 1))


def z_mirror_consistency(gate, m, n, alpha=2):
    """``|Z(m, n; U) - Z(n, m; mirror U)|``.

    Reflection exchanges circles and squares, which is a relabelling of the two
    bra replicas only at α = 2.
    """
    if alpha != 2:
        raise ValueError(f"the reflection identity needs alpha=2, got {alpha}")
    gate = as_gate(gate)
    return abs(z_alpha_exact(gate, m, n, alpha) - z_alpha_exact(mirror(gate), n, m, alpha))
