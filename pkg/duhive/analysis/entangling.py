"""Operator purities, entangling power and local dressings."""
from dataclasses import asdict, dataclass
from typing import List

import numpy as np

from duhive.core.tensors import (
    UnitaryGate,
    as_gate,
    haar_unitary,
    partial_transpose,
    schmidt_decompose,
)
from duhive.membrane.partition import z_alpha_exact

DIRECTIONS = ("left", "right")
DRESS_LEGS = ("in_left", "in_right", "out_left", "out_right")


@dataclass
class EntanglingMeasures:
    """Entangling measures of a gate.

    Attributes:
        B (list[float]): Staircase purities B_1 ... B_lmax.
        b1 (float): B_1 / q².
        EP (float): Entangling power, in [0, 1].
        GT (float): Gate typicality, in [0, 1].
        schmidt_rank (int): Operator Schmidt rank.
    """

    B: List[float]
    b1: float
    EP: float
    GT: float
    schmidt_rank: int

    def to_dict(self):
        return asdict(self)


def purity_B1(gate):
    """``B_1 = Σ λ_i⁴ / q²`` from the Schmidt values."""
    gate = as_gate(gate)
    values = schmidt_decompose(gate).values
    return float(np.sum(values**4) / gate.q**2)


def purity_B(gate, ell, direction="right"):
    """Operator purity of a diagonal composition of `ell` gates.

    ``B_ell = q^{ell+1} Z_2``, with the Z_2 network of extent ``ell x 1`` for the
    right direction and ``1 x ell`` for the left one.

    Args:
        gate (UnitaryGate): The gate.
        ell (int): Staircase length, at least 1.
        direction (str): "left" or "right".
    """
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction}")
    gate = as_gate(gate)
    m, n = (ell, 1) if direction == "right" else (1, ell)
    return gate.q ** (ell + 1) * z_alpha_exact(gate, m, n, alpha=2)


def ep_gt(gate, ell_max=1, direction="right"):
    """Entangling power and gate typicality from the fourth moments of the Schmidt
    values of U and of its partial transpose.

    Args:
        gate (UnitaryGate): The gate.
        ell_max (int): Number of staircase purities to attach.
        direction (str): Direction of the staircases.
    """
    gate = as_gate(gate)
    q2 = gate.q**2
    schmidt = schmidt_decompose(gate)
    lam4 = float(np.sum(schmidt.values**4))
    gam4 = float(np.sum(np.linalg.svd(partial_transpose(gate), compute_uv=False) ** 4))
    ep = q2 / (q2 - 1) * ((1 + 1 / q2) - (lam4 + gam4) / q2**2)
    gt = q2 / (2 * (q2 - 1)) * ((1 - 1 / q2) - (lam4 - gam4) / q2**2)
    B = [lam4 / q2] + [purity_B(gate, ell, direction) for ell in range(2, ell_max + 1)]
    return EntanglingMeasures(
        B=B, b1=lam4 / q2**2, EP=float(ep), GT=float(gt), schmidt_rank=schmidt.rank
    )


def _one_site(u, q, name):
    if u is None:
        return np.eye(q)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (q, q):
        raise ValueError(f"{name} must have shape {(q, q)}, got {u.shape}")
    return u


def local_dress(gate, u_in_left=None, u_in_right=None, u_out_left=None, u_out_right=None):
    """``V = (u_out_left ⊗ u_out_right) U (u_in_left ⊗ u_in_right)``.

    Missing unitaries are identities.
    """
    gate = as_gate(gate)
    q = gate.q
    before = np.kron(_one_site(u_in_left, q, "u_in_left"), _one_site(u_in_right, q, "u_in_right"))
    after = np.kron(
        _one_site(u_out_left, q, "u_out_left"), _one_site(u_out_right, q, "u_out_right")
    )
    return UnitaryGate(q, after @ gate.matrix @ before)


def dress_leg(gate, leg="out_left", seed=None):
    """Dresses a single leg with a Haar one-site unitary.

    Args:
        gate (UnitaryGate): Gate to dress.
        leg (str): One of "in_left", "in_right", "out_left", "out_right".
        seed (int | np.random.Generator): Seed of the dressing unitary.
    """
    if leg not in DRESS_LEGS:
        raise ValueError(f"leg must be one of {DRESS_LEGS}, got {leg}")
    gate = as_gate(gate)
    return local_dress(gate, **{f"u_{leg}": haar_unitary(gate.q, seed)})
