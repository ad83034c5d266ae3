"""Gates built from complex Hadamard matrices on different lattices.

A complex Hadamard matrix (CHM) has unimodular entries and ``H H^dagger = q 1``.
The lattice name refers to the pattern the matrices form once the gates are
arranged in a brickwork circuit.
"""
from dataclasses import dataclass

import numpy as np

from duhive.core.tensors import UnitaryGate

HADAMARD_TOL = 1e-10
LATTICES = ("square_du", "honeycomb", "triangular", "sheared")


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    """Validated complex Hadamard matrix.

    Attributes:
        q (int): Size.
        entries (np.ndarray): q×q unimodular entries.
    """

    q: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.shape != (self.q, self.q):
            raise ValueError(f"expected shape {(self.q, self.q)}, got {entries.shape}")
        modulus = np.max(np.abs(np.abs(entries) - 1))
        if modulus > 1e-12:
            raise ValueError(f"entries must be unimodular, off by {modulus:.3e}")
        residual = np.linalg.norm(
            entries @ entries.conj().T - self.q * np.eye(self.q)
        )
        if residual > HADAMARD_TOL:
            raise ValueError(f"H H^dagger != q 1, residual {residual:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


def fourier_hadamard(q):
    """``H_ab = ω^{ab}`` with ``ω = exp(2πi/q)``."""
    a = np.arange(q)
    return HadamardMatrix(q, np.exp(2j * np.pi * np.outer(a, a) / q))


def qubit_hadamard():
    return HadamardMatrix(2, [[1, 1], [1, -1]])


def dephase(base, row_phases, col_phases):
    """``diag(exp(i row)) H diag(exp(i col))``."""
    row_phases = np.asarray(row_phases, dtype=np.float64)
    col_phases = np.asarray(col_phases, dtype=np.float64)
    if row_phases.shape != (base.q,) or col_phases.shape != (base.q,):
        raise ValueError(f"expected {base.q} row and column phases")
    entries = (
        np.exp(1j * row_phases)[:, None] * base.entries * np.exp(1j * col_phases)[None]
    )
    return HadamardMatrix(base.q, entries)


def complex_hadamard(kind, q=None, base=None, row_phases=None, col_phases=None):
    """Builds a CHM.

    Args:
        kind (str): "fourier", "qubit_standard" or "dephased".
        q (int): Size, for "fourier".
        base (HadamardMatrix): Matrix to dephase, for "dephased".
        row_phases (list[float]): Row phases, for "dephased".
        col_phases (list[float]): Column phases, for "dephased".
    """
    if kind == "fourier":
        if q is None or q < 2:
            raise ValueError(f"fourier needs q >= 2, got {q}")
        return fourier_hadamard(q)
    if kind == "qubit_standard":
        return qubit_hadamard()
    if kind == "dephased":
        if base is None:
            raise ValueError("dephased needs a base matrix")
        return dephase(base, row_phases, col_phases)
    raise ValueError(f"unknown CHM kind {kind}")


def hadamard_gate(lattice, hadamard):
    """Two-site gate from one CHM.

    Entries, with δ the Kronecker delta:

    * square_du: ``H_ab H_bd H_cd H_ac / q`` (dual-unitary)
    * honeycomb: ``δ_ac Σ_f H_af H_bf H_df / q``
    * triangular: ``δ_ac H_ab H_ad H_bd / sqrt(q)``
    * sheared: ``δ_ac H_ab H_bd / sqrt(q)``

    Args:
        lattice (str): One of the lattices above.
        hadamard (HadamardMatrix): The CHM.
    """
    H = hadamard.entries
    q = hadamard.q
    delta = np.eye(q)
    if lattice == "square_du":
        tensor = np.einsum("ab,bd,cd,ac->abcd", H, H, H, H) / q
    elif lattice == "honeycomb":
        tensor = np.einsum("ac,af,bf,df->abcd", delta, H, H, H) / q
    elif lattice == "triangular":
        tensor = np.einsum("ac,ab,ad,bd->abcd", delta, H, H, H) / np.sqrt(q)
    elif lattice == "sheared":
        tensor = np.einsum("ac,ab,bd->abcd", delta, H, H) / np.sqrt(q)
    else:
        raise ValueError(f"lattice must be one of {LATTICES}, got {lattice}")
    return UnitaryGate(
        q, tensor.reshape(q * q, q * q), properties={"lattice": lattice}
    )


def lattice_gate(
    lattice: str,
    kind: str = "fourier",
    q: int = 2,
    row_phases: list = None,
    col_phases: list = None,
    seed: int = None,
):
    """Config entry point for :py:func:`hadamard_gate`.

    The base CHM is dephased with explicit phases, or with uniform random phases
    when a seed is given.
    """
    base = complex_hadamard(kind, q=q)
    if seed is not None:
        rng = np.random.default_rng(seed)
        row_phases = rng.uniform(0, 2 * np.pi, size=base.q)
        col_phases = rng.uniform(0, 2 * np.pi, size=base.q)
    if row_phases is not None or col_phases is not None:
        row_phases = np.zeros(base.q) if row_phases is None else row_phases
        col_phases = np.zeros(base.q) if col_phases is None else col_phases
        base = dephase(base, row_phases, col_phases)
    return hadamard_gate(lattice, base)
