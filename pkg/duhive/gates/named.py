import numpy as np

from duhive.core.tensors import UnitaryGate
from duhive.gates.composite import block_diagonal_gate
from duhive.gates.controlled import controlled_x, generalized_cnot, shift_operator

_O8_SIGNS = np.array(
    [
        [-1, -1, -1, +1, -1, +1, +1, +1],
        [-1, -1, -1, +1, +1, -1, -1, -1],
        [-1, -1, +1, -1, -1, +1, -1, -1],
        [+1, +1, -1, +1, -1, +1, -1, -1],
        [-1, +1, -1, -1, -1, -1, +1, -1],
        [+1, -1, +1, +1, -1, -1, +1, -1],
        [+1, -1, -1, -1, +1, +1, +1, -1],
        [+1, -1, -1, -1, -1, -1, -1, +1],
    ]
)


def identity_gate(q):
    return UnitaryGate(q, np.eye(q * q))


def swap_gate(q):
    tensor = np.einsum("ad,bc->abcd", np.eye(q), np.eye(q))
    return UnitaryGate(q, tensor.reshape(q * q, q * q))


def o8_matrix():
    """Real Hadamard form of the six-qubit perfect tensor, scaled to be orthogonal."""
    return _O8_SIGNS / np.sqrt(8)


def f2x4_matrix():
    """Eight-point Fourier matrix read as a map on C² ⊗ C⁴."""
    a = np.arange(8)
    return np.exp(2j * np.pi * np.outer(a, a) / 8) / np.sqrt(8)


def _p_cxscxs():
    cx = controlled_x(4).matrix
    swap = swap_gate(4).matrix
    return UnitaryGate(4, cx @ swap @ cx @ swap)


def _f2x4_rank8():
    shift2 = np.linalg.matrix_power(shift_operator(8), 2)
    f = f2x4_matrix()
    return block_diagonal_gate([f, shift2 @ f @ shift2], 4)


def _o8_rank8():
    shift2 = np.linalg.matrix_power(shift_operator(8), 2)
    return block_diagonal_gate([o8_matrix(), shift2 @ o8_matrix()], 4)


_FIXED_Q = {
    "P_CXSCXS": (4, _p_cxscxs),
    "F2x4_block": (4, lambda: block_diagonal_gate([f2x4_matrix()] * 2, 4)),
    "F2x4_rank8": (4, _f2x4_rank8),
    "O8_block": (4, lambda: block_diagonal_gate([o8_matrix()] * 2, 4)),
    "O8_rank8": (4, _o8_rank8),
}

_ANY_Q = {
    "identity": identity_gate,
    "SWAP": swap_gate,
    "CNOT": generalized_cnot,
    "CX": controlled_x,
}

NAMES = sorted(list(_FIXED_Q) + list(_ANY_Q))


def named_gate(name: str, q: int = 2):
    """Gate with a fixed name.

    Args:
        name (str): One of identity, SWAP, CNOT (generalized to any q), CX (even
            q), P_CXSCXS, F2x4_block, F2x4_rank8, O8_block, O8_rank8 (q = 4).
        q (int): Local dimension.
    """
    if name in _ANY_Q:
        gate = _ANY_Q[name](q)
    elif name in _FIXED_Q:
        fixed_q, constructor = _FIXED_Q[name]
        if q != fixed_q:
            raise ValueError(f"{name} exists only at q={fixed_q}, got q={q}")
        gate = constructor()
    else:
        raise ValueError(f"unknown named gate {name} (known: {', '.join(NAMES)})")
    return gate.with_properties(name=name)
