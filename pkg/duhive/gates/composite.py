import numpy as np
from scipy.linalg import block_diag

from duhive.analysis.entangling import dress_leg, local_dress
from duhive.core.tensors import UnitaryGate, haar_unitary, schmidt_decompose
from duhive.gates.base import GateFn, pairs_to_complex, resolve_gate
from duhive.gates.hadamard import fourier_hadamard, hadamard_gate
from duhive.utils.utils import check_budget


def tensor_product_gate(first, second):
    """Runs two gates in parallel, site 1 carrying ``(a1, a2)``, site 2 ``(b1, b2)``.

    Args:
        first (UnitaryGate): Gate at local dimension q1.
        second (UnitaryGate): Gate at local dimension q2.
    """
    first, second = resolve_gate(first), resolve_gate(second)
    q = first.q * second.q
    check_budget(q**4, f"tensor product at q={q}")
    tensor = np.einsum("abcd,efgh->aebfcgdh", first.tensor, second.tensor)
    return UnitaryGate(q, tensor.reshape(q * q, q * q))


def tensor_product(first: GateFn, second: GateFn):
    """Config entry point for :py:func:`tensor_product_gate`."""
    return tensor_product_gate(first, second)


def block_diagonal_gate(blocks, q):
    """``U = ⊕_k V_k`` on the q²-dimensional two-site space.

    Args:
        blocks (list[np.ndarray]): Unitary blocks whose sizes sum to q².
        q (int): Local dimension.
    """
    blocks = [np.asarray(block, dtype=np.complex128) for block in blocks]
    sizes = [block.shape[0] for block in blocks]
    if sum(sizes) != q * q or any(block.shape != (n, n) for block, n in zip(blocks, sizes)):
        raise ValueError(f"square blocks of sizes {sizes} do not tile a {q * q} space")
    matrix = block_diag(*blocks)
    schmidt = schmidt_decompose(matrix)
    return UnitaryGate(
        q,
        matrix,
        properties={"flat_spectrum": schmidt.is_flat(), "schmidt_rank": schmidt.rank},
    )


def block_diagonal(q: int, blocks: list):
    """Config entry point for :py:func:`block_diagonal_gate` with ``[re, im]`` blocks."""
    matrices = []
    for block in blocks:
        n = int(round(np.sqrt(np.asarray(block).size // 2)))
        matrices.append(pairs_to_complex(block, (n, n)))
    return block_diagonal_gate(matrices, q)


def haar_gate(q: int, seed: int):
    """Haar-random two-site gate."""
    return UnitaryGate(q, haar_unitary(q * q, seed))


def product_gate(q: int, seed: int):
    """``u1 ⊗ u2`` with Haar-random one-site unitaries."""
    rng = np.random.default_rng(seed)
    return UnitaryGate(q, np.kron(haar_unitary(q, rng), haar_unitary(q, rng)))


def random_dual_unitary(q: int, seed: int):
    """Fourier square-lattice gate dressed with Haar one-site unitaries."""
    rng = np.random.default_rng(seed)
    core = hadamard_gate("square_du", fourier_hadamard(q))
    return local_dress(core, *(haar_unitary(q, rng) for _ in range(4)))


def dressed(gate: GateFn, seed: int, legs: list = ("out_left",)):
    """Dresses the given legs of a gate with Haar one-site unitaries.

    Args:
        gate (GateFn): Gate to dress.
        seed (int): Seed of the dressing unitaries.
        legs (list[str]): Any of "in_left", "in_right", "out_left", "out_right".
    """
    gate = resolve_gate(gate)
    rng = np.random.default_rng(seed)
    for leg in legs:
        gate = dress_leg(gate, leg, rng)
    return gate
