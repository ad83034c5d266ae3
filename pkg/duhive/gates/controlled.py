"""Controlled gates ``U = Σ_i |i><i| ⊗ u_i`` with the left site as control."""
import numpy as np
from scipy.linalg import block_diag

from duhive.core.tensors import UnitaryGate, haar_unitary, schmidt_decompose
from duhive.gates.base import pairs_to_complex

BLOCK_TOL = 1e-10


def shift_operator(q):
    """``X|k> = |k+1 mod q>``."""
    return np.roll(np.eye(q, dtype=np.complex128), 1, axis=0)


def enphased_permutation(permutation, phases=None):
    """``<a|u|b> = exp(i phases[a]) δ(b, permutation[a])``."""
    permutation = [int(p) for p in permutation]
    q = len(permutation)
    if sorted(permutation) != list(range(q)):
        raise ValueError(f"{permutation} is not a permutation of 0..{q - 1}")
    phases = np.zeros(q) if phases is None else np.asarray(phases, dtype=np.float64)
    if phases.shape != (q,):
        raise ValueError(f"expected {q} phases, got {phases.shape}")
    matrix = np.zeros((q, q), dtype=np.complex128)
    matrix[np.arange(q), permutation] = np.exp(1j * phases)
    return matrix


def controlled_properties(blocks, matrix):
    q = len(blocks)
    gram = np.array([[np.trace(u.conj().T @ v) for v in blocks] for u in blocks])
    off_diagonal = gram - np.diag(np.diag(gram))
    completeness = max(
        np.linalg.norm(
            sum(np.outer(u[:, j], u[:, j].conj()) for u in blocks) - np.eye(q)
        )
        for j in range(q)
    )
    schmidt = schmidt_decompose(matrix)
    return {
        "flat_spectrum": schmidt.is_flat(),
        "orthogonal_blocks": bool(np.max(np.abs(off_diagonal)) <= BLOCK_TOL),
        "l2_sufficient": bool(completeness <= BLOCK_TOL),
        "schmidt_rank": schmidt.rank,
    }


def controlled_unitary(blocks):
    """Controlled gate from q blocks of size q×q.

    Args:
        blocks (list[np.ndarray]): Target unitaries indexed by the control value.
    """
    blocks = [np.asarray(u, dtype=np.complex128) for u in blocks]
    q = len(blocks)
    for idx, u in enumerate(blocks):
        if u.shape != (q, q):
            raise ValueError(f"block {idx} has shape {u.shape}, expected {(q, q)}")
        residual = np.linalg.norm(u @ u.conj().T - np.eye(q))
        if residual > BLOCK_TOL:
            raise ValueError(f"block {idx} is not unitary, residual {residual:.3e}")
    matrix = block_diag(*blocks)
    return UnitaryGate(q, matrix, properties=controlled_properties(blocks, matrix))


def controlled_gate(q: int, blocks: list):
    """Config entry point for :py:func:`controlled_unitary` with ``[re, im]`` blocks."""
    return controlled_unitary([pairs_to_complex(u, (q, q)) for u in blocks])


def generalized_cnot(q: int):
    """``Σ_i |i><i| ⊗ X^i``, Schmidt rank q."""
    shift = shift_operator(q)
    return controlled_unitary([np.linalg.matrix_power(shift, i) for i in range(q)])


def controlled_x(q: int):
    """Identity on even control values and X on odd ones, Schmidt rank 2."""
    if q % 2:
        raise ValueError(f"controlled_x needs even q, got {q}")
    shift = shift_operator(q)
    return controlled_unitary([shift if i % 2 else np.eye(q) for i in range(q)])


def random_controlled_phases(q: int, seed: int):
    """Controlled gate with random diagonal blocks."""
    rng = np.random.default_rng(seed)
    return controlled_unitary(
        [np.diag(np.exp(2j * np.pi * rng.random(q))) for _ in range(q)]
    )


def random_controlled(q: int, seed: int):
    """Controlled gate with Haar-random blocks."""
    rng = np.random.default_rng(seed)
    return controlled_unitary([haar_unitary(q, rng) for _ in range(q)])


def _random_enphased(rng, q, permutation=None):
    if permutation is None:
        permutation = rng.permutation(q)
    return enphased_permutation(permutation, rng.uniform(0, 2 * np.pi, size=q))


def enphased_cnot(q: int, seed: int):
    """``(u_P1 ⊗ u_P2) CNOT_q`` with random permutations and phases."""
    rng = np.random.default_rng(seed)
    left = _random_enphased(rng, q)
    right = _random_enphased(rng, q)
    cnot = generalized_cnot(q)
    matrix = np.kron(left, right) @ cnot.matrix
    return UnitaryGate(q, matrix, properties=dict(cnot.properties))


def parity_controlled(q: int, seed: int):
    """Rank-two controlled gate alternating two enphased permutations.

    Even control values apply a random parity-preserving enphased permutation,
    odd ones a random parity-switching one.
    """
    if q % 2:
        raise ValueError(f"parity_controlled needs even q, got {q}")
    rng = np.random.default_rng(seed)
    evens = np.arange(0, q, 2)
    odds = np.arange(1, q, 2)
    preserving = np.empty(q, dtype=int)
    preserving[evens] = rng.permutation(evens)
    preserving[odds] = rng.permutation(odds)
    switching = np.empty(q, dtype=int)
    switching[evens] = rng.permutation(odds)
    switching[odds] = rng.permutation(evens)
    even_block = _random_enphased(rng, q, preserving)
    odd_block = _random_enphased(rng, q, switching)
    return controlled_unitary([odd_block if i % 2 else even_block for i in range(q)])
