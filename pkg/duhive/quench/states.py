"""State vectors on a periodic chain and their brickwork evolution."""
from dataclasses import dataclass

import numpy as np

from duhive.core.tensors import _four_leg, haar_unitary
from duhive.utils.utils import check_budget

NORM_TOL = 1e-10


@dataclass(eq=False)
class StateVector:
    """Pure state of N sites with local dimension q.

    Attributes:
        q (int): Local dimension.
        amplitudes (np.ndarray): Tensor of shape ``(q,) * N``.
    """

    q: int
    amplitudes: np.ndarray

    @property
    def N(self):
        return self.amplitudes.ndim

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def vector(self):
        return self.amplitudes.reshape(-1)

    def copy(self):
        return StateVector(self.q, self.amplitudes.copy())


def product_state(vectors):
    """Product of single-site vectors, normalized."""
    vectors = [np.asarray(v, dtype=np.complex128) for v in vectors]
    q = vectors[0].shape[0]
    check_budget(q ** len(vectors), f"product state of {len(vectors)} sites")
    amplitudes = np.ones((), dtype=np.complex128)
    for vector in vectors:
        amplitudes = np.multiply.outer(amplitudes, vector / np.linalg.norm(vector))
    return StateVector(q, amplitudes)


def random_product_state(q, N, seed, translation_invariant=True):
    """Random product state built from Haar single-site vectors.

    Args:
        q (int): Local dimension.
        N (int): Chain length.
        seed (int): Seed of the draw.
        translation_invariant (bool): Replicate one vector on every site instead of
            drawing each site independently.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    check_budget(q**N, f"state of {N} sites at q={q}")
    rng = np.random.default_rng(seed)
    if translation_invariant:
        vector = haar_unitary(q, rng)[:, 0]
        return product_state([vector] * N)
    return product_state([haar_unitary(q, rng)[:, 0] for _ in range(N)])


def apply_gate(state, gate, site):
    """Applies a two-site gate on ``(site, site + 1 mod N)`` in place of the state."""
    q, tensor = _four_leg(gate)
    if q != state.q:
        raise ValueError(f"gate has q={q}, state has q={state.q}")
    N = state.N
    sites = [site % N, (site + 1) % N]
    amplitudes = np.tensordot(tensor, state.amplitudes, axes=([2, 3], sites))
    state.amplitudes = np.moveaxis(amplitudes, [0, 1], sites)
    return state


def apply_layer(state, gate, parity):
    """Gates on every bond ``(b, b + 1)`` with ``b % 2 == parity``, periodically."""
    for site in range(parity, state.N, 2):
        apply_gate(state, gate, site)
    return state


def evolve_brickwork(state, gate, layers, start_layer=1):
    """Evolves `state` by `layers` brickwork layers on a periodic chain.

    Odd layers act on even bonds, even layers on odd bonds. The input state is
    left untouched.

    Args:
        state (StateVector): Initial state, N even.
        gate (UnitaryGate): Gate of the circuit.
        layers (int): Number of layers.
        start_layer (int): Index of the first layer, which fixes its parity.
    """
    if state.N % 2:
        raise ValueError(f"periodic brickwork needs an even chain, got N={state.N}")
    q, _ = _four_leg(gate)
    if q != state.q:
        raise ValueError(f"gate has q={q}, state has q={state.q}")
    state = state.copy()
    for layer in range(start_layer, start_layer + layers):
        apply_layer(state, gate, (layer + 1) % 2)
    return state


def schmidt_probabilities(state, cut=None):
    """Squared Schmidt values across the cut between sites ``cut - 1`` and ``cut``."""
    N = state.N
    cut = N // 2 if cut is None else cut
    if not 0 < cut < N:
        raise ValueError(f"cut must be in (0, {N}), got {cut}")
    matrix = state.amplitudes.reshape(state.q**cut, -1)
    values = np.linalg.svd(matrix, compute_uv=False)
    probabilities = values**2
    return probabilities / probabilities.sum()


def renyi_entropy(state, cut=None, alpha=2):
    """Rényi-α entanglement entropy of sites ``0 ... cut - 1``.

    ``alpha = 1`` gives the von Neumann entropy.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    p = schmidt_probabilities(state, cut)
    p = p[p > 0]
    if alpha == 1:
        return float(max(0.0, -np.sum(p * np.log(p))))
    return float(max(0.0, np.log(np.sum(p**alpha)) / (1 - alpha)))
