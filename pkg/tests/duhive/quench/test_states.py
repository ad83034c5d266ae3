import numpy as np
import pytest

from duhive.gates import haar_gate, named_gate
from duhive.quench.states import (
    StateVector,
    apply_gate,
    evolve_brickwork,
    product_state,
    random_product_state,
    renyi_entropy,
    schmidt_probabilities,
)

E0 = np.array([1.0, 0.0])
E1 = np.array([0.0, 1.0])


def test_product_state_is_normalized():
    state = product_state([[1, 1], [2, 0], [0, 3]])
    assert state.N == 3
    assert np.isclose(state.norm, 1)


def test_swap_exchanges_sites():
    swap = named_gate("SWAP")
    state = apply_gate(product_state([E0, E1, E0, E0]), swap, 0)
    assert np.allclose(state.amplitudes, product_state([E1, E0, E0, E0]).amplitudes)
    state = apply_gate(state, swap, 3)
    assert np.allclose(state.amplitudes, product_state([E0, E0, E0, E1]).amplitudes)


def test_gate_dimension_mismatch():
    state = product_state([E0, E1])
    with pytest.raises(ValueError, match="q=3"):
        apply_gate(state, haar_gate(3, 0), 0)


def test_evolution_keeps_norm_and_input():
    state = random_product_state(2, 6, seed=1)
    before = state.amplitudes.copy()
    evolved = evolve_brickwork(state, haar_gate(2, 2), 5)
    assert np.isclose(evolved.norm, 1)
    assert np.array_equal(state.amplitudes, before)
    with pytest.raises(ValueError, match="even chain"):
        evolve_brickwork(product_state([E0] * 3), haar_gate(2, 2), 1)


def test_translation_invariant_draw():
    state = random_product_state(3, 4, seed=5)
    other = random_product_state(3, 4, seed=5, translation_invariant=False)
    assert state.amplitudes.shape == (3,) * 4
    assert np.isclose(other.norm, 1)
    first = state.amplitudes.reshape(3, -1)
    assert np.linalg.matrix_rank(first, tol=1e-10) == 1
    with pytest.raises(ValueError, match="N must"):
        random_product_state(2, 1, seed=0)


def test_entropies():
    product = random_product_state(2, 6, seed=0)
    assert renyi_entropy(product) == pytest.approx(0, abs=1e-12)
    eye = np.eye(2)
    pairs = StateVector(2, np.einsum("ac,bd->abcd", eye, eye) / 2)
    assert np.isclose(renyi_entropy(pairs), 2 * np.log(2))
    assert np.isclose(renyi_entropy(pairs, alpha=1), 2 * np.log(2))
    assert np.allclose(schmidt_probabilities(pairs), 0.25)
    assert np.isclose(renyi_entropy(pairs, cut=1), np.log(2))
    with pytest.raises(ValueError, match="cut"):
        schmidt_probabilities(pairs, cut=4)
    with pytest.raises(ValueError, match="alpha"):
        renyi_entropy(pairs, alpha=0)
