import numpy as np
import pytest

from duhive.gates import named_gate, random_dual_unitary, random_qubit_L2
from duhive.quench.growth import entanglement_growth, entropy_series, fit_window
from duhive.quench.states import evolve_brickwork, random_product_state, renyi_entropy


def test_fit_window_on_linear_ramp():
    entropies = [min(t, 6.0) for t in range(13)]
    slope, window = fit_window(entropies, 2, 12)
    assert np.isclose(slope, 1.0)
    assert window == (2, 3)
    with pytest.raises(ValueError, match="at least"):
        fit_window([0.0, 1.0, 2.0], 2, 4)


def test_series_matches_evolution():
    gate = random_qubit_L2(2)
    entropies = entropy_series(gate, 6, 3, seed=4)
    state = evolve_brickwork(random_product_state(2, 6, seed=4), gate, 3)
    assert len(entropies) == 4
    assert np.isclose(entropies[-1], renyi_entropy(state))
    with pytest.raises(ValueError, match="even chain"):
        entropy_series(gate, 5, 3, seed=0)


def test_swap_does_not_entangle():
    series = entanglement_growth(named_gate("SWAP"), 6, 6, seed=0)
    assert np.allclose(series.entropies, 0, atol=1e-12)
    assert series.v_E is None
    assert series.oscillation() < 1e-12


def test_growth_against_reference():
    series = entanglement_growth(
        random_qubit_L2(1), 8, 8, seed=3, reference=random_dual_unitary(2, 3)
    )
    assert series.times == list(range(9))
    assert max(series.entropies) <= series.saturation + 1e-9
    assert series.reference_slope > 0
    assert series.v_E > 0
    start, stop = series.window
    assert 2 <= start < stop <= 8
