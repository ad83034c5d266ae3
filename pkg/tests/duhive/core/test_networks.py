import numpy as np
import pytest

from duhive.core.networks import (
    FOLDED_PAIR_LIMIT,
    GridNetwork,
    RectangleSweep,
    cached_network,
    contract_grid,
    contract_rectangle,
    fold,
    gate_cell,
    neighbour,
    rectangle,
    site_leg,
)
from duhive.core.tensors import CIRCLE, SQUARE, UnitaryGate, boundary_vector, haar_unitary
from duhive.utils.utils import BudgetExceededError, set_memory_budget


@pytest.fixture()
def gate():
    return UnitaryGate(2, haar_unitary(4, 21))


def random_vector(q, alpha, seed):
    rng = np.random.default_rng(seed)
    size = q ** (2 * alpha)
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def test_neighbour_links():
    assert neighbour((1, 1), "tr") == ((2, 1), "bl")
    assert neighbour((1, 1), "tl") == ((1, 2), "br")
    for leg in ("tl", "tr", "bl", "br"):
        other = neighbour((3, 2), leg)
        assert neighbour(*other) == ((3, 2), leg)


def test_gate_cell_and_site_leg():
    assert gate_cell(1, 0) == (1, 1)
    assert gate_cell(2, 1) == (2, 1)
    assert gate_cell(2, -1) == (1, 2)
    with pytest.raises(ValueError):
        gate_cell(1, 1)
    # site 0 enters layer 1 on the left leg of the gate on bond (0, 1)
    assert site_leg(0, 1, "in") == ((1, 1), "bl")
    assert site_leg(1, 1, "in") == ((1, 1), "br")
    assert site_leg(1, 1, "out") == ((1, 1), "tr")
    # the right output of (1, 1) is the left input of (2, 1)
    assert site_leg(1, 2, "in") == ((2, 1), "bl")


def test_single_cell_unitarity(gate):
    circle = boundary_vector(CIRCLE, 2, 2)
    network = GridNetwork(2, [(1, 1)], {"default": circle}, alpha=2)
    assert np.isclose(network.contract(gate), 1)


@pytest.mark.parametrize("alpha,m,n", [(2, 2, 3), (2, 3, 2), (1, 3, 1), (3, 1, 2)])
def test_rectangle_matches_grid(gate, alpha, m, n):
    q = 2
    vectors = {}
    seed = 0
    for cell in rectangle(m, n):
        for leg in ("tl", "tr", "bl", "br"):
            vectors[(cell, leg)] = random_vector(q, alpha, seed)
            seed += 1
    bottom_left = [vectors[((1, j), "bl")] for j in range(1, n + 1)]
    bottom_right = [vectors[((i, 1), "br")] for i in range(1, m + 1)]
    top_left = [vectors[((i, n), "tl")] for i in range(1, m + 1)]
    top_right = [vectors[((m, j), "tr")] for j in range(1, n + 1)]
    expected = contract_grid(gate, rectangle(m, n), vectors, alpha=alpha)
    value = contract_rectangle(
        gate, m, n, alpha, bottom_left, bottom_right, top_left, top_right
    )
    assert np.isclose(value, expected, rtol=1e-10)


def test_sweep_vector_matches_open_grid(gate):
    q, alpha = 2, 1
    circle = boundary_vector(CIRCLE, q, alpha)
    square = boundary_vector(SQUARE, q, alpha)
    sweep = RectangleSweep(gate, alpha, [circle, circle])
    sweep.step(circle, square).step(circle, square)
    cells = rectangle(2, 2)

    def boundary(cell, leg):
        return square if leg == "tl" else circle

    open_legs = [((2, 1), "tr"), ((2, 2), "tr")]
    expected = contract_grid(gate, cells, boundary, open_legs, alpha)
    assert np.allclose(sweep.vector(), expected, atol=1e-12)
    assert sweep.columns == 2


def test_open_legs_must_dangle(gate):
    circle = boundary_vector(CIRCLE, 2, 1)
    with pytest.raises(ValueError, match="not dangling"):
        GridNetwork(2, rectangle(2, 1), {"default": circle}, [((1, 1), "tr")])


def test_missing_boundary(gate):
    circle = boundary_vector(CIRCLE, 2, 1)
    with pytest.raises(ValueError, match="no boundary vector"):
        GridNetwork(2, [(1, 1)], {((1, 1), "bl"): circle})


def test_wrong_local_dimension(gate):
    network = GridNetwork(3, [(1, 1)], {"default": boundary_vector(CIRCLE, 3, 1)})
    with pytest.raises(ValueError, match="q=3"):
        network.contract(gate)


def test_cached_network_is_reused(gate):
    kinds = {((1, 1), "tl"): SQUARE}
    first = cached_network(2, [(1, 1)], kinds, alpha=2)
    second = cached_network(2, [(1, 1)], dict(kinds), alpha=2)
    assert first is second
    # a square on one output and circles elsewhere gives <square|circle>
    assert np.isclose(first.contract(gate), 0.5)


def test_budget_is_checked(gate):
    set_memory_budget(1024)
    try:
        with pytest.raises(BudgetExceededError):
            RectangleSweep(gate, 2, [boundary_vector(CIRCLE, 2, 2)] * 3)
    finally:
        set_memory_budget(None)


def test_fold_single_replica(gate):
    folded = fold(gate, 1)
    tensor = gate.tensor
    expected = np.einsum("abcd,efgh->aebfcgdh", tensor, tensor.conj()).reshape(4, 4, 4, 4)
    assert np.allclose(folded, expected)


def test_factored_sweep_matches_folded(gate, monkeypatch):
    circle = boundary_vector(CIRCLE, 2, 2)
    square = boundary_vector(SQUARE, 2, 2)
    folded = RectangleSweep(gate, 2, [square] * 3)
    monkeypatch.setattr("duhive.core.networks.FOLDED_PAIR_LIMIT", 0)
    factored = RectangleSweep(gate, 2, [square] * 3)
    for sweep in (folded, factored):
        sweep.step(circle, square).step(circle, square)
    assert FOLDED_PAIR_LIMIT >= 256
    assert np.allclose(folded.vector(), factored.vector(), atol=1e-12)
    assert np.isclose(folded.close([circle] * 3), factored.close([circle] * 3))


def test_sweep_resumes_from_state(gate):
    circle = boundary_vector(CIRCLE, 2, 2)
    square = boundary_vector(SQUARE, 2, 2)
    sweep = RectangleSweep(gate, 2, [square] * 2).step(circle, square)
    resumed = RectangleSweep.from_state(gate, 2, sweep.vector())
    sweep.step(circle, square)
    resumed.step(circle, square)
    assert np.allclose(sweep.vector(), resumed.vector())
