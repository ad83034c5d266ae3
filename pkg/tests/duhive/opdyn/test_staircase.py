import numpy as np
import pytest

from duhive.gates import named_gate, product_gate, random_qubit_L2
from duhive.opdyn.staircase import (
    hankel_residual,
    leading_space_check,
    left_staircase_cells,
    predicted_overlaps,
    right_staircase_cells,
    staircase_basis,
    staircase_overlaps,
    staircase_vector,
)


def test_staircase_cells():
    assert right_staircase_cells(2) == [(1, 1), (2, 1), (2, 2)]
    assert left_staircase_cells(2) == [(1, 1), (1, 2), (2, 2)]
    assert len(right_staircase_cells(2, height=2)) == 6


def test_predicted_overlaps():
    assert np.allclose(predicted_overlaps(2, 1, 0.5), [[0.5, 0.5], [0.5, 0.25]])
    assert hankel_residual(predicted_overlaps(3, 3, 0.4)) < 1e-15
    assert hankel_residual(np.array([[1.0, 0.0], [2.0, 1.0]])) == 2.0


def test_staircase_vectors():
    gate = named_gate("CNOT")
    assert np.array_equal(staircase_vector(gate, 0), [1])
    assert staircase_vector(gate, 2).shape == (16**2,)
    basis = staircase_basis(gate, 2)
    assert len(basis.right) == len(basis.left) == 3
    assert all(vector.shape == (16**2,) for vector in basis.right + basis.left)
    with pytest.raises(ValueError, match="k must"):
        staircase_vector(gate, 1, k=1)
    with pytest.raises(ValueError, match="side"):
        staircase_vector(gate, 1, side="up")


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("gate", [random_qubit_L2(2), named_gate("CNOT"), named_gate("SWAP")])
def test_second_level_overlaps(gate, n):
    overlaps = staircase_overlaps(gate, n)
    assert overlaps.passed
    assert overlaps.hankel_residual < 1e-9
    assert overlaps.gram.shape == (n + 1, n + 1)


def test_overlap_prediction_uses_b1():
    overlaps = staircase_overlaps(named_gate("CNOT"), 1)
    assert np.isclose(overlaps.b, 0.5)
    assert overlaps.invertible


@pytest.mark.parametrize("n", [1, 2])
def test_leading_space_check(n):
    leading, (right, left) = leading_space_check(random_qubit_L2(4), n)
    assert leading == n + 1
    assert right < 1e-10
    assert left < 1e-10


@pytest.mark.parametrize("n", [1, 2])
def test_gram_rank_is_full_iff_b1_below_one(n):
    product = staircase_overlaps(product_gate(2, 1), n)
    assert np.isclose(product.b, 1.0)
    assert product.rank == 1
    assert not product.full_rank
    cnot = staircase_overlaps(named_gate("CNOT"), n)
    assert cnot.rank == n + 1
    assert cnot.full_rank
