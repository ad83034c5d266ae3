import numpy as np
import pytest

from duhive.gates import haar_gate, random_qubit_L2
from duhive.membrane.influence import (
    im_area_law_check,
    influence_cells,
    influence_legs,
    temporal_ranks,
)


def test_influence_geometry():
    assert influence_cells(2) == [(1, 1), (2, 1), (2, 2)]
    assert influence_legs(2) == [((1, 1), "bl"), ((1, 1), "tl"), ((2, 2), "bl"), ((2, 2), "tl")]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_second_level_area_law(seed):
    gate = random_qubit_L2(seed)
    short = im_area_law_check(gate, 3)
    long = im_area_law_check(gate, 4)
    assert len(long) == 7
    assert max(short) <= 4
    assert max(long) == max(short)


def test_generic_gate_grows():
    ranks = im_area_law_check(haar_gate(2, 3), 4)
    assert max(ranks) > 4


def test_influence_errors():
    with pytest.raises(ValueError, match="v=0"):
        im_area_law_check(haar_gate(2, 0), 2, v=0.5)
    with pytest.raises(ValueError, match="t must"):
        im_area_law_check(haar_gate(2, 0), 0)


def test_temporal_ranks_of_product():
    tensor = np.einsum("a,b,c->abc", np.ones(2), np.arange(1.0, 4.0), np.ones(5))
    assert temporal_ranks(tensor) == [1, 1]
