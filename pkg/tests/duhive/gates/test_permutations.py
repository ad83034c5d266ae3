import numpy as np
import pytest

from duhive.core.tensors import schmidt_decompose
from duhive.gates.permutations import (
    PermutationSearchResult,
    batched_schmidt,
    category,
    permutation_gate,
    permutation_search_L2,
)

IDENTITY = (0, 1, 2, 3)
SWAP = (0, 2, 1, 3)
CNOT = (0, 1, 3, 2)


@pytest.fixture(scope="module")
def qubit_search():
    return permutation_search_L2(2, mode="exhaustive", chunk_size=5)


def test_batched_schmidt_matches_single_gate():
    permutations = np.array([IDENTITY, SWAP, CNOT, (3, 1, 0, 2)])
    values = batched_schmidt(permutations, 2)
    for permutation, row in zip(permutations, values):
        expected = schmidt_decompose(permutation_gate(2, permutation)).values
        assert np.allclose(np.sort(row), np.sort(expected))


def test_exhaustive_qubit_search(qubit_search):
    assert qubit_search.examined == 24
    assert qubit_search.all_ranks_divide
    members = {permutation: (rank, kind) for permutation, rank, kind in qubit_search.members}
    assert members[IDENTITY] == (1, "product")
    assert members[SWAP] == (4, "dual_unitary")
    assert members[CNOT] == (2, "entangling")
    assert set(qubit_search.histogram) == {2}
    assert qubit_search.flat >= len(qubit_search.members)


def test_exhaustive_search_with_workers(qubit_search):
    split = permutation_search_L2(2, mode="exhaustive", workers=2)
    assert split.examined == qubit_search.examined
    assert sorted(split.members) == sorted(qubit_search.members)
    assert split.histogram == qubit_search.histogram


def test_sampled_search():
    result = permutation_search_L2(3, mode="sampled", samples=300, seed=0, chunk_size=128)
    assert result.examined == 300
    assert result.all_ranks_divide
    for _, rank, kind in result.members:
        assert 9 % rank == 0
        assert kind == category(rank, 3)
    again = permutation_search_L2(3, mode="sampled", samples=300, seed=0, chunk_size=128)
    assert again.members == result.members


def test_search_errors():
    with pytest.raises(ValueError, match="refused"):
        permutation_search_L2(4, mode="exhaustive")
    with pytest.raises(ValueError, match="mode"):
        permutation_search_L2(2, mode="random")
    with pytest.raises(ValueError, match="permutation"):
        permutation_gate(2, [0, 1, 1, 2])


def test_merge_results():
    first = PermutationSearchResult(2, "sampled", 3, 1, [(CNOT, 2, "entangling")], {2: 1})
    second = PermutationSearchResult(2, "sampled", 2, 1, [(CNOT, 2, "entangling")], {2: 1})
    second.all_ranks_divide = False
    merged = first.merge(second)
    assert merged.examined == 5
    assert merged.flat == 2
    assert merged.histogram == {2: 2}
    assert not merged.all_ranks_divide
