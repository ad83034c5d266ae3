import numpy as np
import pytest

from duhive.core.tensors import (
    CIRCLE,
    SQUARE,
    UnitaryGate,
    as_gate,
    boundary_vector,
    fold,
    haar_unitary,
    local_dimension,
    mirror,
    partial_transpose,
    reshuffle,
    schmidt_decompose,
)
from duhive.gates.named import named_gate


@pytest.fixture()
def cnot():
    return named_gate("CNOT")


@pytest.fixture()
def swap():
    return named_gate("SWAP")


@pytest.fixture()
def haar_gate():
    return UnitaryGate(2, haar_unitary(4, 11))


@pytest.fixture()
def product():
    return UnitaryGate(2, np.kron(haar_unitary(2, 1), haar_unitary(2, 2)))


@pytest.mark.parametrize("q", [2, 3])
def test_reshuffle_and_partial_transpose_are_involutions(q):
    u = haar_unitary(q * q, 5)
    assert np.array_equal(reshuffle(reshuffle(u)), u)
    assert np.array_equal(partial_transpose(partial_transpose(u)), u)


def test_reshuffle_index_convention():
    q = 3
    u = haar_unitary(q * q, 3)
    shuffled = reshuffle(u)
    for a, b, c, d in [(0, 1, 2, 0), (2, 2, 1, 1), (1, 0, 0, 2)]:
        assert shuffled[a * q + b, c * q + d] == u[a * q + c, b * q + d]


def test_mirror(cnot, swap):
    assert np.allclose(mirror(swap).matrix, swap.matrix)
    reversed_cnot = swap.matrix @ cnot.matrix @ swap.matrix
    assert np.allclose(mirror(cnot).matrix, reversed_cnot)
    assert isinstance(mirror(cnot.matrix), np.ndarray)


@pytest.mark.parametrize("alpha", [1, 2])
def test_folded_gate_preserves_circles(haar_gate, alpha):
    folded = fold(haar_gate, alpha)
    circle = boundary_vector(CIRCLE, 2, alpha).data
    outputs = np.einsum("abcd,c,d->ab", folded.tensor, circle, circle)
    assert np.allclose(outputs, np.multiply.outer(circle, circle), atol=1e-10)


@pytest.mark.parametrize("q,alpha", [(2, 1), (2, 2), (3, 2), (2, 3)])
def test_boundary_overlaps(q, alpha):
    circle = boundary_vector(CIRCLE, q, alpha)
    square = boundary_vector(SQUARE, q, alpha)
    assert np.isclose(circle.overlap(circle), 1)
    assert np.isclose(square.overlap(square), 1)
    assert np.isclose(circle.overlap(square), q ** (1 - alpha))


def test_dressed_boundary_vector():
    q = 2
    z = np.diag([1.0, -1.0])
    dressed = boundary_vector(CIRCLE, q, 2, z)
    circle = boundary_vector(CIRCLE, q, 2)
    # tr(Z)^2 / q^2
    assert np.isclose(dressed.overlap(circle), 0)
    square = boundary_vector(SQUARE, q, 2)
    # tr(Z Z) / q^2
    assert np.isclose(dressed.overlap(square), 2 / q**2)


@pytest.mark.parametrize(
    "gate,values,rank",
    [
        (pytest.lazy_fixture("cnot"), [np.sqrt(2), np.sqrt(2), 0, 0], 2),
        (pytest.lazy_fixture("swap"), [1, 1, 1, 1], 4),
        (pytest.lazy_fixture("product"), [2, 0, 0, 0], 1),
    ],
)
def test_schmidt_values(gate, values, rank):
    schmidt = schmidt_decompose(gate)
    assert np.allclose(schmidt.values, values, atol=1e-9)
    assert schmidt.rank == rank
    assert schmidt.is_flat()
    assert np.isclose(np.sum(schmidt.values**2), 4)


def test_schmidt_reconstruction(haar_gate):
    schmidt = schmidt_decompose(haar_gate)
    assert schmidt.rank == 4
    assert not schmidt.is_flat()
    assert np.allclose(schmidt.reconstruct(), haar_gate.matrix, atol=1e-10)


def test_gate_validation():
    with pytest.raises(ValueError, match="not unitary"):
        UnitaryGate(2, 2 * np.eye(4))
    with pytest.raises(ValueError, match="shape"):
        UnitaryGate(2, np.eye(9))
    with pytest.raises(ValueError, match="non-finite"):
        UnitaryGate(2, np.full((4, 4), np.nan))
    with pytest.raises(ValueError):
        local_dimension(np.eye(5))


def test_gate_matrix_is_read_only(cnot):
    with pytest.raises(ValueError):
        cnot.matrix[0, 0] = 2
    assert as_gate(cnot) is cnot
    assert as_gate(np.eye(9)).q == 3


def test_haar_unitary_is_seeded():
    assert np.array_equal(haar_unitary(4, 7), haar_unitary(4, 7))
    assert not np.allclose(haar_unitary(4, 7), haar_unitary(4, 8))
    u = haar_unitary(6, 1)
    assert np.allclose(u @ u.conj().T, np.eye(6))
