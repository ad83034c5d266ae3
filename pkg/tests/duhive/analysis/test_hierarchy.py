import numpy as np
import pytest
from pytest_lazyfixture import lazy_fixture

from duhive.analysis.hierarchy import (
    Check,
    classify_hierarchy,
    lk_sides,
    verify_dual_unitary,
    verify_Lk,
    verify_t_dual,
    verify_unitary,
)
from duhive.core.tensors import mirror
from duhive.gates import build_gate, haar_gate, named_gate, product_gate


@pytest.fixture
def cnot():
    return named_gate("CNOT")


@pytest.fixture
def swap():
    return named_gate("SWAP")


@pytest.fixture
def product():
    return product_gate(2, 3)


@pytest.fixture
def haar():
    return haar_gate(2, 11)


def test_check_truthiness():
    assert Check(True, 0.0)
    assert not Check(False, 1.0)


@pytest.mark.parametrize(
    "gate,dual_unitary,t_dual",
    [
        (lazy_fixture("cnot"), False, True),
        (lazy_fixture("swap"), True, False),
        (lazy_fixture("product"), False, True),
    ],
)
def test_duality_checks(gate, dual_unitary, t_dual):
    assert verify_unitary(gate).passed
    assert verify_dual_unitary(gate).passed == dual_unitary
    assert verify_t_dual(gate).passed == t_dual


@pytest.mark.parametrize(
    "gate", [lazy_fixture("cnot"), lazy_fixture("swap"), lazy_fixture("product")]
)
@pytest.mark.parametrize("direction", ["left", "right"])
def test_second_level_members(gate, direction):
    check = verify_Lk(gate, 2, direction)
    assert check.passed
    assert check.residual < 1e-12


def test_generic_gate_fails_low_levels(haar):
    report = classify_hierarchy(haar, k_max=3)
    assert report.level_left is None
    assert report.level_right is None
    assert report.residuals["left_k2"] > 1e-3
    assert report.residuals["right_k3"] > 1e-3


def test_directions_are_mirrored(haar):
    for k in (2, 3):
        assert np.isclose(
            verify_Lk(haar, k, "right").residual,
            verify_Lk(mirror(haar), k, "left").residual,
        )


def test_lk_sides_shape(cnot):
    lhs, rhs = lk_sides(cnot, 3)
    assert lhs.shape == (4,) * 4
    assert rhs.shape == lhs.shape
    with pytest.raises(ValueError, match="k must be"):
        lk_sides(cnot, 1)
    with pytest.raises(ValueError, match="direction"):
        lk_sides(cnot, 2, "up")


def test_classify_cnot(cnot):
    report = classify_hierarchy(cnot)
    assert report.level_left == 2
    assert report.level_right == 2
    assert report.monotone
    assert set(report.residuals) == {
        f"{direction}_k{k}" for direction in ("left", "right") for k in (2, 3, 4)
    }
    summary = report.to_dict()
    assert summary["t_dual"]
    assert not summary["dual_unitary"]


def test_dressed_third_level_gate_keeps_one_direction():
    gate = build_gate(
        {
            "name": "dressed",
            "kwargs": {
                "gate": {"name": "random_qubit_L3", "kwargs": {"seed": 2}},
                "seed": 0,
                "legs": ["out_left"],
            },
        }
    )
    report = classify_hierarchy(gate, k_max=3)
    assert report.level_left is None
    assert report.level_right == 3
    assert report.residuals["right_k2"] > 1e-6


def test_classify_k_max():
    with pytest.raises(ValueError, match="k_max"):
        classify_hierarchy(named_gate("SWAP"), k_max=1)
