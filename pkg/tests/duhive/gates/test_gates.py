import numpy as np
import pytest

from duhive.analysis.hierarchy import (
    classify_hierarchy,
    verify_dual_unitary,
    verify_Lk,
    verify_t_dual,
)
from duhive.core.tensors import schmidt_decompose
from duhive.gates import (
    GateRecipe,
    build_gate,
    complex_hadamard,
    controlled_x,
    gate_from_spec,
    gate_to_spec,
    generalized_cnot,
    get_gate,
    load_gate_spec,
    named_gate,
    qubit_L2,
    qubit_L3,
    random_controlled_phases,
    random_qubit_L2,
    random_qubit_L3,
    save_gate_spec,
    tensor_product_gate,
)
from duhive.gates.base import complex_to_pairs
from duhive.gates.hadamard import HadamardMatrix, dephase, hadamard_gate
from duhive.utils.registry import ConfigError


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_random_qubit_L2(seed):
    gate = random_qubit_L2(seed)
    assert verify_Lk(gate, 2, "left").passed
    assert verify_Lk(gate, 2, "right").passed
    schmidt = schmidt_decompose(gate)
    assert schmidt.rank == 2
    assert np.isclose(np.sum(schmidt.values**4) / 4, 2)


def test_qubit_L2_constraint():
    with pytest.raises(ValueError, match="off by"):
        qubit_L2(np.pi / 2, 0.3, np.pi / 2, 0.1, theta1=np.pi / 4 + 0.1, theta2=np.pi / 4)
    with pytest.raises(ValueError, match="no polar angle"):
        qubit_L2(0.1, 0.0, np.pi / 2, 0.0)


@pytest.mark.parametrize("seed", [0, 3])
def test_random_qubit_L3(seed):
    gate = random_qubit_L3(seed)
    report = classify_hierarchy(gate, k_max=3)
    assert report.level_left == 3
    assert report.level_right == 3


def test_qubit_L3_without_coupling_is_product():
    gate = qubit_L3(0.0, 0.4, 1.3)
    assert schmidt_decompose(gate).rank == 1
    with pytest.raises(ValueError, match="J must lie"):
        qubit_L3(1.0, 0.0, 0.0)


def test_generalized_cnot():
    gate = generalized_cnot(3)
    assert schmidt_decompose(gate).rank == 3
    assert verify_Lk(gate, 2, "left").passed
    assert verify_Lk(gate, 2, "right").passed
    assert gate.properties["l2_sufficient"]


def test_controlled_x():
    gate = controlled_x(4)
    assert schmidt_decompose(gate).rank == 2
    with pytest.raises(ValueError, match="even q"):
        controlled_x(3)


def test_random_controlled_phases():
    gate = random_controlled_phases(3, 5)
    assert not gate.properties["l2_sufficient"]


@pytest.mark.parametrize(
    "name,rank,value,t_dual",
    [
        ("P_CXSCXS", 4, 2.0, False),
        ("O8_rank8", 8, np.sqrt(2), None),
        ("F2x4_block", 4, 2.0, None),
        ("F2x4_rank8", 8, np.sqrt(2), None),
    ],
)
def test_named_q4_gates(name, rank, value, t_dual):
    gate = named_gate(name, 4)
    schmidt = schmidt_decompose(gate)
    assert schmidt.rank == rank
    assert np.allclose(schmidt.nonzero, value)
    if t_dual is not None:
        assert verify_t_dual(gate).passed == t_dual


def test_o8_rank8_is_second_level():
    gate = named_gate("O8_rank8", 4)
    assert verify_Lk(gate, 2, "left").passed
    assert verify_Lk(gate, 2, "right").passed


def test_named_gate_errors():
    with pytest.raises(ValueError, match="q=4"):
        named_gate("O8_block", 2)
    with pytest.raises(ValueError, match="unknown named gate"):
        named_gate("Toffoli")


def test_cnot_classification():
    gate = named_gate("CNOT")
    report = classify_hierarchy(gate)
    assert not report.dual_unitary
    assert report.t_dual
    assert report.level_left == 2
    assert report.level_right == 2


@pytest.mark.parametrize(
    "first,second,q,rank",
    [
        ({"name": "named", "kwargs": {"name": "CNOT"}}, {"name": "named", "kwargs": {"name": "CNOT"}}, 4, 4),
        ({"name": "named", "kwargs": {"name": "CNOT"}}, {"name": "random_dual_unitary", "kwargs": {"q": 2, "seed": 1}}, 4, 8),
        ({"name": "named", "kwargs": {"name": "identity", "q": 2}}, {"name": "named", "kwargs": {"name": "CNOT", "q": 3}}, 6, 3),
    ],
)
def test_tensor_product_ranks(first, second, q, rank):
    gate = build_gate({"name": "tensor_product", "kwargs": {"first": first, "second": second}})
    assert gate.q == q
    assert schmidt_decompose(gate).rank == rank


def test_block_diagonal_config():
    f = np.exp(2j * np.pi * np.outer(np.arange(8), np.arange(8)) / 8) / np.sqrt(8)
    config = {
        "name": "block_diagonal",
        "kwargs": {"q": 4, "blocks": [complex_to_pairs(f), complex_to_pairs(f)]},
    }
    gate = build_gate(config)
    assert np.allclose(gate.matrix, named_gate("F2x4_block", 4).matrix)
    assert gate.properties["flat_spectrum"]


def test_random_dual_unitary():
    gate = build_gate({"name": "random_dual_unitary", "kwargs": {"q": 3, "seed": 2}})
    assert verify_dual_unitary(gate).passed
    assert schmidt_decompose(gate).rank == 9


@pytest.mark.parametrize("q", [2, 3])
def test_hadamard_lattices(q):
    honeycomb = build_gate(
        {"name": "hadamard", "kwargs": {"lattice": "honeycomb", "q": q, "seed": 4}}
    )
    report = classify_hierarchy(honeycomb, k_max=3)
    assert (report.level_left, report.level_right) == (2, 2)
    sheared = build_gate(
        {"name": "hadamard", "kwargs": {"lattice": "sheared", "q": q, "seed": 4}}
    )
    report = classify_hierarchy(sheared, k_max=3)
    assert (report.level_left, report.level_right) == (2, 3)
    square = build_gate({"name": "hadamard", "kwargs": {"lattice": "square_du", "q": q}})
    assert verify_dual_unitary(square).passed


def test_hadamard_validation():
    with pytest.raises(ValueError, match="unimodular"):
        HadamardMatrix(2, [[1, 1], [1, -0.5]])
    with pytest.raises(ValueError):
        HadamardMatrix(2, [[1, 1], [1, 1]])
    base = complex_hadamard("fourier", q=3)
    dephased = dephase(base, [0.1, 0.2, 0.3], [0.0, 0.5, 1.0])
    assert np.allclose(np.abs(dephased.entries), 1)
    with pytest.raises(ValueError, match="lattice"):
        hadamard_gate("kagome", base)


def test_dressed_legs():
    config = {
        "name": "dressed",
        "kwargs": {
            "gate": {"name": "random_qubit_L3", "kwargs": {"seed": 0}},
            "seed": 5,
            "legs": ["out_left"],
        },
    }
    gate = build_gate(config)
    report = classify_hierarchy(gate, k_max=3)
    assert report.level_right == 3
    assert report.level_left is None
    again = build_gate(config)
    assert np.array_equal(gate.matrix, again.matrix)


@pytest.mark.parametrize(
    "config",
    [
        {"name": "random_qubit_L2", "kwargs": {"seed": 3}},
        {"name": "enphased_cnot", "kwargs": {"q": 3, "seed": 1}},
        {"name": "parity_controlled", "kwargs": {"q": 4, "seed": 2}},
        {"name": "permutation", "kwargs": {"q": 2, "permutation": [0, 1, 3, 2]}},
        {
            "name": "dressed",
            "kwargs": {
                "gate": {"name": "named", "kwargs": {"name": "CNOT"}},
                "seed": 1,
                "legs": ["in_right", "out_left"],
            },
        },
    ],
)
def test_recipe_roundtrip(config):
    gate = build_gate(config)
    assert isinstance(gate.recipe, GateRecipe)
    assert gate.recipe.kind == config["name"]
    rebuilt = gate_from_spec(gate_to_spec(gate))
    assert np.array_equal(rebuilt.matrix, gate.matrix)
    assert np.array_equal(gate.recipe.build().matrix, gate.matrix)


def test_enphased_gates_keep_rank():
    assert schmidt_decompose(
        build_gate({"name": "enphased_cnot", "kwargs": {"q": 3, "seed": 1}})
    ).rank == 3
    assert schmidt_decompose(
        build_gate({"name": "parity_controlled", "kwargs": {"q": 4, "seed": 2}})
    ).rank == 2
    with pytest.raises(ValueError, match="even q"):
        build_gate({"name": "parity_controlled", "kwargs": {"q": 3, "seed": 2}})


def test_explicit_gate_spec(tmpdir):
    gate = random_qubit_L2(9)
    spec = gate_to_spec(gate)
    assert "matrix" in spec
    assert spec["kind"] == "explicit_gate"
    filename = str(tmpdir / "gate.json")
    save_gate_spec(gate, filename)
    loaded = load_gate_spec(filename)
    assert np.array_equal(loaded.matrix, gate.matrix)


def test_gate_config_errors():
    with pytest.raises(ConfigError, match="gate.name"):
        build_gate({"name": "no_such_gate"})
    with pytest.raises(ConfigError, match="kwargs.colour"):
        get_gate({"name": "haar", "kwargs": {"q": 2, "seed": 0, "colour": 1}})
    with pytest.raises(ConfigError, match="missing 'name'"):
        build_gate({"kwargs": {}})
