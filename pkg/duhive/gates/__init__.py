from duhive.gates.base import (
    GateFn,
    GateRecipe,
    build_gate,
    explicit_gate,
    gate_from_spec,
    gate_to_spec,
    get_gate,
    load_gate_spec,
    resolve_gate,
    save_gate_spec,
)
from duhive.gates.composite import (
    block_diagonal,
    block_diagonal_gate,
    dressed,
    haar_gate,
    product_gate,
    random_dual_unitary,
    tensor_product,
    tensor_product_gate,
)
from duhive.gates.controlled import (
    controlled_gate,
    controlled_unitary,
    controlled_x,
    enphased_cnot,
    enphased_permutation,
    generalized_cnot,
    parity_controlled,
    random_controlled,
    random_controlled_phases,
)
from duhive.gates.hadamard import (
    HadamardMatrix,
    complex_hadamard,
    hadamard_gate,
    lattice_gate,
)
from duhive.gates.named import named_gate
from duhive.gates.permutations import permutation_gate, permutation_search_L2
from duhive.gates.qubit import qubit_L2, qubit_L3, random_qubit_L2, random_qubit_L3
from duhive.utils.registry import registry

registry.register_all(
    GateFn,
    {
        "qubit_L2": qubit_L2,
        "random_qubit_L2": random_qubit_L2,
        "qubit_L3": qubit_L3,
        "random_qubit_L3": random_qubit_L3,
        "controlled": controlled_gate,
        "generalized_cnot": generalized_cnot,
        "controlled_x": controlled_x,
        "random_controlled": random_controlled,
        "random_controlled_phases": random_controlled_phases,
        "enphased_cnot": enphased_cnot,
        "parity_controlled": parity_controlled,
        "named": named_gate,
        "hadamard": lattice_gate,
        "tensor_product": tensor_product,
        "block_diagonal": block_diagonal,
        "haar": haar_gate,
        "product": product_gate,
        "random_dual_unitary": random_dual_unitary,
        "dressed": dressed,
        "permutation": permutation_gate,
    },
)
