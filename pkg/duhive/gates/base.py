import json
from copy import deepcopy
from dataclasses import dataclass, field

import numpy as np

from duhive.core.tensors import UnitaryGate, local_dimension
from duhive.utils.registry import ConfigError, Registrable, registry


class GateFn(Registrable):
    """A wrapper for callables that produce gates.

    These wrapped callables can be partially initialized through configuration
    files or command line arguments. Calling the partial returned by `get_gate`
    builds the :py:class:`~duhive.core.tensors.UnitaryGate`.
    """

    @classmethod
    def type_name(cls):
        """
        Returns:
            "gate"
        """
        return "gate"


@dataclass(frozen=True)
class GateRecipe:
    """Provenance of a gate.

    A recipe is the expanded ``{name, kwargs}`` config of a registered gate
    constructor. Replaying it through :py:func:`build_gate` rebuilds the gate
    bit-exactly.

    Attributes:
        kind (str): Registered constructor name.
        params (dict): Keyword arguments of the constructor, json-compatible.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def to_config(self):
        return {"name": self.kind, "kwargs": deepcopy(self.params)}

    @classmethod
    def from_config(cls, config):
        return cls(config["name"], deepcopy(config.get("kwargs") or {}))

    def build(self):
        return build_gate(self.to_config())


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def build_gate(config, prefix="gate"):
    """Builds a gate from a ``{name, kwargs}`` config and attaches its recipe.

    Args:
        config (dict | GateRecipe): Gate config or recipe.
        prefix (str): Dotted path of the config node, used for command line
            overrides and error messages.
    """
    if isinstance(config, GateRecipe):
        config = config.to_config()
    gate_fn, expanded_config = get_gate(config, prefix)
    gate = gate_fn()
    if not isinstance(gate, UnitaryGate):
        raise ConfigError(prefix, f"constructor '{config['name']}' did not return a gate")
    expanded_config["kwargs"] = _jsonable(
        {
            key: value
            for key, value in expanded_config["kwargs"].items()
            if not callable(value)
        }
    )
    return gate.with_recipe(GateRecipe.from_config(expanded_config))


def resolve_gate(gate):
    """Accepts a gate, a gate partial from the registry, a config or a recipe."""
    if isinstance(gate, UnitaryGate):
        return gate
    if isinstance(gate, (dict, GateRecipe)):
        return build_gate(gate)
    if callable(gate):
        return gate()
    return UnitaryGate(local_dimension(gate), gate)


def complex_to_pairs(matrix):
    """Row-major list of ``[re, im]`` pairs, one row per matrix row."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    return np.stack([matrix.real, matrix.imag], axis=-1).tolist()


def pairs_to_complex(pairs, shape):
    """Inverse of :py:func:`complex_to_pairs`. Accepts nested or flat pair lists."""
    values = np.asarray(pairs, dtype=np.float64)
    if values.size != 2 * int(np.prod(shape)):
        raise ValueError(
            f"expected {int(np.prod(shape))} [re, im] pairs, got {values.size // 2}"
        )
    values = values.reshape(tuple(shape) + (2,))
    return values[..., 0] + 1j * values[..., 1]


def explicit_gate(q: int, matrix: list):
    """Gate given entry by entry.

    Args:
        q (int): Local dimension.
        matrix (list): q²×q² matrix as ``[re, im]`` pairs in row-major order.
    """
    return UnitaryGate(q, pairs_to_complex(matrix, (q * q, q * q)))


def gate_to_spec(gate, include_matrix=False):
    """JSON gate spec ``{q, kind, params[, matrix]}``.

    Gates without a recipe always carry their matrix.
    """
    spec = {"q": gate.q}
    if gate.recipe is not None:
        spec["kind"] = gate.recipe.kind
        spec["params"] = deepcopy(gate.recipe.params)
    else:
        spec["kind"] = "explicit_gate"
        include_matrix = True
    if include_matrix:
        spec["matrix"] = complex_to_pairs(gate.matrix)
    return spec


def gate_from_spec(spec):
    """Rebuilds a gate from :py:func:`gate_to_spec` output.

    The recipe is replayed when present. An explicit matrix is used otherwise.
    """
    if spec.get("kind", "explicit_gate") == "explicit_gate":
        return build_gate(
            {"name": "explicit_gate", "kwargs": {"q": spec["q"], "matrix": spec["matrix"]}}
        )
    gate = build_gate({"name": spec["kind"], "kwargs": spec.get("params") or {}})
    if gate.q != spec["q"]:
        raise ConfigError("q", f"recipe builds q={gate.q}, spec says q={spec['q']}")
    return gate


def save_gate_spec(gate, filename, include_matrix=True):
    with open(filename, "w") as f:
        json.dump(gate_to_spec(gate, include_matrix), f, indent=2)


def load_gate_spec(filename):
    with open(filename) as f:
        return gate_from_spec(json.load(f))


registry.register("explicit_gate", explicit_gate, GateFn)

get_gate = getattr(registry, f"get_{GateFn.type_name()}")
