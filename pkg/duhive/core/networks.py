"""Folded brickwork networks on the light-cone grid.

Cells of the grid are labelled ``(i, j)`` with ``i, j >= 1``. Cell ``(i, j)`` sits at
layer ``i + j - 1`` on the bond ``(i - j, i - j + 1)``. Its four legs are ``"tl"``,
``"tr"`` (outputs) and ``"bl"``, ``"br"`` (inputs). The output ``tr`` of ``(i, j)``
feeds ``bl`` of ``(i + 1, j)`` and the output ``tl`` feeds ``br`` of ``(i, j + 1)``.
"""
import logging
from functools import lru_cache

import numpy as np
import opt_einsum as oe

from duhive.core.tensors import UnitaryGate, _four_leg, boundary_vector, mirror
from duhive.utils.utils import check_budget

LEGS = ("tl", "tr", "bl", "br")
OUTPUT_LEGS = ("tl", "tr")
INPUT_LEGS = ("bl", "br")


def neighbour(cell, leg):
    """Returns the ``(cell, leg)`` on the other end of a link."""
    i, j = cell
    if leg == "tr":
        return (i + 1, j), "bl"
    if leg == "bl":
        return (i - 1, j), "tr"
    if leg == "tl":
        return (i, j + 1), "br"
    if leg == "br":
        return (i, j - 1), "tl"
    raise ValueError(f"unknown leg {leg}")


def gate_cell(layer, bond):
    """Cell of the gate acting at `layer` on sites ``(bond, bond + 1)``.

    Layer 1 holds the gates on even bonds. Sites and bonds are measured from the
    origin of the light cone.
    """
    if layer < 1 or (layer + bond) % 2 == 0:
        raise ValueError(f"no gate at layer {layer} on bond {bond}")
    return (layer + bond + 1) // 2, (layer - bond + 1) // 2


def site_leg(site, layer, side="in"):
    """Leg of the gate at `layer` touching `site`.

    Args:
        site (int): Lattice site.
        layer (int): Layer index, starting at 1.
        side (str): "in" for the leg entering the layer, "out" for the one leaving.
    """
    if side not in ("in", "out"):
        raise ValueError(f"side must be 'in' or 'out', got {side}")
    if (site + layer) % 2 == 1:
        return gate_cell(layer, site), "bl" if side == "in" else "tl"
    return gate_cell(layer, site - 1), "br" if side == "in" else "tr"


def rectangle(m, n):
    """Cells ``1 <= i <= m``, ``1 <= j <= n`` in row-major order."""
    return [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]


class GridNetwork:
    """A finite set of folded gates on the grid, closed by boundary tensors.

    Every leg with no partner inside the cell set is dangling. A dangling leg is
    either left open, closed by a vector from `boundary`, or closed jointly with
    other dangling legs by a tensor from `joint`. The network is compiled once to
    an opt_einsum expression and can then be contracted with any gate of the same
    local dimension.

    Args:
        q (int): Local dimension.
        cells (list[tuple[int, int]]): Cells holding a folded gate.
        boundary (callable | dict): Maps ``(cell, leg)`` to a vector of dimension
            q^{2α}. A dict may hold a ``"default"`` entry.
        open_legs (list[tuple]): Dangling legs left open, in output order.
        alpha (int): Replica count.
        joint (list[tuple[list, np.ndarray]]): Groups of dangling legs closed by a
            single tensor of shape ``(q^{2α},) * len(legs)``.
    """

    def __init__(self, q, cells, boundary, open_legs=(), alpha=1, joint=()):
        self._q = q
        self._alpha = alpha
        self._cells = list(dict.fromkeys(tuple(cell) for cell in cells))
        if not self._cells:
            raise ValueError("a network needs at least one cell")
        cell_set = set(self._cells)
        self._open_legs = [(tuple(cell), leg) for cell, leg in open_legs]
        leg_dim = q ** (2 * alpha)

        symbols = {}

        def edge(cell, leg):
            if leg in INPUT_LEGS:
                other = neighbour(cell, leg)
                if other[0] in cell_set:
                    return other
            return cell, leg

        def leg_symbols(key):
            if key not in symbols:
                start = len(symbols) * 2 * alpha
                symbols[key] = [oe.get_symbol(start + s) for s in range(2 * alpha)]
            return symbols[key]

        dangling = []
        terms = []
        for cell in self._cells:
            for r in range(alpha):
                ket = "".join(leg_symbols(edge(cell, leg))[2 * r] for leg in LEGS)
                bra = "".join(leg_symbols(edge(cell, leg))[2 * r + 1] for leg in LEGS)
                terms += [ket, bra]
            for leg in LEGS:
                if leg in OUTPUT_LEGS and neighbour(cell, leg)[0] in cell_set:
                    continue
                if leg in INPUT_LEGS and neighbour(cell, leg)[0] in cell_set:
                    continue
                dangling.append((cell, leg))
        dangling_set = set(dangling)

        closed = set()
        constants = []
        for legs, tensor in joint:
            legs = [(tuple(cell), leg) for cell, leg in legs]
            for key in legs:
                if key not in dangling_set:
                    raise ValueError(f"joint boundary leg {key} is not dangling")
                closed.add(key)
            tensor = np.asarray(tensor, dtype=np.complex128)
            if tensor.size != leg_dim ** len(legs):
                raise ValueError(
                    f"joint boundary on {len(legs)} legs must have "
                    f"{leg_dim ** len(legs)} entries, got {tensor.size}"
                )
            terms.append("".join("".join(leg_symbols(key)) for key in legs))
            constants.append(tensor.reshape((q,) * (2 * alpha * len(legs))))

        for key in self._open_legs:
            if key not in dangling_set:
                raise ValueError(f"open leg {key} is not dangling")
            if key in closed:
                raise ValueError(f"open leg {key} is also closed by a joint boundary")
        open_set = set(self._open_legs)

        for key in dangling:
            if key in closed or key in open_set:
                continue
            vector = _lookup(boundary, key)
            vector = np.asarray(getattr(vector, "data", vector), dtype=np.complex128)
            if vector.shape != (leg_dim,):
                raise ValueError(
                    f"boundary vector on {key} must have shape {(leg_dim,)}, "
                    f"got {vector.shape}"
                )
            terms.append("".join(leg_symbols(key)))
            constants.append(vector.reshape((q,) * (2 * alpha)))

        output = "".join("".join(leg_symbols(key)) for key in self._open_legs)
        self._equation = ",".join(terms) + "->" + output
        self._constants = constants
        self._n_gate_terms = 2 * alpha * len(self._cells)
        shapes = [(q,) * 4] * self._n_gate_terms + [c.shape for c in constants]
        self._path, info = oe.contract_path(
            self._equation, *shapes, shapes=True, optimize="greedy"
        )
        check_budget(
            max(int(info.largest_intermediate), leg_dim ** len(self._open_legs)),
            f"network of {len(self._cells)} cells at q={q}, alpha={alpha}",
        )
        self._expression = oe.contract_expression(
            self._equation, *shapes, optimize=self._path
        )
        logging.debug(
            "Compiled network with %d cells, %d open legs, largest intermediate %d",
            len(self._cells),
            len(self._open_legs),
            int(info.largest_intermediate),
        )

    @property
    def cells(self):
        return list(self._cells)

    @property
    def open_legs(self):
        return list(self._open_legs)

    def contract(self, gate):
        """Contracts the network with copies of `gate`.

        Returns a complex scalar when no leg is open, otherwise an array of shape
        ``(q^{2α},) * len(open_legs)``.
        """
        q, tensor = _four_leg(gate)
        if q != self._q:
            raise ValueError(f"network is built for q={self._q}, gate has q={q}")
        conj = tensor.conj()
        operands = [tensor, conj] * (self._n_gate_terms // 2) + self._constants
        result = self._expression(*operands)
        if not self._open_legs:
            return complex(result)
        leg_dim = q ** (2 * self._alpha)
        return np.asarray(result).reshape((leg_dim,) * len(self._open_legs))


def _lookup(boundary, key):
    if callable(boundary):
        return boundary(*key)
    if key in boundary:
        return boundary[key]
    if "default" in boundary:
        return boundary["default"]
    raise ValueError(f"no boundary vector for dangling leg {key}")


def contract_grid(gate, cells, boundary, open_legs=(), alpha=1, joint=()):
    """Builds a :py:class:`GridNetwork` and contracts it once with `gate`."""
    q, _ = _four_leg(gate)
    network = GridNetwork(q, cells, boundary, open_legs, alpha=alpha, joint=joint)
    return network.contract(gate)


FOLDED_PAIR_LIMIT = 1024


def fold(gate, alpha):
    """Folded gate ``(U ⊗ U*)^{⊗α}`` as a ``(q^{2α},) * 4`` tensor.

    Each leg is a composite of 2α indices of size q, replica r contributing its
    ket at position 2r and its bra at 2r + 1, the layout of boundary vectors.
    """
    q, tensor = _four_leg(gate)
    factors = [tensor, tensor.conj()] * alpha
    symbols = [[oe.get_symbol(4 * f + a) for a in range(4)] for f in range(2 * alpha)]
    inputs = ",".join("".join(legs) for legs in symbols)
    output = "".join(symbols[f][a] for a in range(4) for f in range(2 * alpha))
    leg_dim = q ** (2 * alpha)
    return oe.contract(f"{inputs}->{output}", *factors).reshape((leg_dim,) * 4)


class RectangleSweep:
    """Row-by-row contraction of an ``m x n`` rectangle of folded gates.

    The frontier holds the n bottom legs of the current row, ``q^{2αn}`` entries,
    and one extra carry leg while a row is being added. Gates are applied to the
    two leading legs of the frontier, after which the finished output leg is
    rotated to the back, so every gate is a single matrix product. When the
    folded pair of legs exceeds ``FOLDED_PAIR_LIMIT`` the replicas are applied
    one factor at a time instead. Cost is linear in m, so callers put the shorter
    side in n.

    Args:
        gate (UnitaryGate | np.ndarray): Gate of the network.
        alpha (int): Replica count.
        bottom_left (list): Vectors on ``bl`` of cells ``(1, 1..n)``.
    """

    def __init__(self, gate, alpha, bottom_left):
        self._q, self._tensor = _four_leg(gate)
        self._alpha = alpha
        self._n = len(bottom_left)
        if self._n < 1:
            raise ValueError("a sweep needs at least one column cell")
        q = self._q
        self._leg_dim = q ** (2 * alpha)
        pair_dim = self._leg_dim**2
        folded = pair_dim <= FOLDED_PAIR_LIMIT
        check_budget(
            3 * self._leg_dim ** (self._n + 1) + (pair_dim**2 if folded else 0),
            f"rectangle sweep of width {self._n} at q={q}, alpha={alpha}",
        )
        self._pair = None
        if folded:
            # (carry, site) in, (site, carry) out
            self._pair = fold(gate, alpha).transpose(1, 0, 3, 2).reshape(
                pair_dim, pair_dim
            )
        state = np.ones(1, dtype=np.complex128)
        for vector in bottom_left:
            state = np.kron(state, self._leg(vector))
        self._state = state
        self.columns = 0

    @classmethod
    def from_state(cls, gate, alpha, state):
        """Starts a sweep from an arbitrary state on the n bottom legs."""
        q, _ = _four_leg(gate)
        leg_dim = q ** (2 * alpha)
        state = np.asarray(state, dtype=np.complex128).reshape(-1)
        n = int(round(np.log(state.size) / np.log(leg_dim)))
        if leg_dim**n != state.size:
            raise ValueError(f"state of size {state.size} is not a power of {leg_dim}")
        sweep = cls(gate, alpha, [np.zeros(leg_dim)] * n)
        sweep._state = state.copy()
        return sweep

    def _leg(self, vector):
        vector = np.asarray(getattr(vector, "data", vector), dtype=np.complex128).reshape(-1)
        if vector.size != self._leg_dim:
            raise ValueError(
                f"boundary vector must have {self._leg_dim} entries, got {vector.size}"
            )
        return vector

    def _apply_pair(self, state):
        """Applies the gate to the two leading legs ``(carry, site)``."""
        if self._pair is not None:
            return (self._pair @ state.reshape(self._leg_dim**2, -1)).reshape(-1)
        q, width = self._q, 2 * self._alpha
        carry_in = [oe.get_symbol(f) for f in range(width)]
        site_in = [oe.get_symbol(width + f) for f in range(width)]
        site_out = [oe.get_symbol(2 * width + f) for f in range(width)]
        carry_out = [oe.get_symbol(3 * width + f) for f in range(width)]
        rest = oe.get_symbol(4 * width)
        terms = [carry_out[f] + site_out[f] + site_in[f] + carry_in[f] for f in range(width)]
        equation = (
            ",".join(terms)
            + ","
            + "".join(carry_in + site_in)
            + rest
            + "->"
            + "".join(site_out + carry_out)
            + rest
        )
        factors = [self._tensor, self._tensor.conj()] * self._alpha
        view = state.reshape((q,) * (2 * width) + (-1,))
        return oe.contract(equation, *factors, view).reshape(-1)

    def step(self, bottom_right, top_left):
        """Adds one row: n gates closed by `bottom_right` on the first cell and
        `top_left` on the last."""
        leg_dim = self._leg_dim
        state = np.kron(self._leg(bottom_right), self._state)
        for _ in range(self._n):
            state = self._apply_pair(state)
            # the finished output leg moves behind the outputs of earlier cells
            state = np.ascontiguousarray(state.reshape(leg_dim, -1).T).reshape(-1)
        self._state = self._leg(top_left) @ state.reshape(leg_dim, -1)
        self.columns += 1
        return self

    def close(self, top_right):
        """Contracts the current bottom legs with `top_right` and returns a scalar."""
        if len(top_right) != self._n:
            raise ValueError(f"expected {self._n} closing vectors, got {len(top_right)}")
        state = self._state
        for vector in reversed(top_right):
            state = state.reshape(-1, self._leg_dim) @ self._leg(vector)
        return complex(state.reshape(()))

    def vector(self):
        """Current state as an array of shape ``(q^{2α},) * n``."""
        return self._state.reshape((self._leg_dim,) * self._n)


def contract_rectangle(
    gate, m, n, alpha, bottom_left, bottom_right, top_left, top_right
):
    """Contracts an ``m x n`` rectangle with per-leg boundary vectors.

    Args:
        gate (UnitaryGate | np.ndarray): Gate of the network.
        m (int): Rows, extent along i.
        n (int): Columns, extent along j.
        alpha (int): Replica count.
        bottom_left (list): n vectors on ``bl`` of cells ``(1, j)``.
        bottom_right (list): m vectors on ``br`` of cells ``(i, 1)``.
        top_left (list): m vectors on ``tl`` of cells ``(i, n)``.
        top_right (list): n vectors on ``tr`` of cells ``(m, j)``.
    """
    if m < 1 or n < 1:
        raise ValueError(f"rectangle needs m, n >= 1, got {m}x{n}")
    if (len(bottom_left), len(top_right)) != (n, n) or (
        len(bottom_right),
        len(top_left),
    ) != (m, m):
        raise ValueError("boundary lists do not match the rectangle size")
    if n > m:
        gate = mirror(gate if isinstance(gate, UnitaryGate) else np.asarray(gate))
        m, n = n, m
        bottom_left, bottom_right = bottom_right, bottom_left
        top_left, top_right = top_right, top_left
    sweep = RectangleSweep(gate, alpha, bottom_left)
    for i in range(m):
        sweep.step(bottom_right[i], top_left[i])
    return sweep.close(top_right)


@lru_cache(maxsize=64)
def _cached_network(q, cells, kinds, default, open_legs, alpha):
    boundary = {key: boundary_vector(kind, q, alpha) for key, kind in kinds}
    boundary["default"] = boundary_vector(default, q, alpha)
    return GridNetwork(q, list(cells), boundary, list(open_legs), alpha)


def cached_network(q, cells, kinds, default="circle", open_legs=(), alpha=1):
    """Compiles a network once per structure and reuses it.

    Args:
        q (int): Local dimension.
        cells (list): Cells of the network.
        kinds (dict): Maps ``(cell, leg)`` to "circle" or "square".
        default (str): Kind used on dangling legs missing from `kinds`.
        open_legs (list): Dangling legs left open.
        alpha (int): Replica count.
    """
    return _cached_network(
        q,
        tuple(tuple(cell) for cell in cells),
        tuple(sorted(kinds.items())),
        default,
        tuple(open_legs),
        alpha,
    )
