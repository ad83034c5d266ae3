import numpy as np

from duhive.core.networks import GridNetwork
from duhive.core.tensors import CIRCLE, as_gate, boundary_vector

RANK_CUTOFF = 1e-9


def influence_cells(t):
    """Cells ``1 <= j <= i <= t`` of the half circuit right of the time-like cut."""
    return [(i, j) for i in range(1, t + 1) for j in range(1, i + 1)]


def influence_legs(t):
    """Interface legs in chronological order."""
    legs = []
    for i in range(1, t + 1):
        legs += [((i, i), "bl"), ((i, i), "tl")]
    return legs


def influence_matrix(gate, t):
    """Right influence matrix on the 2t legs crossing the cut at v = 0.

    The half circuit is contracted at replica count 1 with circles on every other
    dangling leg. Returns an array of shape ``(q²,) * 2t``.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    gate = as_gate(gate)
    circle = boundary_vector(CIRCLE, gate.q, 1)
    network = GridNetwork(
        gate.q, influence_cells(t), {"default": circle}, influence_legs(t), alpha=1
    )
    return network.contract(gate)


def temporal_ranks(tensor, cutoff=RANK_CUTOFF):
    """Schmidt ranks of a chain tensor across every cut between neighbouring legs."""
    dims = tensor.shape
    ranks = []
    for cut in range(1, len(dims)):
        matrix = tensor.reshape(int(np.prod(dims[:cut])), -1)
        values = np.linalg.svd(matrix, compute_uv=False)
        ranks.append(int(np.sum(values > cutoff * values[0])))
    return ranks


def im_area_law_check(gate, t, v=0, cutoff=RANK_CUTOFF):
    """Temporal-cut Schmidt ranks of the influence matrix after t odd layers.

    Only the cut along ``v = 0`` is supported.
    """
    if v != 0:
        raise ValueError(f"only v=0 influence matrices are supported, got v={v}")
    return temporal_ranks(influence_matrix(gate, t), cutoff)
