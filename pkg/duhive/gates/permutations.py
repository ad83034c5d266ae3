"""Search over bipartite permutation gates for members of the second level.

A permutation gate maps the basis state ``|r>`` to ``|π(r)>`` with
``r = a q + b``. Its Schmidt rank is the number of linearly independent q×q
blocks, so ranks are computed from batched singular values of the reshuffled
matrices before the hierarchy condition is contracted for the flat candidates.
"""
import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from duhive.analysis.hierarchy import verify_Lk
from duhive.core.tensors import UnitaryGate

FLAT_TOL = 1e-8
MAX_EXHAUSTIVE_Q = 3


def permutation_matrix(permutation):
    permutation = np.asarray(permutation, dtype=int)
    dim = len(permutation)
    matrix = np.zeros((dim, dim))
    matrix[permutation, np.arange(dim)] = 1.0
    return matrix


def permutation_gate(q: int, permutation: list):
    """Gate sending ``|r>`` to ``|permutation[r]>``."""
    permutation = [int(p) for p in permutation]
    if sorted(permutation) != list(range(q * q)):
        raise ValueError(f"expected a permutation of 0..{q * q - 1}")
    return UnitaryGate(q, permutation_matrix(permutation))


def batched_schmidt(permutations, q):
    """Singular values of the reshuffled matrices, shape ``(batch, q²)``."""
    permutations = np.asarray(permutations, dtype=int)
    batch, dim = permutations.shape
    matrices = np.zeros((batch, dim, dim))
    matrices[np.arange(batch)[:, None], permutations, np.arange(dim)[None, :]] = 1.0
    reshuffled = (
        matrices.reshape(batch, q, q, q, q).transpose(0, 1, 3, 2, 4).reshape(batch, dim, dim)
    )
    return np.linalg.svd(reshuffled, compute_uv=False)


def _flat_ranks(values, tol=FLAT_TOL):
    """Rank of each spectrum, or 0 when the nonzero values are not all equal."""
    top = values[:, :1]
    nonzero = values > tol * top
    ranks = nonzero.sum(axis=1)
    smallest = np.where(nonzero, values, np.inf).min(axis=1)
    flat = top[:, 0] / smallest - 1 <= tol
    return np.where(flat, ranks, 0)


def category(rank, q):
    if rank == 1:
        return "product"
    if rank == q * q:
        return "dual_unitary"
    return "entangling"


@dataclass
class PermutationSearchResult:
    """Permutation gates of the second level found by a search.

    Attributes:
        q (int): Local dimension.
        mode (str): "exhaustive" or "sampled".
        examined (int): Number of permutations examined.
        flat (int): Number with a flat Schmidt spectrum.
        members (list[tuple]): ``(permutation, rank, category)`` of every member of
            the second level in both directions.
        histogram (dict): Rank counts among entangling members.
        all_ranks_divide (bool): Every member rank divides q².
    """

    q: int
    mode: str
    examined: int
    flat: int
    members: List[Tuple[tuple, int, str]] = field(default_factory=list)
    histogram: Dict[int, int] = field(default_factory=dict)
    all_ranks_divide: bool = True

    def merge(self, other):
        self.examined += other.examined
        self.flat += other.flat
        self.members += other.members
        self.histogram = dict(Counter(self.histogram) + Counter(other.histogram))
        self.all_ranks_divide = self.all_ranks_divide and other.all_ranks_divide
        return self


def _classify_batch(permutations, q, mode, tol):
    result = PermutationSearchResult(q, mode, len(permutations), 0)
    if not len(permutations):
        return result
    ranks = _flat_ranks(batched_schmidt(permutations, q))
    for permutation, rank in zip(permutations, ranks):
        if rank == 0:
            continue
        result.flat += 1
        gate = UnitaryGate(q, permutation_matrix(permutation))
        if not (verify_Lk(gate, 2, "left", tol) and verify_Lk(gate, 2, "right", tol)):
            continue
        rank = int(rank)
        kind = category(rank, q)
        result.members.append((tuple(int(p) for p in permutation), rank, kind))
        if kind == "entangling":
            result.histogram[rank] = result.histogram.get(rank, 0) + 1
        if (q * q) % rank:
            result.all_ranks_divide = False
    return result


def _exhaustive_range(q, start, stop, chunk_size, tol):
    result = PermutationSearchResult(q, "exhaustive", 0, 0)
    source = itertools.islice(itertools.permutations(range(q * q)), start, stop)
    while True:
        chunk = list(itertools.islice(source, chunk_size))
        if not chunk:
            return result
        result.merge(_classify_batch(np.array(chunk), q, "exhaustive", tol))


def permutation_search_L2(
    q,
    mode="exhaustive",
    samples=10**6,
    seed=0,
    chunk_size=4096,
    workers=1,
    tol=1e-10,
):
    """Classifies permutation gates by Schmidt rank and second-level membership.

    Args:
        q (int): Local dimension.
        mode (str): "exhaustive" enumerates all (q²)! permutations in lexicographic
            order and is refused for q > 3. "sampled" draws `samples` uniform
            permutations.
        samples (int): Number of draws in sampled mode.
        seed (int): Seed of the sampled mode.
        chunk_size (int): Permutations per batched SVD.
        workers (int): Processes splitting the exhaustive index range.
        tol (float): Residual threshold of the hierarchy check.
    """
    if mode == "exhaustive":
        if q > MAX_EXHAUSTIVE_Q:
            raise ValueError(
                f"exhaustive search is refused for q={q} > {MAX_EXHAUSTIVE_Q}, "
                "use mode='sampled'"
            )
        total = math.factorial(q * q)
        bounds = np.linspace(0, total, max(1, workers) + 1).astype(int)
        ranges = list(zip(bounds[:-1], bounds[1:]))
        logging.info(
            "Searching %d permutation gates at q=%d with %d workers", total, q, len(ranges)
        )
        if len(ranges) == 1:
            parts = [_exhaustive_range(q, 0, total, chunk_size, tol)]
        else:
            with ProcessPoolExecutor(max_workers=len(ranges)) as executor:
                futures = [
                    executor.submit(
                        _exhaustive_range, q, int(start), int(stop), chunk_size, tol
                    )
                    for start, stop in ranges
                ]
                parts = [future.result() for future in futures]
        result = PermutationSearchResult(q, mode, 0, 0)
        for part in parts:
            result.merge(part)
        return result
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        result = PermutationSearchResult(q, mode, 0, 0)
        remaining = samples
        while remaining > 0:
            size = min(chunk_size, remaining)
            batch = np.argsort(rng.random((size, q * q)), axis=1)
            result.merge(_classify_batch(batch, q, mode, tol))
            remaining -= size
        return result
    raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode}")
