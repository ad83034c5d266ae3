"""Staircase fixed points of light-cone transfer matrices.

The right staircase ``s_n`` of step height h is the region of cells
``h (j - 1) + 1 <= i <= h n`` for ``j = 1 ... n``. Its lower left edge is closed
with squares, the right inputs of the first column with circles, and the right
outputs of the top row stay open. The left staircase ``s~_n`` is the region
``1 <= i <= h j`` for ``j = 1 ... n``, closed with circles along its upper edge
and squares on the left outputs of the last column, with the left inputs of the
first row open. For gates of level ``h + 1``

    r_k = circle^(n-k) ⊗ s_k,    l_k = s~_k ⊗ square^(n-k)

are right and left fixed points of T_n. For the second level their overlaps
form the Hankel matrix ``<l_i|r_j> = q^{-n} b_1^{max(0, i + j - n)}``.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import scipy.linalg

from duhive.analysis.entangling import purity_B, purity_B1
from duhive.core.networks import GridNetwork
from duhive.core.tensors import CIRCLE, SQUARE, as_gate, boundary_vector
from duhive.opdyn.lctm import lctm_build

HANKEL_TOL = 1e-9
GRAM_RANK_TOL = 1e-8


def right_staircase_cells(n, height=1):
    return [
        (i, j)
        for j in range(1, n + 1)
        for i in range(height * (j - 1) + 1, height * n + 1)
    ]


def left_staircase_cells(n, height=1):
    return [(i, j) for j in range(1, n + 1) for i in range(1, height * j + 1)]


def _staircase(gate, n, height, right):
    q = gate.q
    circle = boundary_vector(CIRCLE, q, 2)
    square = boundary_vector(SQUARE, q, 2)
    if right:
        cells = right_staircase_cells(n, height)
        open_legs = [((height * n, j), "tr") for j in range(1, n + 1)]

        def boundary(cell, leg):
            return circle if leg == "br" and cell[1] == 1 else square

    else:
        cells = left_staircase_cells(n, height)
        open_legs = [((1, j), "bl") for j in range(1, n + 1)]

        def boundary(cell, leg):
            return square if leg == "tl" and cell[1] == n else circle

    network = GridNetwork(q, cells, boundary, open_legs, alpha=2)
    return network.contract(gate).reshape(-1)


def staircase_vector(gate, n, k=2, side="right"):
    """The staircase ``s_n`` ("right") or ``s~_n`` ("left") for level k.

    ``s_0`` and ``s~_0`` are the scalar 1.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side}")
    gate = as_gate(gate)
    if n == 0:
        return np.ones(1, dtype=np.complex128)
    return _staircase(gate, n, k - 1, side == "right")


def _padded(first, second):
    return np.kron(first, second)


@dataclass(eq=False)
class StaircaseBasis:
    """Right and left fixed-point candidates of T_n.

    Attributes:
        n (int): Width of the transfer matrix.
        k (int): Level the staircases are built for.
        right (list[np.ndarray]): ``r_0 ... r_n``.
        left (list[np.ndarray]): ``l_0 ... l_n``.
    """

    n: int
    k: int
    right: List[np.ndarray]
    left: List[np.ndarray]

    def fixed_point_residuals(self, lctm):
        """Largest ``|T r - r|`` and ``|l T - l|`` over the basis."""
        right = max(float(np.max(np.abs(lctm.apply(r) - r))) for r in self.right)
        if lctm.matrix is None:
            return right, None
        left = max(float(np.max(np.abs(l @ lctm.matrix - l))) for l in self.left)
        return right, left


def staircase_basis(gate, n, k=2):
    gate = as_gate(gate)
    q = gate.q
    circle = boundary_vector(CIRCLE, q, 2).data
    square = boundary_vector(SQUARE, q, 2).data
    right = []
    left = []
    for size in range(n + 1):
        pad = np.ones(1, dtype=np.complex128)
        for _ in range(n - size):
            pad = np.kron(pad, circle)
        right.append(_padded(pad, staircase_vector(gate, size, k, "right")))
        pad = np.ones(1, dtype=np.complex128)
        for _ in range(n - size):
            pad = np.kron(pad, square)
        left.append(_padded(staircase_vector(gate, size, k, "left"), pad))
    return StaircaseBasis(n, k, right, left)


@dataclass
class OverlapMatrix:
    """Gram matrix of a staircase basis against its prediction.

    Attributes:
        gram (np.ndarray): ``G_ij = <l_i|r_j>``.
        predicted (np.ndarray): ``q^{-n} b^{max(0, i + j - n)}``.
        b (float): Purity entering the prediction.
        residual (float): ``max|G - predicted| / max|predicted|``.
        hankel_residual (float): Deviation of the scaled gram from the Hankel
            structure ``G_ij = G_{i+1, j-1}``.
        invertible (bool): The predicted matrix is invertible, so the basis is
            linearly independent.
        rank (int): Numerical rank of the scaled measured gram ``q^n G``.
    """

    gram: np.ndarray
    predicted: np.ndarray
    b: float
    residual: float
    hankel_residual: float
    invertible: bool
    rank: int

    @property
    def full_rank(self):
        return self.rank == self.gram.shape[0]

    @property
    def passed(self):
        return self.residual <= HANKEL_TOL


def predicted_overlaps(q, n, b):
    """``q^{-n} b^{max(0, i + j - n)}`` for ``0 <= i, j <= n``."""
    powers = np.maximum(0, np.add.outer(np.arange(n + 1), np.arange(n + 1)) - n)
    return q ** (-float(n)) * np.power(float(b), powers)


def hankel_residual(matrix):
    """Largest difference along the anti-diagonals of `matrix`."""
    size = matrix.shape[0]
    residual = 0.0
    for i in range(size - 1):
        for j in range(1, size):
            residual = max(residual, abs(matrix[i, j] - matrix[i + 1, j - 1]))
    return float(residual)


def staircase_overlaps(gate, n, k=2, direction="right", tol=HANKEL_TOL):
    """Overlap matrix of the staircase basis of width n.

    The prediction uses ``b = B_{k-1} / q²``, which is b_1 for k = 2.
    """
    gate = as_gate(gate)
    q = gate.q
    basis = staircase_basis(gate, n, k)
    gram = np.array([[np.dot(l, r) for r in basis.right] for l in basis.left])
    purity = purity_B1(gate) if k == 2 else purity_B(gate, k - 1, direction)
    b = purity / q**2
    predicted = predicted_overlaps(q, n, b)
    residual = float(np.max(np.abs(gram - predicted)) / np.max(np.abs(predicted)))
    invertible = bool(abs(scipy.linalg.det(predicted * q**n)) > tol)
    rank = int(np.linalg.matrix_rank(gram * q**n, tol=GRAM_RANK_TOL))
    logging.info("Staircase overlaps at n=%d: residual %.3e, rank %d", n, residual, rank)
    return OverlapMatrix(
        gram=gram,
        predicted=predicted,
        b=float(b),
        residual=residual,
        hankel_residual=hankel_residual(gram * q**n),
        invertible=invertible,
        rank=rank,
    )


def leading_space_check(gate, n, k=2):
    """Compares the leading-eigenspace dimension of T_n with the n + 1 staircases.

    Returns ``(leading_dimension, fixed_point_residuals)``.
    """
    lctm = lctm_build(gate, n)
    basis = staircase_basis(gate, n, k)
    return lctm.leading_dimension(), basis.fixed_point_residuals(lctm)
