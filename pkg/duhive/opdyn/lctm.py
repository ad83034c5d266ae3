"""Light-cone transfer matrices.

``T_n`` is one row of n folded gates ``(1, 1) ... (1, n)`` at replica count 2,
with a circle entering the right input of the first gate and a square closing
the left output of the last one, times q. It maps the n left inputs to the n
right outputs, i.e. advances the OTOC network by one step along the right-moving
light ray. The all-circle vector is a fixed point by unitarity.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import scipy.linalg

from duhive.core.networks import GridNetwork, RectangleSweep
from duhive.core.tensors import CIRCLE, SQUARE, UnitaryGate, as_gate, boundary_vector, mirror
from duhive.utils.utils import check_budget

LEADING_TOL = 1e-8
RANK_THRESHOLDS = (1e-6, 1e-7, 1e-8, 1e-9, 1e-10)


@dataclass(eq=False)
class LCTM:
    """Light-cone transfer matrix of width n.

    Attributes:
        gate (UnitaryGate): Gate of the circuit, mirrored for the left front.
        n (int): Width.
        matrix (np.ndarray): Dense ``q^{4n} x q^{4n}`` matrix, None when built
            matrix-free.
    """

    gate: UnitaryGate
    n: int
    matrix: Optional[np.ndarray] = None

    @property
    def q(self):
        return self.gate.q

    @property
    def dim(self):
        return self.q ** (4 * self.n)

    def apply(self, vector):
        """``T_n |vector>`` without assembling the matrix."""
        if self.matrix is not None:
            return self.matrix @ np.asarray(vector).reshape(-1)
        circle = boundary_vector(CIRCLE, self.q, 2)
        square = boundary_vector(SQUARE, self.q, 2)
        sweep = RectangleSweep.from_state(self.gate, 2, vector)
        sweep.step(circle, square)
        return self.q * sweep.vector().reshape(-1)

    def circle_vector(self):
        return _product(boundary_vector(CIRCLE, self.q, 2).data, self.n)

    def square_vector(self):
        return _product(boundary_vector(SQUARE, self.q, 2).data, self.n)

    def fixed_point_residual(self):
        circles = self.circle_vector()
        return float(np.max(np.abs(self.apply(circles) - circles)))

    def eigenvalues(self):
        if self.matrix is None:
            raise ValueError("eigenvalues need a dense LCTM")
        values = scipy.linalg.eigvals(self.matrix)
        return values[np.argsort(-np.abs(values))]

    def spectral_radius(self):
        return float(np.abs(self.eigenvalues()[0]))

    def leading_dimension(self, tol=LEADING_TOL):
        """Number of eigenvalues with modulus within `tol` of 1."""
        return int(np.sum(np.abs(np.abs(self.eigenvalues()) - 1) <= tol))

    def power_iteration(self, vector, steps):
        """Applies T_n `steps` times and returns the norms along the way."""
        norms = []
        vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
        for _ in range(steps):
            vector = self.apply(vector)
            norms.append(float(np.linalg.norm(vector)))
        return vector, norms


def _product(vector, n):
    result = np.ones(1, dtype=np.complex128)
    for _ in range(n):
        result = np.kron(result, vector)
    return result


def lctm_build(gate, n, dense=True, direction="right"):
    """Builds T_n.

    Args:
        gate (UnitaryGate): Gate of the circuit.
        n (int): Width, at least 1.
        dense (bool): Assemble the matrix. Matrix-free LCTMs support `apply` only.
        direction (str): "right" for the right-moving front, "left" for the
            mirrored circuit.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', got {direction}")
    gate = as_gate(gate)
    if direction == "left":
        gate = mirror(gate)
    if not dense:
        check_budget(3 * gate.q ** (4 * (n + 1)), f"matrix-free LCTM width {n}")
        return LCTM(gate, n)
    dim = gate.q ** (4 * n)
    check_budget(dim * dim, f"dense LCTM width {n}")
    cells = [(1, j) for j in range(1, n + 1)]
    boundary = {
        ((1, 1), "br"): boundary_vector(CIRCLE, gate.q, 2),
        ((1, n), "tl"): boundary_vector(SQUARE, gate.q, 2),
    }
    outputs = [(cell, "tr") for cell in cells]
    inputs = [(cell, "bl") for cell in cells]
    network = GridNetwork(gate.q, cells, boundary, outputs + inputs, alpha=2)
    matrix = gate.q * network.contract(gate).reshape(dim, dim)
    return LCTM(gate, n, matrix)


@dataclass
class JordanProfile:
    """Largest Jordan block of the non-leading part of T_n per width.

    Attributes:
        sizes (dict): n to block size m at the reference threshold.
        stable (dict): n to whether every threshold of the sweep gives the same m.
        rank_sequences (dict): n to ranks of ``R^p`` for ``p = 0, 1, ...``.
        leading (dict): n to the leading-eigenspace dimension.
    """

    sizes: Dict[int, int] = field(default_factory=dict)
    stable: Dict[int, bool] = field(default_factory=dict)
    rank_sequences: Dict[int, List[int]] = field(default_factory=dict)
    leading: Dict[int, int] = field(default_factory=dict)


def non_leading_part(matrix, tol=LEADING_TOL):
    """``R = T (1 - P)`` with P the spectral projector on eigenvalues of modulus 1.

    Returns R and the dimension of the leading eigenspace.
    """
    values, left, right = scipy.linalg.eig(matrix, left=True, right=True)
    leading = np.abs(np.abs(values) - 1) <= tol
    if not np.any(leading):
        return matrix.copy(), 0
    vr = right[:, leading]
    vl = left[:, leading]
    projector = vr @ np.linalg.solve(vl.conj().T @ vr, vl.conj().T)
    return matrix - matrix @ projector, int(np.sum(leading))


class _PowerSpectra:
    """Singular values of ``R^p`` for ``p = 1, 2, ...`` from one SVD of R.

    With ``R = U S V^H`` truncated to its numerical rank r,
    ``R^p = U (K^{p-1} S) V^H`` for the r x r matrix ``K = S V^H U``, so each
    power costs an r x r product and SVD.
    """

    def __init__(self, remainder):
        self.dim = remainder.shape[0]
        u, s, vh = np.linalg.svd(remainder)
        self.norm = float(s[0]) if s.size else 0.0
        keep = s > self.norm * self.dim * np.finfo(float).eps
        u, s, vh = u[:, keep], s[keep], vh[keep]
        self._kernel = (s[:, None] * vh) @ u
        self._current = np.diag(s).astype(np.complex128)
        self._values = []

    def __getitem__(self, p):
        while len(self._values) < p:
            if self._values:
                self._current = self._kernel @ self._current
            if self._current.size:
                self._values.append(np.linalg.svd(self._current, compute_uv=False))
            else:
                self._values.append(np.zeros(0))
        return self._values[p - 1]


def _block_size(spectra, threshold, p_max):
    ranks = [spectra.dim]
    for p in range(1, p_max + 2):
        scale = max(spectra.norm**p, np.finfo(float).tiny)
        ranks.append(int(np.sum(spectra[p] > threshold * scale)))
        if ranks[-1] == ranks[-2]:
            return p - 1 if p > 1 else 1, ranks
    return p_max, ranks


def jordan_profile(
    gate,
    n_max,
    direction="right",
    threshold=1e-8,
    thresholds=RANK_THRESHOLDS,
    logger=None,
    prefix="jordan",
):
    """Largest Jordan block of the nilpotent remainder of T_n for n = 1 ... n_max.

    The block size is the smallest p with ``rank(R^p) = rank(R^{p+1})``. Ranks use
    the tolerance ``threshold * ||R||^p`` on singular values computed once per
    power and shared by every threshold. The profile is marked stable for a
    width when every threshold of the sweep agrees.
    """
    gate = as_gate(gate)
    profile = JordanProfile()
    for n in range(1, n_max + 1):
        matrix = lctm_build(gate, n, direction=direction).matrix
        remainder, leading = non_leading_part(matrix)
        p_max = matrix.shape[0]
        spectra = _PowerSpectra(remainder)
        size, ranks = _block_size(spectra, threshold, p_max)
        sweep = {_block_size(spectra, thr, p_max)[0] for thr in thresholds}
        profile.sizes[n] = size
        profile.rank_sequences[n] = ranks
        profile.stable[n] = sweep == {size}
        profile.leading[n] = leading
        logging.info("Width %d: largest Jordan block %d, ranks %s", n, size, ranks)
        if logger is not None:
            logger.update_step(prefix)
            logger.log_metrics(
                {"n": n, "m": size, "stable": int(profile.stable[n]), "leading": leading},
                prefix,
            )
    return profile
