"""Dense tensor primitives for two-site gates.

Index conventions used throughout duhive:

* A gate matrix ``U`` of local dimension ``q`` is a ``q**2 x q**2`` array with
  composite indices ``(ab) = a*q + b``. Its four-leg view ``U.reshape(q, q, q, q)``
  has axes ``[out_left, out_right, in_left, in_right]``.
* A folded leg of replica count ``alpha`` has dimension ``q**(2*alpha)`` and the
  row-major index order ``(ket_0, bra_0, ket_1, bra_1, ...)``. Kets carry ``U`` and
  bras carry ``U*``.
"""
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional

import numpy as np
from scipy.stats import unitary_group

from duhive.utils.utils import check_budget

UNITARITY_TOL = 1e-10
SCHMIDT_CUTOFF = 1e-8

CIRCLE = "circle"
SQUARE = "square"
BOUNDARY_KINDS = (CIRCLE, SQUARE)


def local_dimension(matrix):
    """Returns q for a q²×q² matrix.

    Args:
        matrix (np.ndarray): Square matrix whose side is a perfect square.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    q = int(round(np.sqrt(matrix.shape[0])))
    if q * q != matrix.shape[0] or q < 2:
        raise ValueError(f"matrix side {matrix.shape[0]} is not q**2 with q >= 2")
    return q


def unitarity_residual(matrix):
    """Frobenius norm of ``U U^dagger - 1``."""
    matrix = np.asarray(matrix)
    return float(
        np.linalg.norm(matrix @ matrix.conj().T - np.eye(matrix.shape[0]), ord="fro")
    )


def check_finite(tensor, name="tensor"):
    if not np.all(np.isfinite(tensor)):
        raise ValueError(f"{name} has non-finite entries")
    return tensor


@dataclass(frozen=True, eq=False)
class UnitaryGate:
    """A two-site gate.

    Attributes:
        q (int): Local dimension.
        matrix (np.ndarray): Read-only q²×q² complex matrix.
        recipe (GateRecipe): Provenance of the gate, None for ad hoc gates.
        properties (dict): Construction flags reported by the factory.
    """

    q: int
    matrix: np.ndarray
    recipe: Optional[Any] = None
    properties: Mapping = field(default_factory=dict)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (self.q**2, self.q**2):
            raise ValueError(
                f"gate matrix must have shape {(self.q**2, self.q**2)}, "
                f"got {matrix.shape}"
            )
        check_finite(matrix, "gate matrix")
        residual = unitarity_residual(matrix)
        if residual > UNITARITY_TOL:
            raise ValueError(f"gate is not unitary, residual {residual:.3e}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "properties", dict(self.properties))

    @property
    def tensor(self):
        """Four-leg view with axes [out_left, out_right, in_left, in_right]."""
        return self.matrix.reshape(self.q, self.q, self.q, self.q)

    def with_recipe(self, recipe):
        return replace(self, recipe=recipe)

    def with_properties(self, **properties):
        merged = dict(self.properties)
        merged.update(properties)
        return replace(self, properties=merged)

    def __repr__(self):
        kind = None if self.recipe is None else self.recipe.kind
        return f"<UnitaryGate q={self.q} recipe={kind}>"


def as_gate(gate):
    """Wraps a bare matrix into a :py:class:`UnitaryGate`."""
    if isinstance(gate, UnitaryGate):
        return gate
    return UnitaryGate(local_dimension(gate), gate)


def _four_leg(gate):
    if isinstance(gate, UnitaryGate):
        return gate.q, gate.tensor
    q = local_dimension(gate)
    return q, np.asarray(gate).reshape(q, q, q, q)


def reshuffle(gate):
    """Space-time dual ``Ũ_{(ab),(cd)} = U_{(ac),(bd)}``. It is an involution."""
    q, tensor = _four_leg(gate)
    return tensor.transpose(0, 2, 1, 3).reshape(q * q, q * q)


def partial_transpose(gate):
    """``(U^Γ)_{(ab),(cd)} = U_{(ad),(cb)}``. It is an involution."""
    q, tensor = _four_leg(gate)
    return tensor.transpose(0, 3, 2, 1).reshape(q * q, q * q)


def mirror(gate):
    """Spatial reflection ``SWAP U SWAP``.

    Returns a :py:class:`UnitaryGate` when given one, a matrix otherwise.
    """
    q, tensor = _four_leg(gate)
    matrix = tensor.transpose(1, 0, 3, 2).reshape(q * q, q * q)
    if isinstance(gate, UnitaryGate):
        return UnitaryGate(q, matrix, recipe=gate.recipe, properties=gate.properties)
    return matrix


@dataclass(frozen=True, eq=False)
class FoldedGate:
    """``(U ⊗ U*)^{⊗α}`` with legs [out_left, out_right, in_left, in_right], each of
    dimension q^{2α}."""

    q: int
    alpha: int
    tensor: np.ndarray


def fold(gate, alpha):
    """Builds the folded gate with `alpha` replicas.

    Args:
        gate (UnitaryGate | np.ndarray): Gate to fold.
        alpha (int): Replica count, at least 1.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    q, tensor = _four_leg(gate)
    check_budget(q ** (8 * alpha), f"fold(q={q}, alpha={alpha})")
    # sublist einsum: replica r uses 8 labels, kets first
    operands = []
    output = []
    for r in range(alpha):
        kets = [8 * r + leg for leg in range(4)]
        bras = [8 * r + 4 + leg for leg in range(4)]
        operands += [tensor, kets, tensor.conj(), bras]
    for leg in range(4):
        for r in range(alpha):
            output += [8 * r + leg, 8 * r + 4 + leg]
    folded = np.einsum(*operands, output)
    dim = q ** (2 * alpha)
    return FoldedGate(q, alpha, folded.reshape(dim, dim, dim, dim))


@dataclass(frozen=True, eq=False)
class BoundaryVector:
    """Pairing vector on one folded leg.

    Attributes:
        kind (str): "circle" pairs each ket with the bra of the same replica,
            "square" pairs ket r with bra r-1 (cyclically).
        q (int): Local dimension.
        alpha (int): Replica count.
        data (np.ndarray): Vector of dimension q^{2α}.
    """

    kind: str
    q: int
    alpha: int
    data: np.ndarray

    def overlap(self, other):
        return complex(np.dot(self.data, other.data))


def boundary_vector(kind, q, alpha, operator=None):
    """Circle or square vector, optionally dressed with a one-site operator.

    The plain vectors are ``q^{-α/2}`` times the identity or cyclic pairing, so
    ``<circle|circle> = 1`` and ``<circle|square> = q^{1-α}``. A circle dressed with
    ``A`` has entries ``q^{-α/2} Π_r A[k_r, b_r]``; a square dressed with ``B`` has
    entries ``q^{-α/2} Π_r B[b_{r-1}, k_r]``.

    Args:
        kind (str): "circle" or "square".
        q (int): Local dimension.
        alpha (int): Replica count.
        operator (np.ndarray): Optional q×q operator inserted in every replica.
    """
    if kind not in BOUNDARY_KINDS:
        raise ValueError(f"kind must be one of {BOUNDARY_KINDS}, got {kind}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if operator is None:
        operator = np.eye(q)
    operator = np.asarray(operator, dtype=np.complex128)
    if operator.shape != (q, q):
        raise ValueError(f"operator must have shape {(q, q)}, got {operator.shape}")
    # factor r holds (k_r, partner bra of k_r)
    factor = operator if kind == CIRCLE else operator.T
    tensor = factor
    for _ in range(alpha - 1):
        tensor = np.multiply.outer(tensor, factor)
    if kind == SQUARE and alpha > 1:
        # the bra paired with k_r is b_{r-1}, move it to slot r-1
        perm = []
        for r in range(alpha):
            perm += [2 * r, 2 * ((r + 1) % alpha) + 1]
        tensor = np.transpose(tensor, perm)
    data = tensor.reshape(-1) * q ** (-alpha / 2)
    return BoundaryVector(kind, q, alpha, data)


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Operator Schmidt decomposition ``U = Σ_i λ_i X_i ⊗ Y_i``.

    Attributes:
        values (np.ndarray): λ_i sorted descending, length q².
        rank (int): Number of λ_i above the cutoff.
        left_basis (np.ndarray): X_i stacked as an array of shape (q², q, q).
        right_basis (np.ndarray): Y_i stacked the same way.
    """

    values: np.ndarray
    rank: int
    left_basis: np.ndarray
    right_basis: np.ndarray

    @property
    def nonzero(self):
        return self.values[: self.rank]

    def is_flat(self, tol=SCHMIDT_CUTOFF):
        nonzero = self.nonzero
        return bool(nonzero[0] / nonzero[-1] - 1 <= tol)

    def reconstruct(self):
        q = self.left_basis.shape[1]
        tensor = np.einsum(
            "i,iac,ibd->abcd", self.values, self.left_basis, self.right_basis
        )
        return tensor.reshape(q * q, q * q)


def schmidt_decompose(gate, cutoff=SCHMIDT_CUTOFF):
    """Operator Schmidt decomposition from the SVD of the reshuffled gate.

    Args:
        gate (UnitaryGate | np.ndarray): Gate to decompose.
        cutoff (float): Singular values below ``cutoff * max`` count as zero.
    """
    q, _ = _four_leg(gate)
    left, values, right = np.linalg.svd(reshuffle(gate))
    rank = int(np.sum(values > cutoff * values[0]))
    left_basis = left.T.reshape(q * q, q, q)
    right_basis = right.reshape(q * q, q, q)
    return SchmidtData(values, rank, left_basis, right_basis)


def haar_unitary(dim, seed):
    """Haar-random unitary of size `dim`, deterministic given `seed`.

    Args:
        dim (int): Matrix size.
        seed (int | np.random.Generator): Seed or generator.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)
