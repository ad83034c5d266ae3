"""Qubit families of the hierarchy.

Both families are local dressings of a ZZ coupling. Single-qubit unitaries act on
the output side of the coupling.
"""
import numpy as np
from scipy.linalg import expm

from duhive.core.tensors import UnitaryGate

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
ZZ = np.kron(PAULI_Z, PAULI_Z)

CONSTRAINT_TOL = 1e-10


def _rotation(r, theta, phi):
    axis = (
        np.sin(theta) * np.cos(phi) * PAULI_X
        + np.sin(theta) * np.sin(phi) * PAULI_Y
        + np.cos(theta) * PAULI_Z
    )
    return expm(1j * r * axis)


def solve_theta(r, sign=1):
    """Polar angle satisfying ``sqrt(2) sin(r) sin(theta) = sign``.

    Args:
        r (float): Rotation angle, needs ``|sqrt(2) sin r| >= 1``.
        sign (int): +1 or -1.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    target = sign / (np.sqrt(2) * np.sin(r))
    if abs(target) > 1 + CONSTRAINT_TOL:
        raise ValueError(f"no polar angle solves the constraint for r={r}")
    return float(np.arcsin(np.clip(target, -1.0, 1.0)))


def qubit_L2(
    r1: float,
    phi1: float,
    r2: float,
    phi2: float,
    theta1: float = None,
    theta2: float = None,
    signs: list = (1, 1),
):
    """Qubit gate ``(u1 ⊗ u2) exp(iπ/4 ZZ)`` with ``u_i = exp(i r_i n_i·σ)``.

    The polar angles must satisfy ``|sqrt(2) sin r_i sin theta_i| = 1``. Angles left
    as None are solved for with the given signs.
    """
    thetas = []
    for r, theta, sign in zip((r1, r2), (theta1, theta2), signs):
        if theta is None:
            theta = solve_theta(r, sign)
        residual = abs(abs(np.sqrt(2) * np.sin(r) * np.sin(theta)) - 1)
        if residual > CONSTRAINT_TOL:
            raise ValueError(
                f"sqrt(2) sin(r) sin(theta) must be +-1, off by {residual:.3e} "
                f"at r={r}, theta={theta}"
            )
        thetas.append(theta)
    u1 = _rotation(r1, thetas[0], phi1)
    u2 = _rotation(r2, thetas[1], phi2)
    matrix = np.kron(u1, u2) @ expm(1j * np.pi / 4 * ZZ)
    return UnitaryGate(2, matrix, properties={"family": "qubit_L2"})


def random_qubit_L2(seed: int):
    """Draws the free angles of :py:func:`qubit_L2` uniformly."""
    rng = np.random.default_rng(seed)
    r1, r2 = rng.uniform(np.pi / 4, 3 * np.pi / 4, size=2)
    phi1, phi2 = rng.uniform(0, 2 * np.pi, size=2)
    signs = [int(s) for s in rng.choice([-1, 1], size=2)]
    return qubit_L2(r1, phi1, r2, phi2, signs=signs)


def qubit_L3(J: float, phi1: float, phi2: float):
    """Qubit gate ``(v1 ⊗ v2) exp(-iJ ZZ)`` with ``v_i = cos(phi_i) X + sin(phi_i) Y``.

    Args:
        J (float): Coupling in [0, π/4].
        phi1 (float): Angle of the left output flip, in [0, 2π].
        phi2 (float): Angle of the right output flip, in [0, 2π].
    """
    if not 0 <= J <= np.pi / 4:
        raise ValueError(f"J must lie in [0, pi/4], got {J}")
    for name, phi in (("phi1", phi1), ("phi2", phi2)):
        if not 0 <= phi <= 2 * np.pi:
            raise ValueError(f"{name} must lie in [0, 2pi], got {phi}")
    v1 = np.cos(phi1) * PAULI_X + np.sin(phi1) * PAULI_Y
    v2 = np.cos(phi2) * PAULI_X + np.sin(phi2) * PAULI_Y
    matrix = np.kron(v1, v2) @ expm(-1j * J * ZZ)
    return UnitaryGate(2, matrix, properties={"family": "qubit_L3"})


def random_qubit_L3(seed: int):
    rng = np.random.default_rng(seed)
    J = rng.uniform(0, np.pi / 4)
    phi1, phi2 = rng.uniform(0, 2 * np.pi, size=2)
    return qubit_L3(J, phi1, phi2)
