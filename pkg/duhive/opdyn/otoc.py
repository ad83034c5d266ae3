"""Out-of-time-order correlators of local operators.

``C(x, t) = q^{-N} tr(A(t) B A(t) B)`` with ``A(t) = U_t A U_t^dagger``. The
operator A acts on site 0 before the first layer and B on site x after layer t.
Layer 1 holds the gates on even bonds. The correlator is contracted on the folded
light-cone rectangle at replica count 2:

* ``t - x`` even: ``m = (t + x) / 2``, ``n = (t - x + 2) / 2``, B on the right
  output of cell ``(m, n)``;
* ``t - x`` odd: ``m = (t + x + 1) / 2``, ``n = (t - x + 1) / 2``, B on the left
  output of cell ``(m, n)``.

A sits on the left input of cell ``(1, 1)``. Bottom legs are otherwise closed
with circles, top legs with squares, and ``C = q^{m+n}`` times the contraction.
Outside the light cone ``C = 1``.
"""
import itertools
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from duhive.core.networks import contract_rectangle
from duhive.core.tensors import CIRCLE, SQUARE, as_gate, boundary_vector
from duhive.utils.utils import check_budget

IMAGINARY_TOL = 1e-10


def operator_basis(q):
    """Traceless Hermitian basis with ``tr(σ_a σ_b) = q δ_ab``.

    Generalized Gell-Mann matrices rescaled by ``sqrt(q / 2)``: symmetric ones
    first, then antisymmetric, then diagonal. For q = 2 this is X, Y, Z.
    """
    symmetric = []
    antisymmetric = []
    for j, k in itertools.combinations(range(q), 2):
        s = np.zeros((q, q), dtype=np.complex128)
        s[j, k] = s[k, j] = 1
        symmetric.append(s)
        a = np.zeros((q, q), dtype=np.complex128)
        a[j, k] = -1j
        a[k, j] = 1j
        antisymmetric.append(a)
    diagonal = []
    for level in range(1, q):
        d = np.zeros((q, q), dtype=np.complex128)
        d[np.arange(level), np.arange(level)] = 1
        d[level, level] = -level
        diagonal.append(d * np.sqrt(2 / (level * (level + 1))))
    return [matrix * np.sqrt(q / 2) for matrix in symmetric + antisymmetric + diagonal]


def resolve_operator(q, operator):
    """Accepts an index into :py:func:`operator_basis` or a q×q matrix."""
    if isinstance(operator, (int, np.integer)):
        basis = operator_basis(q)
        if not 0 <= operator < len(basis):
            raise ValueError(f"operator index must be in [0, {len(basis)}), got {operator}")
        return basis[operator]
    operator = np.asarray(operator, dtype=np.complex128)
    if operator.shape != (q, q):
        raise ValueError(f"operator must have shape {(q, q)}, got {operator.shape}")
    return operator


def otoc_coordinates(x, t):
    """``(m, n, leg)`` of the rectangle holding the correlator at ``(x, t)``."""
    if (t - x) % 2 == 0:
        return (t + x) // 2, (t - x + 2) // 2, "tr"
    return (t + x + 1) // 2, (t - x + 1) // 2, "tl"


def otoc_value(gate, sigma_a, sigma_b, x, t):
    """Contracts one correlator ``C(x, t)``."""
    gate = as_gate(gate)
    q = gate.q
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0 or abs(x) > t:
        return 1.0 + 0.0j
    m, n, leg = otoc_coordinates(x, t)
    if m < 1 or n < 1:
        return 1.0 + 0.0j
    a = resolve_operator(q, sigma_a)
    b = resolve_operator(q, sigma_b)
    circle = boundary_vector(CIRCLE, q, 2)
    square = boundary_vector(SQUARE, q, 2)
    bottom_left = [boundary_vector(CIRCLE, q, 2, a)] + [circle] * (n - 1)
    bottom_right = [circle] * m
    top_left = [square] * m
    top_right = [square] * n
    dressed = boundary_vector(SQUARE, q, 2, b)
    if leg == "tr":
        top_right[n - 1] = dressed
    else:
        top_left[m - 1] = dressed
    value = contract_rectangle(
        gate, m, n, 2, bottom_left, bottom_right, top_left, top_right
    )
    return q ** (m + n) * value


@dataclass
class OtocProfile:
    """Correlator on a grid of ``(x, t)``.

    Attributes:
        q (int): Local dimension.
        sigma_a (np.ndarray): Operator evolved in time.
        sigma_b (np.ndarray): Probe operator.
        table (pd.DataFrame): Columns x, t, C, C_imag.
    """

    q: int
    sigma_a: np.ndarray
    sigma_b: np.ndarray
    table: pd.DataFrame

    def value(self, x, t):
        row = self.table[(self.table.x == x) & (self.table.t == t)]
        return float(row.C.iloc[0])

    def relaxed(self, t, tol=1e-10):
        """Offsets x at time t where the correlator has relaxed to 1."""
        rows = self.table[(self.table.t == t) & ((self.table.C - 1).abs() <= tol)]
        return sorted(int(x) for x in rows.x)


def otoc_profile(gate, sigma_a, sigma_b, x_max, t_max, logger=None, prefix="otoc"):
    """``C(x, t)`` for ``|x| <= x_max`` and ``1 <= t <= t_max``."""
    gate = as_gate(gate)
    q = gate.q
    a = resolve_operator(q, sigma_a)
    b = resolve_operator(q, sigma_b)
    rows = []
    for t in range(1, t_max + 1):
        for x in range(-x_max, x_max + 1):
            value = otoc_value(gate, a, b, x, t)
            if abs(value.imag) > IMAGINARY_TOL * max(1.0, abs(value.real)):
                logging.warning("C(%d, %d) has imaginary part %.3e", x, t, value.imag)
            rows.append({"x": x, "t": t, "C": value.real, "C_imag": value.imag})
            if logger is not None:
                logger.update_step(prefix)
                logger.log_metrics({"x": x, "t": t, "C": value.real}, prefix)
    return OtocProfile(q, a, b, pd.DataFrame(rows))


def _apply_two_site(operator, unitary, site, n_sites, q):
    """``u O u^dagger`` with u acting on ``(site, site + 1)`` of an operator tensor
    with axes (kets..., bras...)."""
    u = unitary.reshape(q, q, q, q)
    operator = np.tensordot(u, operator, axes=([2, 3], [site, site + 1]))
    operator = np.moveaxis(operator, [0, 1], [site, site + 1])
    bras = [n_sites + site, n_sites + site + 1]
    operator = np.tensordot(operator, u.conj(), axes=(bras, [2, 3]))
    return np.moveaxis(operator, [-2, -1], bras)


def otoc_dense(gate, sigma_a, sigma_b, x, t):
    """Reference value of ``C(x, t)`` from the full operator on the window of sites
    ``-t ... t + 1``."""
    gate = as_gate(gate)
    q = gate.q
    if t == 0 or abs(x) > t:
        return 1.0 + 0.0j
    a = resolve_operator(q, sigma_a)
    b = resolve_operator(q, sigma_b)
    first = -t
    n_sites = 2 * t + 2
    check_budget(q ** (2 * n_sites), f"dense OTOC window of {n_sites} sites")
    dim = q**n_sites
    operator = np.eye(1, dtype=np.complex128)
    for site in range(first, first + n_sites):
        operator = np.kron(operator, a if site == 0 else np.eye(q))
    operator = operator.reshape((q,) * (2 * n_sites))
    for layer in range(1, t + 1):
        for site in range(first, first + n_sites - 1):
            if (site + layer) % 2 == 1:
                operator = _apply_two_site(
                    operator, gate.matrix, site - first, n_sites, q
                )
    evolved = operator.reshape(dim, dim)
    local_b = np.eye(1, dtype=np.complex128)
    for site in range(first, first + n_sites):
        local_b = np.kron(local_b, b if site == x else np.eye(q))
    product = evolved @ local_b
    return complex(np.trace(product @ product) / dim)
