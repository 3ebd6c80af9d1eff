"""
Two-mode Fock-space operators and the Schwinger map onto spin-j spaces.

``|j, mu> = |j+mu>_1 (x) |j-mu>_2``: the subspace with ``N = n1 + n2`` quanta
carries the ``j = N/2`` representation. Operators here are built directly in
the Fock basis and restricted to fixed-``N`` blocks, ordered like the spin
basis (``n1 = N, N-1, ..., 0``).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .halfint import HalfInteger, HalfLike, check_projection

__all__ = [
    "fock_to_su2",
    "su2_to_fock",
    "block_basis",
    "ladder_operators",
    "schwinger_generators",
    "mode_transform_block",
]


def fock_to_su2(n1: int, n2: int) -> tuple[HalfInteger, HalfInteger]:
    """Occupation numbers ``(n1, n2)`` to ``(j, mu) = ((n1+n2)/2, (n1-n2)/2)``."""
    n1, n2 = int(n1), int(n2)
    if n1 < 0 or n2 < 0:
        raise DomainError("occupation numbers must be non-negative")
    return HalfInteger(n1 + n2), HalfInteger(n1 - n2)


def su2_to_fock(j: HalfLike, mu: HalfLike) -> tuple[int, int]:
    """Inverse of :func:`fock_to_su2`: ``(n1, n2) = (j+mu, j-mu)``."""
    j, mu = HalfInteger.of(j), HalfInteger.of(mu)
    check_projection(j, mu)
    return (j.twice_value + mu.twice_value) // 2, (j.twice_value - mu.twice_value) // 2


def block_basis(n_total: int) -> list[tuple[int, int]]:
    """Fock states spanning the ``N = n_total`` block, in spin-basis order."""
    if n_total < 0:
        raise DomainError("total quanta must be non-negative")
    return [(n1, n_total - n1) for n1 in range(n_total, -1, -1)]


def ladder_operators(n_max: int) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]]]:
    """Annihilators ``a1, a2`` on the two-mode space truncated at ``n1, n2 <= n_max``.

    Returns the two matrices and the list of basis labels ``(n1, n2)``.
    """
    labels = [(n1, n2) for n1 in range(n_max + 1) for n2 in range(n_max + 1)]
    index = {lab: k for k, lab in enumerate(labels)}
    dim = len(labels)
    a1 = np.zeros((dim, dim))
    a2 = np.zeros((dim, dim))
    for (n1, n2), k in index.items():
        if n1 > 0:
            a1[index[(n1 - 1, n2)], k] = math.sqrt(n1)
        if n2 > 0:
            a2[index[(n1, n2 - 1)], k] = math.sqrt(n2)
    return a1, a2, labels


def _restrict(op: np.ndarray, labels, n_total: int) -> np.ndarray:
    pos = {lab: k for k, lab in enumerate(labels)}
    idx = [pos[lab] for lab in block_basis(n_total)]
    return op[np.ix_(idx, idx)]


def schwinger_generators(n_total: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``J_x, J_y, J_z`` from two boson modes, restricted to the ``N = n_total`` block."""
    a1, a2, labels = ladder_operators(n_total)
    c1, c2 = a1.T, a2.T
    jx = (c1 @ a2 + c2 @ a1) / 2
    jy = -1j * (c1 @ a2 - c2 @ a1) / 2
    jz = (c1 @ a1 - c2 @ a2) / 2
    return tuple(_restrict(op, labels, n_total) for op in (jx, jy, jz))


def mode_transform_block(mode_matrix, n_total: int) -> np.ndarray:
    """State-space unitary induced by a linear two-mode transformation.

    ``mode_matrix`` is the Heisenberg-picture matrix ``B`` of ``b = B a``
    (beam splitters, phase shifters). The state operator ``U`` satisfies
    ``U a_k^dagger U^dagger = sum_l B_lk a_l^dagger``, so each Fock state
    ``|n1, n2>`` maps to a polynomial in the creation operators, expanded
    here with the binomial theorem. Returned on the ``N = n_total`` block.
    """
    b = np.asarray(mode_matrix, dtype=complex)
    if b.shape != (2, 2):
        raise DomainError("mode matrix must be 2x2")
    basis = block_basis(n_total)
    pos = {lab: k for k, lab in enumerate(basis)}
    out = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, (n1, n2) in enumerate(basis):
        # (B11 c1 + B21 c2)^n1 (B12 c1 + B22 c2)^n2 |0> / sqrt(n1! n2!)
        for k1 in range(n1 + 1):
            f1 = math.comb(n1, k1) * b[0, 0] ** k1 * b[1, 0] ** (n1 - k1)
            for k2 in range(n2 + 1):
                f2 = math.comb(n2, k2) * b[0, 1] ** k2 * b[1, 1] ** (n2 - k2)
                m1 = k1 + k2
                m2 = n_total - m1
                amp = f1 * f2 * math.sqrt(
                    math.factorial(m1) * math.factorial(m2)
                    / (math.factorial(n1) * math.factorial(n2)))
                out[pos[(m1, m2)], col] += amp
    return out
