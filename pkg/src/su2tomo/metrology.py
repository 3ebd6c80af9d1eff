"""Phase-estimation uncertainty of the standard three-rotation interferometer."""

from __future__ import annotations

import math

import numpy as np

from .errors import StationaryPointError
from .states import StateLike, as_density
from .su2 import spin_matrices, wigner_d

__all__ = ["interferometer_operator", "jz_output_moments", "phase_uncertainty"]

STATIONARY_TOL = 1e-12


def _jy_rotation(j, angle: float) -> np.ndarray:
    # exp(i angle J_y) = d^j(-angle)
    return wigner_d(j, -angle).astype(complex)


def _jz_phase(j, angle: float) -> np.ndarray:
    mu = np.diag(spin_matrices(j)[2]).real
    return np.diag(np.exp(1j * angle * mu))


def interferometer_operator(j, theta1: float, theta2: float, phi: float) -> np.ndarray:
    """``U = exp(i theta1 J_y) exp(i phi J_z) exp(i theta2 J_y)``."""
    return _jy_rotation(j, theta1) @ _jz_phase(j, phi) @ _jy_rotation(j, theta2)


def jz_output_moments(rho: StateLike, theta1: float, theta2: float,
                      phi: float) -> tuple[float, float, float]:
    """Mean and variance of ``J_z,out = U J_z U^dagger`` and the exact ``d<J_z,out>/dphi``.

    The derivative uses ``dU/dphi = i U K`` with ``K = B^dagger J_z B``,
    ``B = exp(i theta2 J_y)``, giving ``d<J_z,out>/dphi = i <U [K, J_z] U^dagger>``.
    """
    rho = as_density(rho)
    jz = spin_matrices(rho.j)[2]
    u = interferometer_operator(rho.j, theta1, theta2, phi)
    b = _jy_rotation(rho.j, theta2)
    k = b.conj().T @ jz @ b
    jz_out = u @ jz @ u.conj().T
    mean = float(np.real(np.trace(rho.matrix @ jz_out)))
    second = float(np.real(np.trace(rho.matrix @ jz_out @ jz_out)))
    deriv_op = 1j * u @ (k @ jz - jz @ k) @ u.conj().T
    deriv = float(np.real(np.trace(rho.matrix @ deriv_op)))
    return mean, max(second - mean * mean, 0.0), deriv


def phase_uncertainty(rho: StateLike, theta1: float, theta2: float, phi: float) -> float:
    """``Delta phi = Delta J_z,out / |d<J_z,out>/dphi|``.

    Raises
    ------
    StationaryPointError
        At operating points where the signal slope vanishes.
    """
    _, var, deriv = jz_output_moments(rho, theta1, theta2, phi)
    if abs(deriv) <= STATIONARY_TOL:
        raise StationaryPointError(f"d<J_z,out>/dphi = {deriv:.3g} vanishes at phi={phi}")
    return math.sqrt(var) / abs(deriv)
