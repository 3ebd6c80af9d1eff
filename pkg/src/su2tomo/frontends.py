"""
Physical realisations of the phase-space displacement.

Each frontend maps its control parameters to a point ``n`` on the sphere and
can also simulate the operator its apparatus applies to the state, built
independently of the d-matrix code: Ramsey pulses from rotating-frame
Hamiltonians, the Mach-Zehnder arm from Fock-space mode transformations,
and the trapped ion from its effective two-mode Hamiltonians. In every case
the state operator equals ``g(n)^dagger``, possibly times a diagonal phase
matrix, which cannot change any ``|j, mu>`` population.

Inverse maps (``*_settings``) return control parameters that realise a
requested point, used to drive simulated scans.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, ProtocolError, UnsupportedConfigurationError
from .fock import ladder_operators, mode_transform_block, _restrict
from .halfint import HalfInteger, HalfLike
from .su2 import SpherePoint, rotation_operator, spin_matrices

__all__ = [
    "RamseyParams",
    "InterferometerParams",
    "IonParams",
    "LambDickeWarning",
    "ramsey_displacement",
    "ramsey_transform",
    "ramsey_settings",
    "interferometer_displacement",
    "interferometer_transform",
    "interferometer_settings",
    "ion_displacement",
    "ion_transform",
    "ion_settings",
    "displacement_dagger",
    "phase_equivalence_error",
]

TWO_PI = 2 * math.pi
LAMB_DICKE_LIMIT = 0.3


class LambDickeWarning(UserWarning):
    pass


def displacement_dagger(j: HalfLike, n: SpherePoint) -> np.ndarray:
    """``g(n)^dagger = exp(i theta J_y) exp(i phi J_z)``."""
    return rotation_operator(j, n).conj().T


def phase_equivalence_error(op: np.ndarray, target: np.ndarray) -> float:
    """Distance from ``op`` to ``D @ target`` for the best diagonal unitary ``D``.

    Zero means ``op`` and ``target`` produce identical readout statistics
    for every input state.
    """
    d = np.diag(op @ target.conj().T)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1.0)
    return float(np.abs(op - phases[:, None] * target).max())


def _propagator(h: np.ndarray, t: float) -> np.ndarray:
    return expm(-1j * t * h)


# ---------------------------------------------------------------------------
# Ramsey spectroscopy


@dataclass(frozen=True)
class RamseyParams:
    """Ramsey sequence controls (angular frequencies in rad/s, times in s).

    ``omega1`` only matters when ``first_pulse_on`` is set, which describes
    ordinary spectroscopy rather than reconstruction.
    """

    omega0: float
    omega: float
    T: float
    omega2: float
    t_theta: float
    first_pulse_on: bool = False
    omega1: float = 0.0

    def __post_init__(self):
        if self.T < 0 or self.t_theta < 0:
            raise DomainError("Ramsey durations T and t_theta must be non-negative")

    @property
    def pulse_angle(self) -> float:
        return self.omega2 * self.t_theta

    @property
    def precession_angle(self) -> float:
        return (self.omega0 - self.omega) * self.T


def ramsey_displacement(p: RamseyParams) -> SpherePoint:
    """Sphere point realised by the last two Ramsey stages: ``theta = -w2 t``, ``phi = -(w0 - w) T``."""
    if p.first_pulse_on:
        raise ProtocolError("reconstruction requires the first Ramsey pulse to be omitted")
    return SpherePoint.from_angles(-p.pulse_angle, -p.precession_angle)


def ramsey_transform(j: HalfLike, p: RamseyParams, detuned_pulses: bool = False) -> np.ndarray:
    """State operator of the Ramsey sequence in the rotating frame.

    Each stage evolves under ``H = w' . J`` with ``w' = (w0 - w) z + w_perp y``.
    Detuning during the pulses is neglected unless ``detuned_pulses``.
    """
    jx, jy, jz = spin_matrices(j)
    delta = p.omega0 - p.omega
    extra = delta * jz if detuned_pulses else 0.0
    out = _propagator(delta * jz, p.T)
    out = _propagator(p.omega2 * jy + extra, p.t_theta) @ out
    if p.first_pulse_on:
        out = out @ _propagator(p.omega1 * jy + extra, p.t_theta)
    return out


def ramsey_settings(n: SpherePoint, omega0: float, omega: float, omega2: float) -> RamseyParams:
    """Durations ``(T, t_theta)`` that realise ``n`` with the given frequencies."""
    delta = omega0 - omega
    if omega2 == 0:
        raise DomainError("omega2 must be non-zero")
    if delta == 0 and n.theta not in (0.0, math.pi):
        raise DomainError("a detuned drive (omega != omega0) is needed to scan phi")
    # raw angles are (-omega2 t, -delta T); (-theta, phi + pi) is the same point
    if omega2 < 0:
        theta_raw, phi_raw = n.theta, n.phi
    else:
        theta_raw, phi_raw = -n.theta, n.phi + math.pi
    t_theta = -theta_raw / omega2
    T = 0.0 if delta == 0 else (-phi_raw / delta) % (TWO_PI / abs(delta))
    return RamseyParams(omega0, omega, T, omega2, t_theta)


# ---------------------------------------------------------------------------
# Mach-Zehnder interferometer


@dataclass(frozen=True)
class InterferometerParams:
    """Mach-Zehnder controls.

    ``orientation`` is the sign of the second splitter's mixing angle,
    ``vartheta2 = orientation * 2 arccos(sqrt(T2))``, so a 50-50 splitter gives
    ``vartheta2 = pi/2`` by default. Mounting the splitter the other way
    (``-1``) maps ``T2`` straight onto ``theta in [0, pi]``.
    """

    transmittance1: float
    transmittance2: float
    phase1: float
    phase2: float
    first_splitter_present: bool = False
    orientation: int = 1

    def __post_init__(self):
        for t in (self.transmittance1, self.transmittance2):
            if not 0.0 <= t <= 1.0:
                raise DomainError("transmittances must lie in [0, 1]")
        if self.orientation not in (1, -1):
            raise DomainError("orientation must be +1 or -1")

    @property
    def mixing_angle2(self) -> float:
        return self.orientation * 2.0 * math.acos(math.sqrt(self.transmittance2))

    @property
    def mixing_angle1(self) -> float:
        return self.orientation * 2.0 * math.acos(math.sqrt(self.transmittance1))

    @property
    def phase_difference(self) -> float:
        return self.phase2 - self.phase1


def beam_splitter_matrix(vartheta: float) -> np.ndarray:
    """Heisenberg-picture mode matrix ``B(vartheta)``."""
    c, s = math.cos(vartheta / 2), math.sin(vartheta / 2)
    return np.array([[c, -s], [s, c]])


def phase_shifter_matrix(phase1: float, phase2: float) -> np.ndarray:
    return np.diag([np.exp(1j * phase1), np.exp(1j * phase2)])


def interferometer_displacement(p: InterferometerParams) -> SpherePoint:
    """Sphere point realised by an interferometer without its first splitter."""
    if p.first_splitter_present:
        raise ProtocolError("reconstruction requires the first beam splitter to be removed")
    return SpherePoint.from_angles(-p.mixing_angle2, -p.phase_difference)


def interferometer_transform(j: HalfLike, p: InterferometerParams) -> np.ndarray:
    """State operator of the interferometer on the ``N = 2j`` photon block.

    The common phase ``exp(i (phase1 + phase2) N / 2)``, a global phase on the
    block, is removed.
    """
    j = HalfInteger.of(j)
    n_total = j.twice_value
    modes = beam_splitter_matrix(p.mixing_angle2) @ phase_shifter_matrix(p.phase1, p.phase2)
    if p.first_splitter_present:
        modes = modes @ beam_splitter_matrix(p.mixing_angle1)
    op = mode_transform_block(modes, n_total)
    return op * np.exp(-0.5j * (p.phase1 + p.phase2) * n_total)


def interferometer_settings(n: SpherePoint, orientation: int = 1) -> InterferometerParams:
    """Second-splitter transmittance and arm phases realising ``n`` (``phase1 = 0``)."""
    if orientation == -1:
        phase = -n.phi
    else:
        phase = math.pi - n.phi
    return InterferometerParams(1.0, math.cos(n.theta / 2) ** 2, 0.0, phase % TWO_PI,
                                orientation=orientation)


# ---------------------------------------------------------------------------
# trapped ion


@dataclass(frozen=True)
class IonParams:
    """Two-dimensional trapped-ion controls.

    ``kappa`` is the Raman Rabi coupling, ``eta1, eta2`` the Lamb-Dicke
    parameters, ``Omega1, Omega2`` the trap frequencies, ``t_theta`` the
    coupling-pulse duration, ``T_free`` the free-evolution time and ``Phi``
    the Raman phase difference.
    """

    kappa: float
    eta1: float
    eta2: float
    Omega1: float
    Omega2: float
    t_theta: float
    T_free: float
    Phi: float = math.pi / 2

    def __post_init__(self):
        if self.Omega1 == self.Omega2:
            raise DomainError("trap frequencies Omega1 and Omega2 must differ")
        if self.t_theta < 0 or self.T_free < 0:
            raise DomainError("durations must be non-negative")
        if max(abs(self.eta1), abs(self.eta2)) > LAMB_DICKE_LIMIT:
            warnings.warn(f"Lamb-Dicke parameter above {LAMB_DICKE_LIMIT}; the resonant "
                          "beam-splitter approximation may fail", LambDickeWarning, stacklevel=3)

    @property
    def coupling_angle(self) -> float:
        return 2 * self.kappa * self.eta1 * self.eta2 * self.t_theta

    @property
    def free_angle(self) -> float:
        return (self.Omega2 - self.Omega1) * self.T_free


def _check_phi(p: IonParams) -> None:
    if abs(p.Phi - math.pi / 2) > 1e-12:
        raise UnsupportedConfigurationError(
            f"only Phi = pi/2 (a J_y coupling) is supported, got Phi={p.Phi}")


def ion_displacement(p: IonParams) -> SpherePoint:
    """Sphere point ``(2 kappa eta1 eta2 t_theta, (Omega2 - Omega1) T)``."""
    _check_phi(p)
    return SpherePoint.from_angles(p.coupling_angle, p.free_angle)


def ion_transform(j: HalfLike, p: IonParams) -> np.ndarray:
    """Free evolution for ``T_free`` followed by the resonant coupling pulse.

    Built from the effective Hamiltonians on the ``N = 2j`` vibrational block
    (with hbar = 1):

    * ``H_bs = -kappa eta1 eta2 (e^{i Phi} a1 a2^dagger + e^{-i Phi} a1^dagger a2)``
    * ``H_0 = Omega1 (n1 + 1/2) + Omega2 (n2 + 1/2)``, whose block-global
      phase ``exp(-i (Omega1 + Omega2)(N + 1) T / 2)`` is removed.
    """
    _check_phi(p)
    j = HalfInteger.of(j)
    n_total = j.twice_value
    a1, a2, labels = ladder_operators(n_total)
    c1, c2 = a1.T, a2.T
    g = p.kappa * p.eta1 * p.eta2
    h_bs = -g * (np.exp(1j * p.Phi) * a1 @ c2 + np.exp(-1j * p.Phi) * c1 @ a2)
    h_0 = p.Omega1 * (c1 @ a1) + p.Omega2 * (c2 @ a2) + 0.5 * (p.Omega1 + p.Omega2) * np.eye(len(labels))
    u_free = _propagator(_restrict(h_0, labels, n_total), p.T_free)
    u_free *= np.exp(0.5j * (p.Omega1 + p.Omega2) * (n_total + 1) * p.T_free)
    u_bs = _propagator(_restrict(h_bs, labels, n_total), p.t_theta)
    return u_bs @ u_free


def ion_settings(n: SpherePoint, kappa: float, eta1: float, eta2: float,
                 Omega1: float, Omega2: float) -> IonParams:
    """Durations realising ``n`` for fixed couplings and trap frequencies."""
    g = 2 * kappa * eta1 * eta2
    if g == 0:
        raise DomainError("coupling 2 kappa eta1 eta2 must be non-zero")
    dw = Omega2 - Omega1
    if g > 0:
        theta_raw, phi_raw = n.theta, n.phi
    else:
        theta_raw, phi_raw = -n.theta, n.phi + math.pi
    T = (phi_raw / dw) % (TWO_PI / abs(dw))
    return IonParams(kappa, eta1, eta2, Omega1, Omega2, theta_raw / g, T)
