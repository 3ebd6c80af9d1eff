"""Spin-j state vectors and density matrices used as reconstruction targets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.special import comb

from .errors import DomainError
from .halfint import HalfInteger, HalfLike, check_projection
from .su2 import SpherePoint

__all__ = [
    "StateVector",
    "DensityMatrix",
    "make_dicke",
    "make_coherent",
    "make_superposition",
    "make_mixture",
    "coherent_amplitudes",
    "random_pure",
    "random_mixed",
    "as_density",
]

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised pure state on the spin-j space (amplitudes ordered ``mu = j..-j``)."""

    j: HalfInteger
    amplitudes: np.ndarray

    def __post_init__(self):
        j = HalfInteger.of(self.j)
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != j.dim:
            raise DomainError(f"expected {j.dim} amplitudes for j={j}, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state vector has squared norm {norm}, not 1")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.j.dim

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.j, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "StateVector") -> complex:
        """Inner product ``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density operator on the spin-j space.

    Validation (Hermitian, unit trace, positive semidefinite) runs on
    construction unless ``check=False``; reconstruction outputs are built
    unchecked and can be inspected with :meth:`violations`.
    """

    j: HalfInteger
    matrix: np.ndarray
    check: bool = True

    def __post_init__(self):
        j = HalfInteger.of(self.j)
        mat = _frozen(self.matrix)
        if mat.shape != (j.dim, j.dim):
            raise DomainError(f"expected a {j.dim}x{j.dim} matrix for j={j}, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise DomainError("density matrix has non-finite entries")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "matrix", mat)
        if self.check:
            problems = self.violations()
            if problems:
                raise DomainError("invalid density matrix: " + "; ".join(problems))

    @property
    def dim(self) -> int:
        return self.j.dim

    def violations(self) -> list[str]:
        """Human-readable list of violated density-matrix invariants."""
        mat = self.matrix
        out = []
        herm = float(np.abs(mat - mat.conj().T).max())
        if herm > HERMITIAN_TOL:
            out.append(f"not Hermitian (max deviation {herm:.3g})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            out.append(f"trace {tr.real:.15g} != 1")
        if herm <= 1e-8:
            lam = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2).min())
            if lam < PSD_TOL:
                out.append(f"negative eigenvalue {lam:.3g}")
        return out

    @property
    def is_physical(self) -> bool:
        return not self.violations()

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


StateLike = Union[StateVector, DensityMatrix]


def as_density(state: StateLike) -> DensityMatrix:
    if isinstance(state, StateVector):
        return state.density()
    if isinstance(state, DensityMatrix):
        return state
    raise DomainError(f"expected StateVector or DensityMatrix, got {type(state).__name__}")


def make_dicke(j: HalfLike, mu: HalfLike) -> StateVector:
    """Basis state ``|j, mu>``."""
    j, mu = HalfInteger.of(j), HalfInteger.of(mu)
    check_projection(j, mu)
    amps = np.zeros(j.dim, dtype=complex)
    amps[(j.twice_value - mu.twice_value) // 2] = 1.0
    return StateVector(j, amps)


def coherent_amplitudes(j: HalfLike, theta: float, phi: float) -> np.ndarray:
    """Closed-form coherent-state amplitudes

    ``binom(2j, j+mu)^(1/2) cos^(j+mu)(theta/2) sin^(j-mu)(theta/2) exp(-i mu phi)``.
    """
    j = HalfInteger.of(j)
    tj = j.twice_value
    p = np.arange(tj, -1, -1)  # j + mu
    q = tj - p  # j - mu
    mu = (p - q) / 2.0
    return (np.sqrt(comb(tj, p, exact=False))
            * math.cos(theta / 2) ** p * math.sin(theta / 2) ** q
            * np.exp(-1j * mu * phi))


def make_coherent(j: HalfLike, n: SpherePoint) -> StateVector:
    """SU(2) coherent state ``|j; n> = g(n) |j, j>``."""
    j = HalfInteger.of(j)
    amps = coherent_amplitudes(j, n.theta, n.phi)
    # the binomial theorem makes this unit-norm; renormalise away rounding only
    amps = amps / math.sqrt(float(np.vdot(amps, amps).real))
    return StateVector(j, amps)


def make_superposition(j: HalfLike, coeffs: Sequence[complex]) -> StateVector:
    """Normalised copy of ``coeffs``."""
    j = HalfInteger.of(j)
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size != j.dim:
        raise DomainError(f"expected {j.dim} coefficients for j={j}, got {c.size}")
    norm = float(np.linalg.norm(c))
    if norm == 0.0 or not math.isfinite(norm):
        raise DomainError("cannot normalise a zero (or non-finite) coefficient vector")
    return StateVector(j, c / norm)


def make_mixture(components: Iterable[tuple[float, StateLike]]) -> DensityMatrix:
    """Convex combination ``sum_i w_i rho_i / sum_i w_i``."""
    components = list(components)
    if not components:
        raise DomainError("mixture needs at least one component")
    j = None
    total = 0.0
    acc = None
    for w, state in components:
        w = float(w)
        if w < 0 or not math.isfinite(w):
            raise DomainError(f"mixture weight {w} must be finite and non-negative")
        rho = as_density(state)
        if j is None:
            j = rho.j
            acc = np.zeros((j.dim, j.dim), dtype=complex)
        elif rho.j != j:
            raise DomainError(f"mixture components have different j ({j} and {rho.j})")
        acc += w * rho.matrix
        total += w
    if total == 0.0:
        raise DomainError("mixture weights are all zero")
    mat = acc / total
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(j, mat)


def random_pure(j: HalfLike, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state."""
    j = HalfInteger.of(j)
    z = rng.normal(size=j.dim) + 1j * rng.normal(size=j.dim)
    return make_superposition(j, z)


def random_mixed(j: HalfLike, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random density matrix from the induced (Ginibre) measure."""
    j = HalfInteger.of(j)
    rank = j.dim if rank is None else int(rank)
    g = rng.normal(size=(j.dim, rank)) + 1j * rng.normal(size=(j.dim, rank))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix(j, (rho + rho.conj().T) / 2)
