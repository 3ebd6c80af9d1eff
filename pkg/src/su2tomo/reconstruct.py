"""
Inversion of displaced-projector data.

Multipole coefficients ``R_lm = Tr(rho D_lm^dagger)`` are recovered from a
measured ``p_mu`` grid by projecting it onto spherical harmonics and dividing
by the readout Clebsch-Gordan factor ``<j,mu; l,0 | j,mu>``. From the
multipoles one assembles the density matrix or any member of the
s-parametrised family of quasiprobability distributions (Husimi ``s=-1``,
Wigner ``s=0``, Glauber-Sudarshan ``s=1``). The same distributions can be
computed directly from ``p_mu`` through a Legendre-series kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, GridTooCoarseError, InconsistentCoefficientsError,
                     VanishingDenominatorError)
from .halfint import HalfInteger, HalfLike, check_projection
from .measure import ProbabilityGrid, SphereGrid
from .states import DensityMatrix, StateLike, as_density, make_coherent
from .su2 import SpherePoint, clebsch_gordan, legendre_all, lm_index, tensor_operators

__all__ = [
    "MultipoleCoefficients",
    "QPDGrid",
    "readout_denominators",
    "check_readout",
    "multipoles_from_density",
    "density_from_multipoles",
    "multipoles_from_probabilities",
    "reconstruct_density",
    "project_to_physical",
    "qpd_from_multipoles",
    "qpd_from_probabilities",
    "qpd_kernel",
    "q_function",
    "glauber_p_check",
    "coherent_frame_operator",
    "fidelity",
    "trace_distance",
    "max_abs_diff",
]

DENOMINATOR_TOL = 1e-12
IMAG_TOL = 1e-10
ALLOWED_S = (-1, 0, 1)


@dataclass(frozen=True, eq=False)
class MultipoleCoefficients:
    """Coefficients ``R_lm`` for ``0 <= l <= 2j`` stored in ``lm_index`` order."""

    j: HalfInteger
    values: np.ndarray

    def __post_init__(self):
        j = HalfInteger.of(self.j)
        vals = np.array(self.values, dtype=complex).ravel()
        if vals.size != j.dim ** 2:
            raise DomainError(f"expected {j.dim ** 2} coefficients for j={j}, got {vals.size}")
        vals.setflags(write=False)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "values", vals)

    @property
    def lmax(self) -> int:
        return self.j.twice_value

    def __getitem__(self, lm: tuple[int, int]) -> complex:
        l, m = lm
        if not (0 <= l <= self.lmax and abs(m) <= l):
            raise KeyError(lm)
        return complex(self.values[lm_index(l, m)])

    def items(self):
        for l in range(self.lmax + 1):
            for m in range(-l, l + 1):
                yield (l, m), complex(self.values[lm_index(l, m)])


@dataclass(frozen=True, eq=False)
class QPDGrid:
    """Quasiprobability values ``P(n_i; s)`` on a grid."""

    grid: SphereGrid
    j: HalfInteger
    s: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _check_s(self.s))
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size != len(self.grid) or not np.all(np.isfinite(vals)):
            raise DomainError("QPD values must be finite, one per grid node")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "j", HalfInteger.of(self.j))

    def normalization(self) -> float:
        """``(2j+1)/(4 pi) * integral of P`` (equal to 1 for unit-trace states)."""
        return float(self.j.dim / (4 * math.pi) * self.grid.integrate(self.values))


def _check_s(s) -> int:
    if s not in ALLOWED_S:
        raise DomainError(f"s must be one of {ALLOWED_S}, got {s!r}")
    return int(s)


def readout_denominators(j: HalfLike, mu: HalfLike) -> np.ndarray:
    """``<j,mu; l,0 | j,mu>`` for ``l = 0..2j``."""
    j, mu = HalfInteger.of(j), HalfInteger.of(mu)
    check_projection(j, mu)
    return np.array([clebsch_gordan(j, mu, l, 0, j, mu) for l in range(j.twice_value + 1)])


def check_readout(j: HalfLike, mu: HalfLike) -> np.ndarray:
    """Readout denominators, raising ``VanishingDenominatorError`` if any vanish."""
    j, mu = HalfInteger.of(j), HalfInteger.of(mu)
    den = readout_denominators(j, mu)
    bad = [l for l, c in enumerate(den) if abs(c) < DENOMINATOR_TOL]
    if bad:
        raise VanishingDenominatorError(j.twice_value, mu.twice_value, bad)
    return den


def _require_degree(grid: SphereGrid, j: HalfInteger) -> None:
    need = 2 * j.twice_value
    if grid.degree < need:
        raise GridTooCoarseError(grid.degree, need)


# ---------------------------------------------------------------------------
# multipoles


def multipoles_from_density(rho: StateLike) -> MultipoleCoefficients:
    """``R_lm = Tr(rho D_lm^dagger)``."""
    rho = as_density(rho)
    stack = tensor_operators(rho.j)
    # D_lm is real, so Tr(rho D^dagger) = sum_ab rho_ab D_ab
    return MultipoleCoefficients(rho.j, np.einsum("kab,ab->k", stack, rho.matrix))


def density_from_multipoles(R: MultipoleCoefficients) -> DensityMatrix:
    """``rho = sum_lm R_lm D_lm`` (returned unchecked; see ``DensityMatrix.violations``)."""
    stack = tensor_operators(R.j)
    return DensityMatrix(R.j, np.einsum("k,kab->ab", R.values, stack), check=False)


def multipoles_from_probabilities(p: ProbabilityGrid) -> MultipoleCoefficients:
    """Quadrature inversion of a ``p_mu`` grid into multipole coefficients.

    ``R_lm = sqrt((2j+1)/4pi) / <j,mu;l,0|j,mu> * integral p_mu(n) Y_lm(n)^* dn``

    Raises
    ------
    VanishingDenominatorError
        If the readout Clebsch-Gordan factor vanishes for some ``l``
        (this happens for readouts other than ``mu = +-j``).
    GridTooCoarseError
        If the grid is not exact through degree ``4j``.
    """
    j = p.j
    den = check_readout(j, p.mu)
    _require_degree(p.grid, j)
    lmax = j.twice_value
    ylm = p.grid.harmonics(lmax)
    proj = np.sum(ylm.conj() * (p.grid.weights * p.values), axis=1)
    l_of = np.repeat(np.arange(lmax + 1), 2 * np.arange(lmax + 1) + 1)
    vals = math.sqrt(j.dim / (4 * math.pi)) * proj / den[l_of]
    return MultipoleCoefficients(j, vals)


def project_to_physical(rho: DensityMatrix) -> DensityMatrix:
    """Nearest-spectrum physical state: clip negative eigenvalues and renormalise."""
    mat = (rho.matrix + rho.matrix.conj().T) / 2
    lam, vec = np.linalg.eigh(mat)
    lam = np.clip(lam, 0.0, None)
    if lam.sum() <= 0:
        raise DomainError("matrix has no positive spectrum to project onto")
    lam = lam / lam.sum()
    out = (vec * lam) @ vec.conj().T
    return DensityMatrix(rho.j, (out + out.conj().T) / 2)


def reconstruct_density(p: ProbabilityGrid, project: bool = False) -> DensityMatrix:
    """Linear estimate of ``rho`` from ``p``; optionally projected onto physical states."""
    rho = density_from_multipoles(multipoles_from_probabilities(p))
    return project_to_physical(rho) if project else rho


# ---------------------------------------------------------------------------
# quasiprobability distributions


def qpd_from_multipoles(R: MultipoleCoefficients, s: int, grid: SphereGrid) -> QPDGrid:
    """``P(n; s) = sum_lm sqrt(4pi/(2j+1)) <j,j;l,0|j,j>^(-s) R_lm Y_lm(n)``."""
    s = _check_s(s)
    j = R.j
    lmax = j.twice_value
    den = readout_denominators(j, j)
    l_of = np.repeat(np.arange(lmax + 1), 2 * np.arange(lmax + 1) + 1)
    coef = math.sqrt(4 * math.pi / j.dim) * den[l_of] ** (-s) * R.values
    vals = coef @ grid.harmonics(lmax)
    resid = float(np.abs(vals.imag).max())
    if resid > IMAG_TOL:
        raise InconsistentCoefficientsError(
            f"quasiprobability has imaginary part {resid:.3g}; coefficients are not Hermitian")
    return QPDGrid(grid, j, s, vals.real)


def qpd_kernel(j: HalfLike, mu: HalfLike, s: int, cos_angle) -> np.ndarray:
    """Legendre-series kernel ``K_{mu,s}(n, n')`` as a function of ``n . n'``.

    ``K = sum_l (2l+1)/(2j+1) <j,j;l,0|j,j>^(-s) / <j,mu;l,0|j,mu> P_l(n . n')``
    """
    j, mu = HalfInteger.of(j), HalfInteger.of(mu)
    s = _check_s(s)
    den_mu = check_readout(j, mu)
    den_top = readout_denominators(j, j)
    ls = np.arange(j.twice_value + 1)
    coef = (2 * ls + 1) / j.dim * den_top ** (-s) / den_mu
    x = np.clip(np.asarray(cos_angle, dtype=float), -1.0, 1.0)
    return np.tensordot(coef, legendre_all(j.twice_value, x), axes=1)


def qpd_from_probabilities(p: ProbabilityGrid, s: int,
                           out_grid: SphereGrid | None = None) -> QPDGrid:
    """Quasiprobability straight from measured ``p_mu`` by kernel integration.

    ``P(n; s) = (2j+1)/(4pi) sum_i w_i K_{mu,s}(n, n_i) p_mu(n_i)``
    """
    s = _check_s(s)
    out_grid = p.grid if out_grid is None else out_grid
    check_readout(p.j, p.mu)
    _require_degree(p.grid, p.j)
    cosines = out_grid.unit_vectors() @ p.grid.unit_vectors().T
    kernel = qpd_kernel(p.j, p.mu, s, cosines)
    vals = p.j.dim / (4 * math.pi) * (kernel @ (p.grid.weights * p.values))
    return QPDGrid(out_grid, p.j, s, vals)


def q_function(rho: StateLike, n: SpherePoint) -> float:
    """Husimi function ``<j;n| rho |j;n>``."""
    rho = as_density(rho)
    c = make_coherent(rho.j, n).amplitudes
    return float(np.real(np.vdot(c, rho.matrix @ c)))


def coherent_frame_operator(j: HalfLike, grid: SphereGrid, values=None) -> np.ndarray:
    """``(2j+1)/(4pi) sum_i w_i f_i |j;n_i><j;n_i|`` (``f = 1`` when ``values`` is None).

    With ``f = 1`` this is the discretised resolution of the identity; with
    ``f`` the Glauber-Sudarshan function it reassembles the density matrix.
    """
    j = HalfInteger.of(j)
    coh = grid.rotations(j)[:, :, 0]
    f = np.ones(len(grid)) if values is None else np.asarray(values, dtype=float)
    w = grid.weights * f
    return j.dim / (4 * math.pi) * np.einsum("i,ia,ib->ab", w, coh, coh.conj())


def glauber_p_check(rho: StateLike, p_grid: QPDGrid) -> float:
    """Largest entry of ``|(2j+1)/(4pi) int P(n) |j;n><j;n| dn - rho|``."""
    rho = as_density(rho)
    if p_grid.s != 1:
        raise DomainError("Glauber-Sudarshan check needs an s=1 distribution")
    if p_grid.j != rho.j:
        raise DomainError("distribution and state have different j")
    _require_degree(p_grid.grid, rho.j)
    assembled = coherent_frame_operator(rho.j, p_grid.grid, p_grid.values)
    return float(np.abs(assembled - rho.matrix).max())


# ---------------------------------------------------------------------------
# metrics


def _pair(a: StateLike, b: StateLike) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_density(a), as_density(b)
    if a.j != b.j:
        raise DomainError(f"states live on different spaces (j={a.j} vs j={b.j})")
    return (a.matrix + a.matrix.conj().T) / 2, (b.matrix + b.matrix.conj().T) / 2


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    lam, vec = np.linalg.eigh(m)
    return (vec * np.sqrt(np.clip(lam, 0.0, None))) @ vec.conj().T


def fidelity(a: StateLike, b: StateLike) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))^2``, clipped to ``[0, 1]``."""
    a, b = _pair(a, b)
    sa = _psd_sqrt(a)
    inner = sa @ b @ sa
    lam = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    f = float(np.sum(np.sqrt(np.clip(lam, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def trace_distance(a: StateLike, b: StateLike) -> float:
    """``(1/2) Tr|a - b|``."""
    a, b = _pair(a, b)
    return float(0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum())


def max_abs_diff(a: StateLike, b: StateLike) -> float:
    """Largest entrywise modulus of ``a - b``."""
    a, b = as_density(a), as_density(b)
    if a.j != b.j:
        raise DomainError(f"states live on different spaces (j={a.j} vs j={b.j})")
    return float(np.abs(a.matrix - b.matrix).max())
