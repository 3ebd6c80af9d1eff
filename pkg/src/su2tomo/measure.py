"""
Phase-space displacement, displaced-projector probabilities and shot sampling.

A state ``rho`` is displaced to ``g(n)^dagger rho g(n)`` and the population of
``|j, mu>`` is read out. Exact probabilities are evaluated on quadrature grids
over the sphere; finite-shot data are multinomial draws whose random streams
depend only on ``(seed, point index)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .halfint import HalfInteger, HalfLike, check_projection
from .states import DensityMatrix, StateLike, as_density
from .su2 import SpherePoint, rotation_operators, spherical_harmonics

__all__ = [
    "SphereGrid",
    "ProbabilityGrid",
    "MeasurementRecord",
    "build_grid",
    "displace",
    "displaced_projector",
    "displaced_probabilities",
    "probabilities_on_grid",
    "exact_probability_grid",
    "sample_measurements",
    "sample_from_probabilities",
    "record_to_probability_grid",
    "point_rng",
    "multinomial_counts",
]

EXACTNESS_TOL = 1e-10


class SphereGrid:
    """Quadrature rule on the unit sphere.

    Parameters
    ----------
    theta, phi, weights : array_like
        Node angles and steradian weights (weights sum to ``4 pi``).
    degree : int, optional
        Largest spherical-harmonic degree integrated exactly. Determined
        numerically when not supplied.
    """

    def __init__(self, theta, phi, weights, degree: int | None = None):
        theta = np.array(theta, dtype=float).ravel()
        phi = np.array(phi, dtype=float).ravel()
        weights = np.array(weights, dtype=float).ravel()
        if not (theta.shape == phi.shape == weights.shape) or theta.size == 0:
            raise DomainError("theta, phi and weights must be non-empty and equally long")
        if np.any(theta < 0) or np.any(theta > math.pi):
            raise DomainError("grid theta values must lie in [0, pi]")
        if np.any(phi < 0) or np.any(phi >= 2 * math.pi):
            raise DomainError("grid phi values must lie in [0, 2pi)")
        if np.any(weights <= 0):
            raise DomainError("grid weights must be positive")
        if abs(weights.sum() - 4 * math.pi) > 1e-10:
            raise DomainError(f"grid weights sum to {weights.sum()!r}, not 4pi")
        for a in (theta, phi, weights):
            a.setflags(write=False)
        self.theta, self.phi, self.weights = theta, phi, weights
        self._degree = degree
        self._ylm: dict[int, np.ndarray] = {}
        self._rot: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return self.theta.size

    def __repr__(self) -> str:
        return f"SphereGrid(n={len(self)}, degree={self.degree})"

    def point(self, i: int) -> SpherePoint:
        return SpherePoint(self.theta[i], self.phi[i])

    @property
    def points(self) -> list[SpherePoint]:
        return [self.point(i) for i in range(len(self))]

    def unit_vectors(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.stack([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)], axis=1)

    @property
    def degree(self) -> int:
        if self._degree is None:
            self._degree = _measure_degree(self)
        return self._degree

    def harmonics(self, lmax: int) -> np.ndarray:
        """Cached ``Y_lm`` table of shape ``((lmax+1)**2, n)``."""
        for cached_l, table in self._ylm.items():
            if cached_l >= lmax:
                return table[: (lmax + 1) ** 2]
        table = spherical_harmonics(lmax, self.theta, self.phi)
        table.setflags(write=False)
        self._ylm[lmax] = table
        return table

    def rotations(self, j: HalfLike) -> np.ndarray:
        """Cached displacement operators ``g(n_i)`` for every node."""
        tj = HalfInteger.of(j).twice_value
        if tj not in self._rot:
            g = rotation_operators(HalfInteger(tj), self.theta, self.phi)
            g.setflags(write=False)
            self._rot[tj] = g
        return self._rot[tj]

    def integrate(self, values) -> np.ndarray:
        """Quadrature of ``values`` (last axis runs over nodes)."""
        return np.sum(np.asarray(values) * self.weights, axis=-1)


def _measure_degree(grid: SphereGrid) -> int:
    cap = int(2 * math.sqrt(len(grid))) + 2
    ylm = spherical_harmonics(cap, grid.theta, grid.phi)
    integrals = ylm @ grid.weights
    integrals[0] -= math.sqrt(4 * math.pi)
    for l in range(cap + 1):
        if np.abs(integrals[l * l:(l + 1) ** 2]).max() > EXACTNESS_TOL:
            return l - 1
    return cap


def build_grid(j: HalfLike, oversample: float = 1.0) -> SphereGrid:
    """Gauss-Legendre (in ``cos theta``) times uniform-``phi`` product grid.

    Uses ``L = ceil(oversample (2j+1))`` polar and ``M = ceil(oversample (4j+1))``
    azimuthal nodes; the rule is exact through degree ``min(2L-1, M-1) >= 4j``,
    which covers every integrand the reconstruction needs.
    """
    j = HalfInteger.of(j)
    if j.twice_value < 0:
        raise DomainError("j must be non-negative")
    oversample = float(oversample)
    if not oversample >= 1.0:
        raise DomainError("oversample must be >= 1")
    n_theta = math.ceil(oversample * (j.twice_value + 1))
    n_phi = math.ceil(oversample * (2 * j.twice_value + 1))
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)[::-1]
    wx = wx[::-1]
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(wx, np.full(n_phi, 2 * math.pi / n_phi))
    return SphereGrid(tt.ravel(), pp.ravel(), ww.ravel(),
                      degree=min(2 * n_theta - 1, n_phi - 1))


# ---------------------------------------------------------------------------
# displacement and exact probabilities


def displace(rho: StateLike, n: SpherePoint) -> DensityMatrix:
    """Displaced state ``g(n)^-1 rho g(n)``."""
    rho = as_density(rho)
    g = rotation_operators(rho.j, [n.theta], [n.phi])[0]
    out = g.conj().T @ rho.matrix @ g
    return DensityMatrix(rho.j, (out + out.conj().T) / 2, check=rho.check)


def displaced_projector(j: HalfLike, mu: HalfLike, n: SpherePoint) -> np.ndarray:
    """``Gamma_mu(n) = g(n) |j,mu><j,mu| g(n)^-1``."""
    j, mu = HalfInteger.of(j), HalfInteger.of(mu)
    check_projection(j, mu)
    g = rotation_operators(j, [n.theta], [n.phi])[0]
    col = g[:, (j.twice_value - mu.twice_value) // 2]
    return np.outer(col, col.conj())


def displaced_probabilities(rho: StateLike, n: SpherePoint) -> np.ndarray:
    """Readout probabilities ``p_mu(n) = <j,mu| rho(n) |j,mu>`` for every ``mu`` (order ``j..-j``)."""
    rho = as_density(rho)
    g = rotation_operators(rho.j, [n.theta], [n.phi])
    return _probabilities(rho.matrix, g)[0]


def _probabilities(rho: np.ndarray, g: np.ndarray) -> np.ndarray:
    # p[i, mu] = sum_ab conj(g[i,a,mu]) rho[a,b] g[i,b,mu]
    return np.einsum("iam,ab,ibm->im", g.conj(), rho, g, optimize=True).real


def probabilities_on_grid(rho: StateLike, grid: SphereGrid) -> np.ndarray:
    """Exact probabilities at every node, shape ``(len(grid), 2j+1)``."""
    rho = as_density(rho)
    return _probabilities(rho.matrix, grid.rotations(rho.j))


@dataclass(frozen=True, eq=False)
class ProbabilityGrid:
    """Values of ``p_mu`` over a grid for one readout index.

    ``shots`` holds the per-node shot count; all zeros mean exact values.
    """

    grid: SphereGrid
    j: HalfInteger
    mu: HalfInteger
    values: np.ndarray
    shots: np.ndarray = field(default=None)

    def __post_init__(self):
        j, mu = HalfInteger.of(self.j), HalfInteger.of(self.mu)
        check_projection(j, mu)
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size != len(self.grid):
            raise DomainError("one probability per grid node is required")
        if np.any(vals < -1e-12) or np.any(vals > 1 + 1e-12):
            raise DomainError("probabilities must lie in [0, 1]")
        shots = np.zeros(vals.size, dtype=np.int64) if self.shots is None else \
            np.broadcast_to(np.asarray(self.shots, dtype=np.int64), vals.shape).copy()
        for a in (vals, shots):
            a.setflags(write=False)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "shots", shots)

    @property
    def exact(self) -> bool:
        return not np.any(self.shots)

    @property
    def shots_per_point(self) -> int:
        """Common shot count, 0 for exact data (-1 if nodes differ)."""
        if np.all(self.shots == self.shots[0]):
            return int(self.shots[0])
        return -1


def exact_probability_grid(rho: StateLike, grid: SphereGrid,
                           mu: HalfLike | None = None) -> ProbabilityGrid:
    """Exact ``p_mu`` on ``grid``; ``mu`` defaults to ``j``."""
    rho = as_density(rho)
    mu = rho.j if mu is None else HalfInteger.of(mu)
    check_projection(rho.j, mu)
    col = (rho.j.twice_value - mu.twice_value) // 2
    vals = probabilities_on_grid(rho, grid)[:, col]
    return ProbabilityGrid(grid, rho.j, mu, np.clip(vals, 0.0, 1.0))


# ---------------------------------------------------------------------------
# finite-shot sampling


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Simulated readout counts: ``counts[i, k]`` for node ``i`` and outcome ``mu_k = j - k``."""

    grid: SphereGrid
    j: HalfInteger
    counts: np.ndarray
    seed: int
    shots: np.ndarray = field(default=None)

    def __post_init__(self):
        j = HalfInteger.of(self.j)
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != (len(self.grid), j.dim):
            raise DomainError(f"counts must have shape {(len(self.grid), j.dim)}, got {counts.shape}")
        if np.any(counts < 0):
            raise DomainError("counts must be non-negative")
        totals = counts.sum(axis=1)
        shots = totals if self.shots is None else np.broadcast_to(
            np.asarray(self.shots, dtype=np.int64), totals.shape).copy()
        if np.any(shots != totals):
            raise DomainError("per-node counts must sum to the recorded shot number")
        for a in (counts, shots):
            a.setflags(write=False)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "shots", shots)
        object.__setattr__(self, "seed", int(self.seed))


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be an unsigned 64-bit integer")
    return seed


def point_rng(seed: int, index: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for one grid node.

    The stream depends only on ``(seed, *stream, index)``, so results do not
    depend on evaluation order or thread count.
    """
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=(*stream, int(index)))
    return np.random.Generator(np.random.Philox(ss))


def multinomial_counts(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """One multinomial draw after clipping rounding noise out of ``probs``."""
    p = np.clip(np.asarray(probs, dtype=float), 0.0, 1.0)
    p = p / p.sum()
    return rng.multinomial(int(shots), p)


def sample_from_probabilities(probs, grid: SphereGrid, j: HalfLike, shots: int, seed: int,
                              order=None, workers: int = 1) -> MeasurementRecord:
    """Draw ``shots`` readouts per node from a table ``probs[i, k]`` of outcome probabilities."""
    j = HalfInteger.of(j)
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (len(grid), j.dim):
        raise DomainError(f"probability table must have shape {(len(grid), j.dim)}")
    shots = int(shots)
    if shots < 1:
        raise DomainError("shots must be >= 1")
    seed = _check_seed(seed)
    counts = np.zeros(probs.shape, dtype=np.int64)
    order = range(len(grid)) if order is None else [int(i) for i in order]

    def draw(i):
        counts[i] = multinomial_counts(probs[i], shots, point_rng(seed, i))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(draw, order))
    else:
        for i in order:
            draw(i)
    return MeasurementRecord(grid, j, counts, seed, np.full(len(grid), shots))


def sample_measurements(rho: StateLike, grid: SphereGrid, shots: int, seed: int,
                        order=None, workers: int = 1) -> MeasurementRecord:
    """Simulate ``shots`` projective readouts at every node of ``grid``.

    Parameters
    ----------
    order : sequence of int, optional
        Node evaluation order; the record does not depend on it.
    workers : int
        Thread count for the per-node draws; the record does not depend on it.
    """
    rho = as_density(rho)
    if int(shots) < 1:
        raise DomainError("shots must be >= 1")
    return sample_from_probabilities(probabilities_on_grid(rho, grid), grid, rho.j,
                                     shots, seed, order, workers)


def record_to_probability_grid(rec: MeasurementRecord, mu: HalfLike | None = None) -> ProbabilityGrid:
    """Empirical frequencies ``counts(mu) / shots`` per node (0 where a node has no shots)."""
    mu = rec.j if mu is None else HalfInteger.of(mu)
    check_projection(rec.j, mu)
    col = (rec.j.twice_value - mu.twice_value) // 2
    shots = rec.shots
    vals = np.divide(rec.counts[:, col], shots, out=np.zeros(len(rec.grid)), where=shots > 0)
    return ProbabilityGrid(rec.grid, rec.j, mu, vals, shots)
