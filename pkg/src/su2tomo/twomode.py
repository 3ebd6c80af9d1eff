"""
Two-mode states split into fixed-photon-number blocks and reconstructed block by block.

Every readout records the photon-number sum ``N = 2j`` together with the
difference ``2 mu``, so the counts of each block form an ordinary spin-j
measurement record with a fluctuating number of shots per displacement.
Coherences between different ``N`` never affect these statistics: pure
states are recovered only up to the relative phases between blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .errors import DomainError, SU2TomoError
from .fock import fock_to_su2
from .halfint import HalfInteger
from .measure import (MeasurementRecord, ProbabilityGrid, SphereGrid, build_grid,
                      exact_probability_grid, multinomial_counts, point_rng,
                      probabilities_on_grid, record_to_probability_grid)
from .reconstruct import fidelity, max_abs_diff, reconstruct_density, trace_distance
from .states import DensityMatrix, StateVector, as_density

__all__ = [
    "TwoModeState",
    "BlockResult",
    "decompose_two_mode",
    "sample_two_mode",
    "blockwise_reconstruct",
]

NORM_TOL = 1e-10

Block = Union[StateVector, DensityMatrix]


@dataclass(frozen=True)
class TwoModeState:
    """Block-diagonal view of a two-mode state.

    ``blocks[j]`` is the normalised state within ``H_j`` and ``weights[j]``
    the probability of finding ``N = 2j`` quanta.
    ``phases_recoverable`` is False whenever a pure input spans several
    blocks, since the protocol cannot see their relative phases.
    """

    blocks: Mapping[HalfInteger, Block]
    weights: Mapping[HalfInteger, float]
    phases_recoverable: bool = True

    def __post_init__(self):
        if not self.blocks:
            raise DomainError("a two-mode state needs at least one block")
        if set(self.blocks) != set(self.weights):
            raise DomainError("blocks and weights must have the same keys")
        for j, b in self.blocks.items():
            if as_density(b).j != j:
                raise DomainError(f"block stored under j={j} lives on j={as_density(b).j}")
        w = np.array([self.weights[j] for j in self.blocks])
        if np.any(w < 0) or abs(w.sum() - 1.0) > NORM_TOL:
            raise DomainError("block weights must be non-negative and sum to 1")

    @property
    def js(self) -> list[HalfInteger]:
        return sorted(self.blocks)

    def block_density(self, j) -> DensityMatrix:
        return as_density(self.blocks[HalfInteger.of(j)])


def decompose_two_mode(amplitudes: Mapping[tuple[int, int], complex]) -> TwoModeState:
    """Group Fock amplitudes ``{(n1, n2): c}`` into spin blocks with ``j = (n1 + n2)/2``."""
    if not amplitudes:
        raise DomainError("no amplitudes given")
    norm = sum(abs(complex(c)) ** 2 for c in amplitudes.values())
    if abs(norm - 1.0) > NORM_TOL:
        raise DomainError(f"two-mode state has squared norm {norm}, not 1")
    vectors: dict[HalfInteger, np.ndarray] = {}
    for (n1, n2), c in amplitudes.items():
        j, mu = fock_to_su2(n1, n2)
        vec = vectors.setdefault(j, np.zeros(j.dim, dtype=complex))
        vec[(j.twice_value - mu.twice_value) // 2] += complex(c)
    blocks, weights = {}, {}
    for j in sorted(vectors):
        w = float(np.vdot(vectors[j], vectors[j]).real)
        if w == 0.0:
            continue
        blocks[j] = StateVector(j, vectors[j] / math.sqrt(w))
        weights[j] = w
    total = sum(weights.values())
    weights = {j: w / total for j, w in weights.items()}
    return TwoModeState(blocks, weights, phases_recoverable=len(blocks) == 1)


def sample_two_mode(state: TwoModeState, grid: SphereGrid, shots: int, seed: int,
                    block_probabilities: Mapping | None = None) -> dict[HalfInteger, MeasurementRecord]:
    """Joint ``(N, mu)`` readout at every node, split into per-block records.

    Each node draws one multinomial over all outcomes with probabilities
    ``weight_j * p^(j)_mu(n)``, using the same per-node random stream as
    :func:`~su2tomo.measure.sample_measurements`. The block totals are
    therefore binomial thinnings of ``shots``, and a single-block state
    reproduces the plain single-j record exactly.

    ``block_probabilities[j]`` may supply the conditional readout table of
    block ``j`` (for example from a simulated apparatus); by default it is
    computed from ``g(n)``.
    """
    if shots < 1:
        raise DomainError("shots must be >= 1")
    js = state.js
    if block_probabilities is None:
        block_probabilities = {j: probabilities_on_grid(state.block_density(j), grid) for j in js}
    probs = [state.weights[j] * np.asarray(block_probabilities[j], dtype=float) for j in js]
    joint = np.concatenate(probs, axis=1)
    edges = np.cumsum([0] + [j.dim for j in js])
    counts = np.empty(joint.shape, dtype=np.int64)
    for i in range(len(grid)):
        counts[i] = multinomial_counts(joint[i], shots, point_rng(seed, i))
    return {j: MeasurementRecord(grid, j, counts[:, edges[k]:edges[k + 1]], seed)
            for k, j in enumerate(js)}


@dataclass
class BlockResult:
    """Outcome of reconstructing one ``H_j`` block."""

    j: HalfInteger
    weight: float
    estimate: DensityMatrix | None = None
    effective_shots: int = 0
    expected_shots: float = 0.0
    weight_estimate: float | None = None
    metrics: dict = field(default_factory=dict)
    reason: str | None = None

    @property
    def reconstructed(self) -> bool:
        return self.estimate is not None


def blockwise_reconstruct(state: TwoModeState, grid: SphereGrid | None = None,
                          shots: int = 0, seed: int = 0,
                          project: bool = False) -> dict[HalfInteger, BlockResult]:
    """Simulate the joint readout and reconstruct every block with the ``mu = j`` readout.

    ``shots = 0`` uses exact conditional probabilities. Blocks that receive
    no counts at some node are reported as unreconstructed instead of
    raising.
    """
    js = state.js
    if grid is None:
        grid = build_grid(max(js))
    results: dict[HalfInteger, BlockResult] = {}
    n_points = len(grid)
    if shots:
        records = sample_two_mode(state, grid, shots, seed)
    for j in js:
        truth = state.block_density(j)
        res = BlockResult(j, float(state.weights[j]))
        if shots:
            rec = records[j]
            res.effective_shots = int(rec.shots.sum())
            res.expected_shots = res.weight * shots * n_points
            res.weight_estimate = res.effective_shots / (shots * n_points)
            if np.any(rec.shots == 0):
                res.reason = "no counts at some displacement points"
                results[j] = res
                continue
            p: ProbabilityGrid = record_to_probability_grid(rec, j)
        else:
            p = exact_probability_grid(truth, grid, j)
            res.weight_estimate = res.weight
        try:
            est = reconstruct_density(p, project=project)
        except SU2TomoError as exc:
            res.reason = str(exc)
            results[j] = res
            continue
        res.estimate = est
        res.metrics = {
            "max_abs_diff": max_abs_diff(est, truth),
            "trace_distance": trace_distance(est, truth),
            "fidelity": fidelity(est, truth),
        }
        results[j] = res
    return results
