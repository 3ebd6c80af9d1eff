"""
End-to-end simulation and reconstruction driven by an :class:`ExperimentConfig`.

Physical frontends scan the sphere by choosing control settings for every
grid node, mapping them forward to the sphere point they realise, and
computing readout probabilities from the simulated apparatus operator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig
from .errors import DomainError
from .frontends import (interferometer_displacement, interferometer_settings,
                        interferometer_transform, ion_displacement, ion_settings, ion_transform,
                        ramsey_displacement, ramsey_settings, ramsey_transform)
from .halfint import HalfInteger
from .jc import JCInversion, jc_invert, jc_signal, sample_jc_signal
from .measure import (MeasurementRecord, ProbabilityGrid, SphereGrid, build_grid,
                      probabilities_on_grid, record_to_probability_grid, sample_from_probabilities)
from .reconstruct import (MultipoleCoefficients, fidelity, max_abs_diff,
                          multipoles_from_probabilities, density_from_multipoles,
                          project_to_physical, trace_distance)
from .states import DensityMatrix, as_density
from .twomode import TwoModeState, sample_two_mode

__all__ = ["Scan", "make_scan", "apparatus_probabilities", "SimulationBlock", "simulate",
           "BlockReconstruction", "reconstruct_block", "sweep", "fit_loglog_slope", "run_jc"]


@dataclass
class Scan:
    """Grid actually visited by the apparatus and the settings used at each node."""

    frontend: str
    grid: SphereGrid
    settings: list | None


def make_scan(cfg: ExperimentConfig, j: HalfInteger) -> Scan:
    base = build_grid(j, cfg.oversample)
    if cfg.frontend == "abstract":
        return Scan("abstract", base, None)
    if cfg.frontend == "ramsey":
        r = cfg.ramsey
        settings = [ramsey_settings(n, r["omega0"], r["omega"], r["omega2"]) for n in base.points]
        forward = ramsey_displacement
    elif cfg.frontend == "mach_zehnder":
        settings = [interferometer_settings(n, cfg.mach_zehnder["orientation"]) for n in base.points]
        forward = interferometer_displacement
    elif cfg.frontend == "trapped_ion":
        t = cfg.trapped_ion
        settings = [ion_settings(n, t["kappa"], t["eta1"], t["eta2"], t["Omega1"], t["Omega2"])
                    for n in base.points]
        forward = ion_displacement
    else:
        raise DomainError(f"unknown frontend {cfg.frontend!r}")
    pts = [forward(s) for s in settings]
    grid = SphereGrid([p.theta for p in pts], [p.phi for p in pts], base.weights)
    return Scan(cfg.frontend, grid, settings)


def apparatus_probabilities(scan: Scan, rho) -> np.ndarray:
    """Readout probabilities ``[node, mu_k]`` from the simulated apparatus operators."""
    rho = as_density(rho)
    if scan.settings is None:
        return probabilities_on_grid(rho, scan.grid)
    transform = {"ramsey": ramsey_transform, "mach_zehnder": interferometer_transform,
                 "trapped_ion": ion_transform}[scan.frontend]
    ops = np.stack([transform(rho.j, s) for s in scan.settings])
    probs = np.einsum("iab,bc,iac->ia", ops, rho.matrix, ops.conj()).real
    return np.clip(probs, 0.0, 1.0)


@dataclass
class SimulationBlock:
    j: HalfInteger
    probabilities: ProbabilityGrid
    record: MeasurementRecord | None
    weight: float = 1.0


def simulate(cfg: ExperimentConfig, shots: int | None = None,
             seed: int | None = None) -> dict[HalfInteger, SimulationBlock]:
    """Simulated data for the configured state, one entry per spin block."""
    shots = cfg.shots if shots is None else int(shots)
    seed = cfg.seed if seed is None else int(seed)
    truth = cfg.truth()
    if isinstance(truth, TwoModeState):
        scan = make_scan(cfg, max(truth.js))
        probs = {j: apparatus_probabilities(scan, truth.block_density(j)) for j in truth.js}
        out = {}
        records = (sample_two_mode(truth, scan.grid, shots, seed, block_probabilities=probs)
                   if shots else {})
        for j in truth.js:
            if shots:
                rec = records[j]
                p = record_to_probability_grid(rec, j)
            else:
                rec = None
                p = ProbabilityGrid(scan.grid, j, j, probs[j][:, 0])
            out[j] = SimulationBlock(j, p, rec, float(truth.weights[j]))
        return out
    rho = as_density(truth)
    mu = cfg.readout_mu(rho.j)
    col = (rho.j.twice_value - mu.twice_value) // 2
    scan = make_scan(cfg, rho.j)
    probs = apparatus_probabilities(scan, rho)
    if shots:
        rec = sample_from_probabilities(probs, scan.grid, rho.j, shots, seed, workers=cfg.workers)
        p = record_to_probability_grid(rec, mu)
    else:
        rec = None
        p = ProbabilityGrid(scan.grid, rho.j, mu, probs[:, col])
    return {rho.j: SimulationBlock(rho.j, p, rec)}


@dataclass
class BlockReconstruction:
    j: HalfInteger
    mu: HalfInteger
    multipoles: MultipoleCoefficients
    estimate: DensityMatrix
    metrics: dict
    seconds: float
    shots_total: int
    shots_per_point: int

    def report(self) -> dict:
        return {
            "two_j": self.j.twice_value,
            "two_mu": self.mu.twice_value,
            "shots_total": self.shots_total,
            "shots_per_point": self.shots_per_point,
            "physical": self.estimate.is_physical,
            "metrics": self.metrics,
            "multipoles": [{"l": l, "m": m, "re": v.real, "im": v.imag}
                           for (l, m), v in self.multipoles.items()],
        }


def reconstruct_block(p: ProbabilityGrid, truth=None, project: bool = False) -> BlockReconstruction:
    """Multipole inversion of one probability grid, with metrics when ``truth`` is known."""
    t0 = time.perf_counter()
    R = multipoles_from_probabilities(p)
    est = density_from_multipoles(R)
    if project:
        est = project_to_physical(est)
    seconds = time.perf_counter() - t0
    metrics = {}
    if truth is not None:
        truth = as_density(truth)
        metrics = {"fidelity": fidelity(est, truth), "trace_distance": trace_distance(est, truth),
                   "max_abs_diff": max_abs_diff(est, truth)}
    return BlockReconstruction(p.j, p.mu, R, est, metrics, seconds,
                               int(p.shots.sum()), p.shots_per_point)


def truth_for(cfg: ExperimentConfig | None, j: HalfInteger):
    """The configured state restricted to block ``j``, or None if the config has no such block."""
    if cfg is None:
        return None
    truth = cfg.truth()
    if isinstance(truth, TwoModeState):
        return truth.block_density(j) if j in truth.blocks else None
    rho = as_density(truth)
    return rho if rho.j == j else None


def fit_loglog_slope(shots, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(shots)``."""
    x = np.log(np.asarray(shots, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def sweep(cfg: ExperimentConfig, shot_levels, n_seeds: int) -> dict:
    """Reconstruction error (``max_abs_diff``) versus shots per point.

    Seeds ``cfg.seed, cfg.seed + 1, ...`` are used at every level. A level of
    0 shots is the exact baseline.
    """
    levels = sorted(set(int(s) for s in shot_levels))
    if len([s for s in levels if s > 0]) < 2:
        raise DomainError("a sweep needs at least two positive shot levels")
    if n_seeds < 5:
        raise DomainError("a sweep needs at least five seeds")
    if cfg.is_two_mode:
        raise DomainError("sweeps are defined for single-spin states")
    truth = as_density(cfg.truth())
    rows = []
    for s in levels:
        seeds = [cfg.seed] if s == 0 else [cfg.seed + k for k in range(n_seeds)]
        errs = []
        for sd in seeds:
            block = simulate(cfg, shots=s, seed=sd)[truth.j]
            errs.append(reconstruct_block(block.probabilities, truth).metrics["max_abs_diff"])
        q25, med, q75 = np.percentile(errs, [25, 50, 75])
        rows.append({"shots": s, "seeds": len(seeds), "median": float(med),
                     "q25": float(q25), "q75": float(q75)})
    sampled = [r for r in rows if r["shots"] > 0]
    slope = fit_loglog_slope([r["shots"] for r in sampled], [r["median"] for r in sampled])
    return {"two_j": truth.j.twice_value, "metric": "max_abs_diff", "levels": rows, "slope": slope}


@dataclass
class JCRun:
    times: np.ndarray
    signal: np.ndarray
    truth: np.ndarray
    inversion: JCInversion

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.inversion.populations - self.truth)))


def run_jc(cfg: ExperimentConfig, populations=None, shots: int | None = None,
           seed: int | None = None) -> JCRun:
    """Forward-model the JC signal, optionally sample it, and invert for populations."""
    params = cfg.jc_params()
    pops = cfg.jc.get("populations") if populations is None else populations
    if pops is None:
        raise DomainError("no populations given (config jc.populations or an input file)")
    pops = np.asarray(pops, dtype=float)
    shots = cfg.jc["shots"] if shots is None else int(shots)
    seed = cfg.seed if seed is None else int(seed)
    signal = sample_jc_signal(pops, params, shots, seed) if shots else jc_signal(pops, params)
    inv = jc_invert(signal, params, method=cfg.jc["method"])
    return JCRun(params.times, signal, pops, inv)

