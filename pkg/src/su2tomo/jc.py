"""
Motional-population readout through Jaynes-Cummings Rabi oscillations.

With the ion starting in its lower internal level, the averaged lower-level
population is

    P_minus(t) = 1/2 [1 + sum_n P_n cos(2 Omega_{n,n+1} t) exp(-gamma_n t)]

and the populations ``P_n`` follow from a non-negative least-squares fit.
Rabi frequencies default to the resonant law ``Omega_0 sqrt(n+1)`` and decay
constants to ``gamma_0 (n+1)^0.7``; both can be replaced by measured tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .errors import DomainError, JCInversionError
from .measure import point_rng

__all__ = ["JCReadoutParams", "JCInversion", "jc_design_matrix", "jc_signal",
           "jc_invert", "sample_jc_signal"]

MAX_CONDITION = 1e10
DECAY_EXPONENT = 0.7


@dataclass(frozen=True, eq=False)
class JCReadoutParams:
    """Readout model: base Rabi frequency, sampling times and population cutoff."""

    Omega0: float
    times: np.ndarray
    n_max: int
    gammas: np.ndarray | None = None
    gamma0: float = 0.0
    rabi: np.ndarray | None = None

    def __post_init__(self):
        times = np.array(self.times, dtype=float).ravel()
        if times.size == 0 or np.any(times < 0) or np.any(np.diff(times) <= 0):
            raise DomainError("times must be non-negative and strictly increasing")
        if int(self.n_max) < 0:
            raise DomainError("n_max must be non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "n_max", int(self.n_max))
        for name in ("gammas", "rabi"):
            val = getattr(self, name)
            if val is not None:
                val = np.array(val, dtype=float).ravel()
                if val.size != self.n_max + 1:
                    raise DomainError(f"{name} needs n_max + 1 = {self.n_max + 1} entries")
                object.__setattr__(self, name, val)
        if self.gammas is not None and np.any(self.gammas < 0):
            raise DomainError("decay constants must be non-negative")

    def rabi_frequencies(self) -> np.ndarray:
        if self.rabi is not None:
            return self.rabi
        return self.Omega0 * np.sqrt(np.arange(self.n_max + 1) + 1.0)

    def decay_constants(self) -> np.ndarray:
        if self.gammas is not None:
            return self.gammas
        return self.gamma0 * (np.arange(self.n_max + 1) + 1.0) ** DECAY_EXPONENT


def jc_design_matrix(p: JCReadoutParams) -> np.ndarray:
    """``M[i, n] = cos(2 Omega_n t_i) exp(-gamma_n t_i) / 2``."""
    t = p.times[:, None]
    return 0.5 * np.cos(2 * p.rabi_frequencies()[None, :] * t) * np.exp(-p.decay_constants()[None, :] * t)


def _check_populations(populations, p: JCReadoutParams) -> np.ndarray:
    pop = np.asarray(populations, dtype=float).ravel()
    if pop.size != p.n_max + 1:
        raise DomainError(f"expected {p.n_max + 1} populations, got {pop.size}")
    if np.any(pop < 0):
        raise DomainError("populations must be non-negative")
    if pop.sum() > 1 + 1e-12:
        raise DomainError("populations sum to more than 1")
    return pop


def jc_signal(populations, p: JCReadoutParams) -> np.ndarray:
    """Lower-level population ``P_minus(t)`` at ``p.times``."""
    pop = _check_populations(populations, p)
    return 0.5 + jc_design_matrix(p) @ pop


@dataclass(frozen=True)
class JCInversion:
    populations: np.ndarray
    residual_norm: float
    condition_number: float


def jc_invert(signal, p: JCReadoutParams, method: str = "nnls") -> JCInversion:
    """Fit ``P_n`` to a measured ``P_minus(t)`` trace.

    ``method="nnls"`` enforces non-negative populations; ``"lstsq"`` is the
    unconstrained fit, useful for diagnostics.

    Raises
    ------
    JCInversionError
        If the design matrix has condition number above 1e10.
    """
    y = np.asarray(signal, dtype=float).ravel()
    if y.size != p.times.size:
        raise DomainError("signal and times have different lengths")
    if y.size < p.n_max + 1:
        raise DomainError("need at least n_max + 1 time samples")
    m = jc_design_matrix(p)
    cond = float(np.linalg.cond(m))
    if not cond <= MAX_CONDITION:
        raise JCInversionError(
            f"design matrix condition number {cond:.3g} exceeds {MAX_CONDITION:g}; "
            "use a longer or denser time grid")
    rhs = y - 0.5
    if method == "nnls":
        pop, _ = nnls(m, rhs)
    elif method == "lstsq":
        pop = np.linalg.lstsq(m, rhs, rcond=None)[0]
    else:
        raise DomainError(f"unknown method {method!r}")
    resid = float(np.linalg.norm(m @ pop - rhs))
    return JCInversion(pop, resid, cond)


def sample_jc_signal(populations, p: JCReadoutParams, shots: int, seed: int) -> np.ndarray:
    """Empirical ``P_minus(t)`` from ``shots`` Bernoulli readouts per time point."""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    exact = np.clip(jc_signal(populations, p), 0.0, 1.0)
    counts = np.array([point_rng(seed, i).binomial(shots, q) for i, q in enumerate(exact)])
    return counts / shots
