"""
Experiment configuration documents.

A configuration is one JSON object. Angles are radians, frequencies rad/s
and times seconds; nothing is converted. Validation errors carry the path of
the offending field, e.g. ``state.components[1].weight``.

Example::

    {
      "frontend": "abstract",
      "two_j": 2,
      "state": {"kind": "coherent", "theta": 0.7, "phi": 1.2},
      "readout_two_mu": 2,
      "grid": {"oversample": 1.0},
      "shots": 10000,
      "seed": 7,
      "s_values": [-1, 0, 1],
      "output_dir": "out"
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError, SU2TomoError
from .halfint import HalfInteger
from .jc import JCReadoutParams
from .states import (DensityMatrix, StateVector, make_coherent, make_dicke, make_mixture,
                     make_superposition)
from .su2 import SpherePoint
from .twomode import TwoModeState, decompose_two_mode

__all__ = ["ExperimentConfig", "load_config", "parse_config", "build_state",
           "FRONTENDS", "STATE_KINDS"]

FRONTENDS = ("abstract", "ramsey", "mach_zehnder", "trapped_ion")
STATE_KINDS = ("dicke", "coherent", "superposition", "mixture", "two_mode")
_TWO_MODE_FRONTENDS = ("mach_zehnder", "trapped_ion")


def _get(doc: dict, key: str, path: str, kind, default=..., check=None):
    full = f"{path}.{key}" if path else key
    if key not in doc:
        if default is ...:
            raise ConfigError(full, "required field is missing")
        return default
    val = doc[key]
    if kind is float:
        ok = isinstance(val, (int, float)) and not isinstance(val, bool) and math.isfinite(val)
        val = float(val) if ok else val
    elif kind is int:
        ok = isinstance(val, int) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind)
    if not ok:
        raise ConfigError(full, f"expected {getattr(kind, '__name__', kind)}, got {val!r}")
    if check is not None:
        msg = check(val)
        if msg:
            raise ConfigError(full, msg)
    return val


def _obj(doc, path: str) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(path, "expected a JSON object")
    return doc


def _nonneg(v):
    return None if v >= 0 else "must be non-negative"


def _positive(v):
    return None if v > 0 else "must be positive"


@dataclass
class ExperimentConfig:
    """Validated configuration; ``raw`` keeps the original document for report echoes."""

    frontend: str
    two_j: int | None
    state: dict
    readout_two_mu: int | None
    oversample: float
    shots: int
    seed: int
    s_values: list[int]
    output_dir: str
    workers: int = 1
    ramsey: dict = field(default_factory=dict)
    mach_zehnder: dict = field(default_factory=dict)
    trapped_ion: dict = field(default_factory=dict)
    jc: dict | None = None
    sweep: dict | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def is_two_mode(self) -> bool:
        return self.state["kind"] == "two_mode"

    @property
    def j(self) -> HalfInteger | None:
        return None if self.two_j is None else HalfInteger(self.two_j)

    def readout_mu(self, j: HalfInteger) -> HalfInteger:
        """Configured readout, defaulting to ``mu = j``; two-mode blocks always use ``mu = j``."""
        if self.readout_two_mu is None or self.is_two_mode:
            return j
        return HalfInteger(self.readout_two_mu)

    def truth(self):
        """The configured state: a DensityMatrix/StateVector, or a TwoModeState."""
        return build_state(self.state, self.two_j)

    def jc_params(self) -> JCReadoutParams:
        if self.jc is None:
            raise ConfigError("jc", "section is missing")
        return _jc_params(self.jc)


# ---------------------------------------------------------------------------
# state specifications


def _complex_list(doc, path: str) -> np.ndarray:
    re = _get(doc, "re", path, list)
    im = _get(doc, "im", path, list, default=[0.0] * len(re))
    if len(re) != len(im):
        raise ConfigError(f"{path}.im", "must have the same length as re")
    vals = []
    for k, (a, b) in enumerate(zip(re, im)):
        for name, v in (("re", a), ("im", b)):
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ConfigError(f"{path}.{name}[{k}]", f"expected a number, got {v!r}")
        vals.append(complex(a, b))
    return np.array(vals)


def _single_state(doc, two_j: int, path: str):
    doc = _obj(doc, path)
    kind = _get(doc, "kind", path, str)
    j = HalfInteger(two_j)
    try:
        if kind == "dicke":
            tm = _get(doc, "two_mu", path, int)
            if abs(tm) > two_j or (two_j - tm) % 2:
                raise ConfigError(f"{path}.two_mu", f"must be one of {two_j}, {two_j - 2}, ..., {-two_j}")
            return make_dicke(j, HalfInteger(tm))
        if kind == "coherent":
            theta = _get(doc, "theta", path, float)
            phi = _get(doc, "phi", path, float)
            return make_coherent(j, SpherePoint.from_angles(theta, phi))
        if kind == "superposition":
            c = _complex_list(doc, path)
            if c.size != j.dim:
                raise ConfigError(f"{path}.re", f"needs {j.dim} amplitudes (mu = j ... -j)")
            return make_superposition(j, c)
        if kind == "mixture":
            comps = _get(doc, "components", path, list)
            if not comps:
                raise ConfigError(f"{path}.components", "needs at least one component")
            parts = []
            for k, c in enumerate(comps):
                cp = f"{path}.components[{k}]"
                c = _obj(c, cp)
                w = _get(c, "weight", cp, float, check=_positive)
                parts.append((w, _single_state(_get(c, "state", cp, dict), two_j, f"{cp}.state")))
            return make_mixture(parts)
    except ConfigError:
        raise
    except SU2TomoError as exc:
        raise ConfigError(path, str(exc)) from None
    if kind == "two_mode":
        raise ConfigError(f"{path}.kind", "two_mode is only allowed at the top level")
    raise ConfigError(f"{path}.kind", f"unknown state kind {kind!r}; expected one of {STATE_KINDS}")


def _two_mode_state(doc, path: str) -> TwoModeState:
    amps = _get(doc, "amplitudes", path, list)
    if not amps:
        raise ConfigError(f"{path}.amplitudes", "needs at least one entry")
    table: dict[tuple[int, int], complex] = {}
    for k, a in enumerate(amps):
        ap = f"{path}.amplitudes[{k}]"
        a = _obj(a, ap)
        n1 = _get(a, "n1", ap, int, check=_nonneg)
        n2 = _get(a, "n2", ap, int, check=_nonneg)
        if (n1, n2) in table:
            raise ConfigError(ap, f"duplicate Fock pair ({n1}, {n2})")
        table[(n1, n2)] = complex(_get(a, "re", ap, float), _get(a, "im", ap, float, default=0.0))
    try:
        return decompose_two_mode(table)
    except SU2TomoError as exc:
        raise ConfigError(f"{path}.amplitudes", str(exc)) from None


def build_state(doc, two_j: int | None, path: str = "state") -> StateVector | DensityMatrix | TwoModeState:
    doc = _obj(doc, path)
    if doc.get("kind") == "two_mode":
        return _two_mode_state(doc, path)
    if two_j is None:
        raise ConfigError("two_j", "required for single-spin states")
    return _single_state(doc, two_j, path)


# ---------------------------------------------------------------------------
# sub-documents


_FRONTEND_FIELDS = {
    "ramsey": ("omega0", "omega", "omega2"),
    "mach_zehnder": (),
    "trapped_ion": ("kappa", "eta1", "eta2", "Omega1", "Omega2"),
}


def _frontend_doc(doc, name: str, required: bool) -> dict:
    if name not in doc:
        if required and _FRONTEND_FIELDS[name]:
            raise ConfigError(name, f"frontend {name!r} needs a {name!r} section")
        return {}
    sub = _obj(doc[name], name)
    out = {k: _get(sub, k, name, float) for k in _FRONTEND_FIELDS[name]}
    if name == "ramsey" and out["omega0"] == out["omega"]:
        raise ConfigError("ramsey.omega", "must differ from omega0 so the precession can scan phi")
    if name == "ramsey" and out["omega2"] == 0:
        raise ConfigError("ramsey.omega2", "must be non-zero")
    if name == "mach_zehnder":
        out["orientation"] = _get(sub, "orientation", name, int, default=1,
                                  check=lambda v: None if v in (1, -1) else "must be +1 or -1")
    if name == "trapped_ion":
        if out["Omega1"] == out["Omega2"]:
            raise ConfigError("trapped_ion.Omega2", "must differ from Omega1")
        if out["kappa"] * out["eta1"] * out["eta2"] == 0:
            raise ConfigError("trapped_ion", "kappa * eta1 * eta2 must be non-zero")
    return out


def _jc_doc(doc, path: str = "jc") -> dict:
    doc = _obj(doc, path)
    out: dict[str, Any] = {
        "Omega0": _get(doc, "Omega0", path, float, check=_positive),
        "n_max": _get(doc, "n_max", path, int, check=_nonneg),
        "gamma0": _get(doc, "gamma0", path, float, default=0.0, check=_nonneg),
        "shots": _get(doc, "shots", path, int, default=0, check=_nonneg),
        "method": _get(doc, "method", path, str, default="nnls",
                       check=lambda v: None if v in ("nnls", "lstsq") else "must be 'nnls' or 'lstsq'"),
    }
    if "times" in doc:
        t = doc["times"]
        if isinstance(t, dict):
            out["times"] = np.linspace(0.0, _get(t, "t_max", f"{path}.times", float, check=_positive),
                                       _get(t, "count", f"{path}.times", int, check=_positive))
        elif isinstance(t, list):
            out["times"] = np.array(t, dtype=float)
        else:
            raise ConfigError(f"{path}.times", "expected a list or {t_max, count}")
    else:
        out["times"] = np.linspace(0.0, 20.0 / out["Omega0"], 400)
    for key in ("gammas", "rabi", "populations"):
        if key in doc and doc[key] is not None:
            vals = _get(doc, key, path, list)
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
                raise ConfigError(f"{path}.{key}", "expected a list of numbers")
            out[key] = np.array(vals, dtype=float)
    try:
        _jc_params(out)
    except SU2TomoError as exc:
        raise ConfigError(path, str(exc)) from None
    return out


def _jc_params(d: dict) -> JCReadoutParams:
    return JCReadoutParams(d["Omega0"], d["times"], d["n_max"], gammas=d.get("gammas"),
                           gamma0=d.get("gamma0", 0.0), rabi=d.get("rabi"))


def _sweep_doc(doc, path: str = "sweep") -> dict:
    doc = _obj(doc, path)
    shots = _get(doc, "shots", path, list, default=[100, 1000, 10000, 100000, 1000000])
    for k, s in enumerate(shots):
        if not isinstance(s, int) or isinstance(s, bool) or s < 0:
            raise ConfigError(f"{path}.shots[{k}]", "shot levels must be non-negative integers")
    return {"shots": shots, "seeds": _get(doc, "seeds", path, int, default=20, check=_positive)}


# ---------------------------------------------------------------------------


def parse_config(doc) -> ExperimentConfig:
    """Validate a configuration document.

    Raises
    ------
    ConfigError
        Naming the first offending field.
    """
    doc = _obj(doc, "")
    frontend = _get(doc, "frontend", "", str, default="abstract",
                    check=lambda v: None if v in FRONTENDS else f"must be one of {FRONTENDS}")
    state_doc = _obj(_get(doc, "state", "", dict), "state")
    kind = _get(state_doc, "kind", "state", str)
    two_mode = kind == "two_mode"
    if two_mode and frontend not in _TWO_MODE_FRONTENDS:
        raise ConfigError("frontend", f"two_mode states need one of {_TWO_MODE_FRONTENDS}, got {frontend!r}")
    two_j = _get(doc, "two_j", "", int, default=None, check=_nonneg)
    if two_j is None and not two_mode:
        raise ConfigError("two_j", "required field is missing")
    readout = _get(doc, "readout_two_mu", "", int, default=None)
    if readout is not None and two_j is not None and (abs(readout) > two_j or (two_j - readout) % 2):
        raise ConfigError("readout_two_mu", f"must be one of {two_j}, {two_j - 2}, ..., {-two_j}")
    grid = _obj(doc.get("grid", {}), "grid")
    oversample = _get(grid, "oversample", "grid", float, default=1.0,
                      check=lambda v: None if v >= 1.0 else "must be >= 1")
    s_values = _get(doc, "s_values", "", list, default=[-1, 0, 1])
    for k, s in enumerate(s_values):
        if s not in (-1, 0, 1) or isinstance(s, bool):
            raise ConfigError(f"s_values[{k}]", "must be -1, 0 or 1")
    cfg = ExperimentConfig(
        frontend=frontend,
        two_j=two_j,
        state=state_doc,
        readout_two_mu=readout,
        oversample=oversample,
        shots=_get(doc, "shots", "", int, default=0, check=_nonneg),
        seed=_get(doc, "seed", "", int, default=0,
                  check=lambda v: None if 0 <= v < 2 ** 64 else "must be an unsigned 64-bit integer"),
        s_values=list(s_values),
        output_dir=_get(doc, "output_dir", "", str, default="out"),
        workers=_get(doc, "workers", "", int, default=1, check=_positive),
        raw=doc,
    )
    for name in _FRONTEND_FIELDS:
        setattr(cfg, name, _frontend_doc(doc, name, required=frontend == name))
    if "jc" in doc:
        cfg.jc = _jc_doc(doc["jc"])
    if "sweep" in doc:
        cfg.sweep = _sweep_doc(doc["sweep"])
    # builds the state once so bad amplitudes are reported at load time
    build_state(state_doc, two_j)
    return cfg


def load_config(path) -> ExperimentConfig:
    """Read and validate a configuration file (I/O errors propagate as ``OSError``)."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("", f"{path}, line {exc.lineno}: {exc.msg}") from None
    return parse_config(doc)
