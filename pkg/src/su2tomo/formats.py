"""
Text interchange formats.

JSON documents carry density matrices, multipole tables and population
arrays. CSV files carry grids with per-node data; their metadata sits in
leading ``# key=value`` lines. Floats are written with 17 significant digits
so binary64 values survive the round trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError
from .halfint import HalfInteger
from .measure import MeasurementRecord, ProbabilityGrid, SphereGrid
from .reconstruct import MultipoleCoefficients, QPDGrid
from .states import DensityMatrix
from .su2 import lm_index

__all__ = [
    "fmt",
    "density_to_json", "density_from_json", "write_density", "read_density",
    "multipoles_to_json", "multipoles_from_json", "write_multipoles", "read_multipoles",
    "write_measurement_csv", "read_measurement_csv",
    "write_probability_csv", "read_probability_csv",
    "write_qpd_csv", "read_qpd_csv",
    "write_jc_csv", "read_jc_csv", "write_sweep_csv",
    "write_json", "read_json", "ensure_dir",
]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# JSON


def write_json(doc, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def read_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(str(path), exc.lineno, exc.msg) from None


def _field(doc, key, source):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(source, None, f"missing field {key!r}")
    return doc[key]


def density_to_json(rho: DensityMatrix) -> dict:
    m = rho.matrix
    return {"two_j": rho.j.twice_value, "re": m.real.tolist(), "im": m.imag.tolist()}


def density_from_json(doc, source: str = "<density>", check: bool = True) -> DensityMatrix:
    two_j = _field(doc, "two_j", source)
    try:
        re = np.array(_field(doc, "re", source), dtype=float)
        im = np.array(_field(doc, "im", source), dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(source, None, f"matrix entries must be numbers ({exc})") from None
    if not isinstance(two_j, int) or two_j < 0:
        raise FormatError(source, None, "two_j must be a non-negative integer")
    if re.shape != (two_j + 1, two_j + 1) or im.shape != re.shape:
        raise FormatError(source, None, f"re and im must be {two_j + 1}x{two_j + 1}")
    return DensityMatrix(HalfInteger(two_j), re + 1j * im, check=check)


def write_density(rho: DensityMatrix, path) -> None:
    write_json(density_to_json(rho), path)


def read_density(path, check: bool = True) -> DensityMatrix:
    return density_from_json(read_json(path), str(path), check)


def multipoles_to_json(R: MultipoleCoefficients) -> dict:
    return {"two_j": R.j.twice_value,
            "coeffs": [{"l": l, "m": m, "re": v.real, "im": v.imag} for (l, m), v in R.items()]}


def multipoles_from_json(doc, source: str = "<multipoles>") -> MultipoleCoefficients:
    two_j = _field(doc, "two_j", source)
    if not isinstance(two_j, int) or two_j < 0:
        raise FormatError(source, None, "two_j must be a non-negative integer")
    vals = np.zeros((two_j + 1) ** 2, dtype=complex)
    seen = set()
    for k, c in enumerate(_field(doc, "coeffs", source)):
        try:
            l, m = int(c["l"]), int(c["m"])
            v = complex(float(c["re"]), float(c["im"]))
        except (KeyError, TypeError, ValueError):
            raise FormatError(source, None, f"coeffs[{k}] needs integer l, m and numeric re, im") from None
        if not (0 <= l <= two_j and abs(m) <= l) or (l, m) in seen:
            raise FormatError(source, None, f"coeffs[{k}] has invalid or repeated (l, m) = ({l}, {m})")
        seen.add((l, m))
        vals[lm_index(l, m)] = v
    return MultipoleCoefficients(HalfInteger(two_j), vals)


def write_multipoles(R: MultipoleCoefficients, path) -> None:
    write_json(multipoles_to_json(R), path)


def read_multipoles(path) -> MultipoleCoefficients:
    return multipoles_from_json(read_json(path), str(path))


# ---------------------------------------------------------------------------
# CSV


def _write_csv(path, meta: dict, header: list[str], rows, footer: dict | None = None) -> None:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    for k, v in (footer or {}).items():
        buf.write(f"# {k}={v}\n")
    Path(path).write_text(buf.getvalue())


def _read_csv(path, required: list[str]):
    """Return ``(meta, header, rows)`` where rows are lists of floats; errors name the line."""
    source = str(path)
    try:
        lines = Path(path).read_text().splitlines()
    except UnicodeDecodeError:
        raise FormatError(source, None, "not a text file") from None
    meta: dict[str, str] = {}
    header = None
    rows, line_numbers = [], []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                k, v = body.split("=", 1)
                meta[k.strip()] = v.strip()
            continue
        fields = next(csv.reader([line]))
        if header is None:
            header = [f.strip() for f in fields]
            missing = [c for c in required if c not in header]
            if missing:
                raise FormatError(source, lineno, f"header lacks column(s) {missing}")
            continue
        if len(fields) != len(header):
            raise FormatError(source, lineno, f"expected {len(header)} fields, found {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise FormatError(source, lineno, "non-numeric field") from None
        line_numbers.append(lineno)
    if header is None:
        raise FormatError(source, None, "no header line")
    if not rows:
        raise FormatError(source, None, "no data rows")
    return meta, header, np.array(rows), line_numbers


def _meta_int(meta, key, source) -> int:
    if key not in meta:
        raise FormatError(source, None, f"missing metadata line '# {key}=...'")
    try:
        return int(meta[key])
    except ValueError:
        raise FormatError(source, None, f"metadata {key} must be an integer") from None


def _grid_rows(grid: SphereGrid):
    return zip(grid.theta, grid.phi, grid.weights)


def _grid_from(data, header, source, line_numbers) -> SphereGrid:
    col = {h: k for k, h in enumerate(header)}
    theta, phi, w = data[:, col["theta"]], data[:, col["phi"]], data[:, col["weight"]]
    bad = np.flatnonzero((theta < 0) | (theta > np.pi) | (phi < 0) | (phi >= 2 * np.pi) | (w <= 0))
    if bad.size:
        raise FormatError(source, line_numbers[bad[0]], "grid node outside [0,pi]x[0,2pi) or non-positive weight")
    try:
        return SphereGrid(theta, phi, w)
    except DomainError as exc:
        raise FormatError(source, None, str(exc)) from None


def write_measurement_csv(rec: MeasurementRecord, path) -> None:
    tj = rec.j.twice_value
    header = ["theta", "phi", "weight", "shots"] + [f"c_{tm}" for tm in range(tj, -tj - 1, -2)]
    rows = ([fmt(t), fmt(p), fmt(w), int(s)] + [int(c) for c in cnt]
            for (t, p, w), s, cnt in zip(_grid_rows(rec.grid), rec.shots, rec.counts))
    _write_csv(path, {"kind": "measurement", "two_j": tj, "seed": rec.seed}, header, rows)


def read_measurement_csv(path) -> MeasurementRecord:
    source = str(path)
    meta, header, data, lines = _read_csv(path, ["theta", "phi", "weight", "shots"])
    tj = _meta_int(meta, "two_j", source)
    cols = [f"c_{tm}" for tm in range(tj, -tj - 1, -2)]
    missing = [c for c in cols if c not in header]
    if missing:
        raise FormatError(source, None, f"header lacks count column(s) {missing}")
    idx = [header.index(c) for c in cols]
    counts = data[:, idx]
    shots = data[:, header.index("shots")]
    for arr in (counts, shots):
        bad = np.flatnonzero((arr != np.round(arr)).any(axis=-1) if arr.ndim == 2 else arr != np.round(arr))
        if bad.size:
            raise FormatError(source, lines[bad[0]], "counts must be integers")
    grid = _grid_from(data, header, source, lines)
    try:
        return MeasurementRecord(grid, HalfInteger(tj), counts.astype(np.int64),
                                 int(meta.get("seed", 0)), shots.astype(np.int64))
    except DomainError as exc:
        raise FormatError(source, None, str(exc)) from None


def write_probability_csv(p: ProbabilityGrid, path) -> None:
    rows = ([fmt(t), fmt(ph), fmt(w), int(s), fmt(v)]
            for (t, ph, w), s, v in zip(_grid_rows(p.grid), p.shots, p.values))
    _write_csv(path, {"kind": "probability", "two_j": p.j.twice_value, "two_mu": p.mu.twice_value},
               ["theta", "phi", "weight", "shots", "p"], rows)


def read_probability_csv(path) -> ProbabilityGrid:
    source = str(path)
    meta, header, data, lines = _read_csv(path, ["theta", "phi", "weight", "p"])
    tj = _meta_int(meta, "two_j", source)
    tm = _meta_int(meta, "two_mu", source)
    vals = data[:, header.index("p")]
    bad = np.flatnonzero((vals < 0) | (vals > 1))
    if bad.size:
        raise FormatError(source, lines[bad[0]], "probability outside [0, 1]")
    shots = data[:, header.index("shots")].astype(np.int64) if "shots" in header else None
    grid = _grid_from(data, header, source, lines)
    try:
        return ProbabilityGrid(grid, HalfInteger(tj), HalfInteger(tm), vals, shots)
    except DomainError as exc:
        raise FormatError(source, None, str(exc)) from None


def write_qpd_csv(q: QPDGrid, path, footer: dict | None = None) -> None:
    rows = ([fmt(t), fmt(ph), fmt(w), fmt(v)] for (t, ph, w), v in zip(_grid_rows(q.grid), q.values))
    _write_csv(path, {"kind": "qpd", "two_j": q.j.twice_value, "s": q.s},
               ["theta", "phi", "weight", "value"], rows, footer)


def read_qpd_csv(path) -> QPDGrid:
    source = str(path)
    meta, header, data, lines = _read_csv(path, ["theta", "phi", "weight", "value"])
    tj = _meta_int(meta, "two_j", source)
    s = _meta_int(meta, "s", source)
    grid = _grid_from(data, header, source, lines)
    try:
        return QPDGrid(grid, HalfInteger(tj), s, data[:, header.index("value")])
    except DomainError as exc:
        raise FormatError(source, None, str(exc)) from None


def write_jc_csv(times, signal, path) -> None:
    _write_csv(path, {"kind": "jc_signal"}, ["t", "signal"],
               ([fmt(t), fmt(v)] for t, v in zip(times, signal)))


def read_jc_csv(path) -> tuple[np.ndarray, np.ndarray]:
    _, header, data, _ = _read_csv(path, ["t", "signal"])
    return data[:, header.index("t")], data[:, header.index("signal")]


def write_sweep_csv(result: dict, path) -> None:
    rows = ([r["shots"], r["seeds"], fmt(r["median"]), fmt(r["q25"]), fmt(r["q75"])]
            for r in result["levels"])
    _write_csv(path, {"kind": "sweep", "metric": result["metric"], "slope": fmt(result["slope"])},
               ["shots", "seeds", "median", "q25", "q75"], rows)


def ensure_dir(path) -> Path:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    return p
