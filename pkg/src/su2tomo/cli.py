"""
Command-line interface.

    su2tomo simulate    --config CFG [--seed N] [--shots N] [--out DIR]
    su2tomo reconstruct --config CFG [--input FILE ...] [--out DIR] [--project]
    su2tomo qpd         [--config CFG] [--input FILE] [--s S ...] [--route multipole|kernel]
    su2tomo sweep       --config CFG [--shots N ...] [--seeds K]
    su2tomo jc          --config CFG [--input POPS.json] [--shots N] [--seed N]

Exit codes: 0 success, 2 configuration error, 3 numerical or protocol
error, 4 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import formats
from .config import ExperimentConfig, load_config
from .errors import ConfigError, FormatError, SU2TomoError
from .halfint import HalfInteger
from .measure import ProbabilityGrid, build_grid, exact_probability_grid, record_to_probability_grid
from .pipeline import reconstruct_block, run_jc, simulate, sweep, truth_for
from .reconstruct import (check_readout, multipoles_from_density, multipoles_from_probabilities,
                          qpd_from_multipoles, qpd_from_probabilities)
from .states import as_density

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _config(args, required: bool = True) -> ExperimentConfig | None:
    if args.config is None:
        if required:
            raise ConfigError("", "--config is required for this command")
        return None
    return load_config(args.config)


def _out_dir(args, cfg: ExperimentConfig | None) -> Path:
    out = args.out or (cfg.output_dir if cfg is not None else "out")
    return formats.ensure_dir(out)


def _suffix(j: HalfInteger, multi: bool) -> str:
    return f"_j{j.twice_value}" if multi else ""


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.shots is not None:
        cfg.shots = args.shots
    if not cfg.is_two_mode:
        check_readout(cfg.j, cfg.readout_mu(cfg.j))
    out = _out_dir(args, cfg)
    blocks = simulate(cfg)
    multi = cfg.is_two_mode
    for j, block in blocks.items():
        sfx = _suffix(j, multi)
        formats.write_probability_csv(block.probabilities, out / f"probability{sfx}.csv")
        if block.record is not None:
            formats.write_measurement_csv(block.record, out / f"measurement{sfx}.csv")
        formats.write_density(truth_for(cfg, j), out / f"truth{sfx}.json")
        _log(f"j={j}: {len(block.probabilities.grid)} nodes, "
             f"{'exact' if cfg.shots == 0 else f'{cfg.shots} shots/node'} -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# reconstruct


def _load_probabilities(path, cfg: ExperimentConfig | None) -> ProbabilityGrid:
    """A probability CSV, or a measurement CSV reduced with the configured readout."""
    meta = _csv_kind(path)
    if meta == "measurement":
        rec = formats.read_measurement_csv(path)
        mu = cfg.readout_mu(rec.j) if cfg is not None else rec.j
        return record_to_probability_grid(rec, mu)
    return formats.read_probability_csv(path)


def _csv_kind(path) -> str:
    with open(path) as fh:
        for line in fh:
            if line.startswith("# kind="):
                return line.split("=", 1)[1].strip()
            if not line.startswith("#"):
                break
    return "probability"


def _unusable(p: ProbabilityGrid) -> str | None:
    if not p.exact and np.any(p.shots == 0):
        return "no counts at some displacement points"
    if p.exact and not np.any(p.values):
        return "no data in this block"
    return None


def cmd_reconstruct(args) -> int:
    cfg = _config(args, required=not args.input)
    out = _out_dir(args, cfg)
    if args.input:
        grids = [_load_probabilities(path, cfg) for path in args.input]
        sources = [str(p) for p in args.input]
    else:
        blocks = simulate(cfg)
        grids = [b.probabilities for b in blocks.values()]
        sources = ["<simulated>"] * len(grids)
    multi = len(grids) > 1
    report_blocks, timing = [], []
    for p, src in zip(grids, sources):
        reason = _unusable(p)
        if reason is not None:
            report_blocks.append({"two_j": p.j.twice_value, "source": src, "reconstructed": False,
                                  "reason": reason})
            _log(f"j={p.j}: not reconstructed ({reason})")
            continue
        res = reconstruct_block(p, truth_for(cfg, p.j), project=args.project)
        sfx = _suffix(p.j, multi)
        formats.write_density(res.estimate, out / f"density{sfx}.json")
        formats.write_multipoles(res.multipoles, out / f"multipoles{sfx}.json")
        entry = {"source": src, "reconstructed": True}
        entry.update(res.report())
        report_blocks.append(entry)
        timing.append({"two_j": p.j.twice_value, "seconds": res.seconds})
        summary = ", ".join(f"{k}={v:.3e}" for k, v in res.metrics.items()) or "no reference state"
        _log(f"j={p.j}: {summary}")
    report = {"config": cfg.raw if cfg is not None else None, "blocks": report_blocks}
    formats.write_json(report, out / "report.json")
    formats.write_json({"blocks": timing}, out / "timing.json")
    return EXIT_OK


# ---------------------------------------------------------------------------
# qpd


def cmd_qpd(args) -> int:
    cfg = _config(args, required=args.input is None)
    oversample = cfg.oversample if cfg is not None else 1.0
    out = _out_dir(args, cfg)
    if args.input is not None and str(args.input).endswith(".json"):
        rho = formats.read_density(args.input, check=False)
        grid = build_grid(rho.j, oversample)
        R = multipoles_from_density(rho)
        p = exact_probability_grid(rho, grid)
    elif args.input is not None:
        p = _load_probabilities(args.input, cfg)
        grid = p.grid
        R = multipoles_from_probabilities(p)
    else:
        truth = cfg.truth()
        rho = as_density(truth) if not cfg.is_two_mode else None
        if rho is None:
            raise ConfigError("state", "qpd needs a single-spin state or an --input file")
        grid = build_grid(rho.j, oversample)
        R = multipoles_from_density(rho)
        p = exact_probability_grid(rho, grid)
    s_values = args.s if args.s else (cfg.s_values if cfg is not None else [-1, 0, 1])
    for s in s_values:
        by_multipole = qpd_from_multipoles(R, s, grid)
        by_kernel = qpd_from_probabilities(p, s, grid)
        chosen = by_multipole if args.route == "multipole" else by_kernel
        gap = float(np.max(np.abs(by_multipole.values - by_kernel.values)))
        norm = chosen.normalization()
        formats.write_qpd_csv(chosen, out / f"qpd_s{s}.csv",
                              footer={"route": args.route, "normalization": formats.fmt(norm),
                                      "route_discrepancy": formats.fmt(gap)})
        print(f"s={s:+d} route={args.route} normalization={norm:.15f} route_discrepancy={gap:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if args.seed is not None:
        cfg.seed = args.seed
    defaults = cfg.sweep or {"shots": [100, 1000, 10000, 100000, 1000000], "seeds": 20}
    levels = args.shots if args.shots else defaults["shots"]
    n_seeds = args.seeds if args.seeds is not None else defaults["seeds"]
    if not cfg.is_two_mode:
        check_readout(cfg.j, cfg.readout_mu(cfg.j))
    out = _out_dir(args, cfg)
    result = sweep(cfg, levels, n_seeds)
    formats.write_sweep_csv(result, out / "sweep.csv")
    formats.write_json({"config": cfg.raw, **result}, out / "sweep.json")
    for r in result["levels"]:
        print(f"shots={r['shots']:>8d} median={r['median']:.3e} iqr=[{r['q25']:.3e}, {r['q75']:.3e}]")
    print(f"log-log slope = {result['slope']:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# jc


def cmd_jc(args) -> int:
    cfg = _config(args)
    pops = None
    if args.input is not None:
        doc = formats.read_json(args.input)
        pops = doc.get("populations") if isinstance(doc, dict) else doc
        if not isinstance(pops, list):
            raise FormatError(str(args.input), None, "expected a list or {\"populations\": [...]}")
    out = _out_dir(args, cfg)
    run = run_jc(cfg, pops, shots=args.shots, seed=args.seed)
    formats.write_jc_csv(run.times, run.signal, out / "jc_signal.csv")
    formats.write_json({
        "true": run.truth.tolist(),
        "recovered": run.inversion.populations.tolist(),
        "residual_norm": run.inversion.residual_norm,
        "condition_number": run.inversion.condition_number,
        "max_abs_error": run.max_error,
    }, out / "jc_populations.json")
    print(f"max |dP_n| = {run.max_error:.3e}, residual = {run.inversion.residual_norm:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="su2tomo", description="Spin-j state tomography on the sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=False):
        p.add_argument("--config", type=Path, required=config_required, help="experiment JSON")
        p.add_argument("--out", type=Path, help="output directory (default: config output_dir)")
        return p

    p = common(sub.add_parser("simulate", help="simulate measurement and probability CSVs"), True)
    p.add_argument("--seed", type=int)
    p.add_argument("--shots", type=int, help="shots per node (0 = exact)")
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("reconstruct", help="reconstruct density and multipoles"))
    p.add_argument("--input", type=Path, nargs="*", default=[],
                   help="probability or measurement CSVs (default: simulate from --config)")
    p.add_argument("--project", action="store_true", help="clip onto physical states")
    p.set_defaults(func=cmd_reconstruct)

    p = common(sub.add_parser("qpd", help="quasiprobability distributions on a grid"))
    p.add_argument("--input", type=Path, help="density JSON or probability/measurement CSV")
    p.add_argument("--s", type=int, nargs="+", choices=(-1, 0, 1),
                   help="-1 Husimi, 0 Wigner, 1 Glauber-Sudarshan (default: config s_values)")
    p.add_argument("--route", choices=("multipole", "kernel"), default="multipole",
                   help="route written to the CSV; the other is used as a cross-check")
    p.set_defaults(func=cmd_qpd)

    p = common(sub.add_parser("sweep", help="reconstruction error versus shots"), True)
    p.add_argument("--shots", type=int, nargs="+", help="shot levels (0 = exact baseline)")
    p.add_argument("--seeds", type=int, help="seeds per level")
    p.add_argument("--seed", type=int, help="first seed")
    p.set_defaults(func=cmd_sweep)

    p = common(sub.add_parser("jc", help="Jaynes-Cummings population readout"), True)
    p.add_argument("--input", type=Path, help="populations JSON")
    p.add_argument("--shots", type=int, help="Bernoulli shots per time point (0 = noiseless)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_jc)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return EXIT_CONFIG
    except (FormatError, OSError) as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO
    except SU2TomoError as exc:
        _log(f"error: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
