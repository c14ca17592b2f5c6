"""Command-line front end.

Exit codes: 0 success, 1 failed check, 2 usage, 3 config error,
4 layer-packing error, 5 I/O error.  Errors print a machine-readable
`error (<category>): message` line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import results
from .harness import (
    SweepCell,
    ensemble_mean_series,
    fit_purification_tau,
    run_cell,
    run_ensemble,
    run_sweep,
)
from .sampler import (
    BasisMode,
    LayerPackingError,
    count_crossings_mc,
    expected_crossings,
    resolve_m2,
)
from .verify import oracle_suite, statmech_suite

EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 3
EXIT_PACKING = 4
EXIT_IO = 5


def _fail(category: str, message: str, code: int) -> int:
    print(f"error ({category}): {message}", file=sys.stderr)
    return code


def _now():
    return datetime.now(timezone.utc)


def _load(path: str) -> cfgmod.ConfigSpec:
    return cfgmod.parse_config(path)


def _print_checks(lines) -> int:
    bad = 0
    for line in lines:
        print(f"{'PASS' if line.ok else 'FAIL'} {line.name}: {line.detail}")
        bad += 0 if line.ok else 1
    print(f"{len(lines) - bad}/{len(lines)} checks passed")
    return 0 if bad == 0 else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    spec = _load(args.config)
    started = _now()
    # Group the grid into sweep cells: one parameter point scanned over N.
    cells = []
    for b in spec.basis:
        p_values = spec.p if b == "xxz" else [None]
        for pv in p_values or [None]:
            for a in spec.alpha:
                for dens in spec.density:
                    mode = BasisMode(b, pv) if b == "xxz" else BasisMode(b)
                    cells.append(SweepCell(a, dens, mode, tuple(spec.n)))
    if len(cells) * len(spec.n) > spec.max_cells:
        raise cfgmod.ConfigError(f"grid has {len(cells) * len(spec.n)} cells, "
                                 f"cap is {spec.max_cells}")
    rows = run_sweep(cells, spec.trajectories, spec.seed, depth=spec.depth,
                     window=spec.window, purify=spec.purify)
    out = Path(args.out)
    results.write_phase_table(out / "phase.csv", rows)
    status = [
        {"alpha": r.cell.alpha, "density": r.cell.density,
         "basis": r.cell.basis.variant, "error": r.error}
        for r in rows
    ]
    results.write_manifest(out / "manifest.json", spec.seed,
                           cfgmod.serialize_config(spec), ["phase.csv"],
                           status, started, _now())
    print(f"wrote {out / 'phase.csv'} ({len(cells)} parameter points)")
    return 0


def _single_cell(spec: cfgmod.ConfigSpec, command: str):
    cells = spec.cells()
    if len(cells) != 1:
        raise cfgmod.ConfigError(
            f"{command} needs a single-cell config, got {len(cells)} cells")
    return spec.experiment(cells[0])


def cmd_trajectory(args) -> int:
    spec = _load(args.config)
    started = _now()
    cfg = _single_cell(spec, "trajectory")
    ensemble = run_ensemble(cfg)
    out = Path(args.out)
    outputs = ["timeseries.csv"]
    results.write_timeseries(out / "timeseries.csv", ensemble)
    if cfg.track_bell:
        from .harness import merged_bell_histogram

        results.write_bell_census(out / "bell.csv", merged_bell_histogram(ensemble),
                                  cfg.n_qubits, cfg.n_trajectories)
        outputs.append("bell.csv")
    if cfg.track_mi_profile:
        from .harness import mean_mi_profile

        results.write_mi_profile(out / "mi_profile.csv", mean_mi_profile(ensemble))
        outputs.append("mi_profile.csv")
    results.write_manifest(out / "manifest.json", spec.seed,
                           cfgmod.serialize_config(spec), outputs, [], started, _now())
    print(f"wrote {', '.join(str(out / o) for o in outputs)}")
    return 0


def cmd_purify(args) -> int:
    spec = _load(args.config)
    spec.purify = True
    started = _now()
    cfg = _single_cell(spec, "purify")
    out = Path(args.out)
    ensemble = run_ensemble(cfg)
    results.write_timeseries(out / "timeseries.csv", ensemble)
    s_a = ensemble_mean_series(ensemble, "s_ancilla")
    try:
        tau, censored = fit_purification_tau(ensemble[0].layers, s_a)
    except ValueError as exc:
        return _fail("check", str(exc), EXIT_CHECK_FAILED)
    status = [{"tau": tau, "tau_censored": censored}]
    results.write_manifest(out / "manifest.json", spec.seed,
                           cfgmod.serialize_config(spec), ["timeseries.csv"],
                           status, started, _now())
    tag = " (right-censored lower bound)" if censored else ""
    print(f"tau = {results.fmt(tau)} layers{tag}")
    return 0


def cmd_xxz(args) -> int:
    spec = _load(args.config)
    if spec.basis != ["xxz"]:
        raise cfgmod.ConfigError("xxz command requires basis = xxz")
    started = _now()
    out = Path(args.out)
    cell_results = []
    for cell in spec.cells():
        cfg = spec.experiment(cell)
        cell_results.append(run_cell(cfg, window=spec.window))
    results.write_xxz(out / "xxz.csv", cell_results)
    status = [{"p": r.config.basis.p, "n": r.config.n_qubits, "error": r.error}
              for r in cell_results]
    results.write_manifest(out / "manifest.json", spec.seed,
                           cfgmod.serialize_config(spec), ["xxz.csv"],
                           status, started, _now())
    print(f"wrote {out / 'xxz.csv'} ({len(cell_results)} cells)")
    return 0


def cmd_crossings(args) -> int:
    spec = _load(args.config)
    started = _now()
    rng = np.random.default_rng(spec.seed)
    rows = []
    for a in spec.alpha:
        for dens in spec.density:
            for n in spec.n:
                m2 = resolve_m2(n, dens)
                expected = expected_crossings(n, a, m2)
                counts = count_crossings_mc(
                    n, a, m2, BasisMode("random"), n // 2, args.layers, rng)
                mean = float(counts.mean())
                stderr = float(counts.std(ddof=1) / np.sqrt(counts.size))
                rows.append([a, dens, n, expected, mean, stderr, args.layers])
    out = Path(args.out)
    results.write_crossings(out / "crossings.csv", rows)
    results.write_manifest(out / "manifest.json", spec.seed,
                           cfgmod.serialize_config(spec), ["crossings.csv"],
                           [], started, _now())
    print(f"wrote {out / 'crossings.csv'} ({len(rows)} rows)")
    return 0


def cmd_statmech_check(args) -> int:
    return _print_checks(statmech_suite(mc_samples=args.mc_samples, seed=args.seed))


def cmd_verify(args) -> int:
    return _print_checks(
        oracle_suite(n_max=args.n_max, n_circuits=args.circuits,
                     depth=args.depth, seed=args.seed))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mocsim")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in [("sweep", cmd_sweep), ("trajectory", cmd_trajectory),
                     ("purify", cmd_purify), ("xxz", cmd_xxz)]:
        p = sub.add_parser(name)
        p.add_argument("config")
        p.add_argument("--out", default=".", help="output directory")
        p.set_defaults(fn=fn)

    p = sub.add_parser("crossings")
    p.add_argument("config")
    p.add_argument("--out", default=".")
    p.add_argument("--layers", type=int, default=20000, help="Monte Carlo layers")
    p.set_defaults(fn=cmd_crossings)

    p = sub.add_parser("statmech-check")
    p.add_argument("--mc-samples", type=int, default=0,
                   help="also run the replica Monte Carlo cross-check")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_statmech_check)

    p = sub.add_parser("verify")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--circuits", type=int, default=200)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except cfgmod.ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except FileNotFoundError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except LayerPackingError as exc:
        return _fail("packing", str(exc), EXIT_PACKING)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_IO)


if __name__ == "__main__":
    raise SystemExit(main())
