"""Bit-stable CSV serialization of harness tables."""

from __future__ import annotations

import csv
import json
import math
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .harness import CellResult, SweepRow, TrajectorySeries

SCHEMA_VERSION = "v1"

PHASE_COLUMNS = [
    "alpha", "density", "basis", "p", "n",
    "s_mean", "s_stderr", "mi_mean", "mi_stderr", "tmi_mean", "tmi_stderr",
    "tmi_sign", "t_ss", "t_ss_first", "tau", "tau_censored",
    "dr2_entanglement", "entanglement_verdict",
    "dr2_purification", "purification_verdict", "error",
]
TIMESERIES_COLUMNS = ["trajectory_id", "layer", "s", "mi", "tmi", "s_ancilla"]
BELL_COLUMNS = ["r", "mean_count"]
PROFILE_COLUMNS = ["r", "mi_mean"]
CROSSINGS_COLUMNS = ["alpha", "density", "n", "expected", "mc_mean", "mc_stderr", "layers"]
XXZ_COLUMNS = [
    "p", "n", "s_mean", "s_stderr", "mi_mean", "mi_stderr",
    "tmi_mean", "tmi_stderr", "kappa", "kappa_r2",
]


def fmt(value) -> str:
    """Canonical cell text: 17 significant digits for floats, '' for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def write_csv(path: Path, schema: str, columns: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# mocsim-csv {SCHEMA_VERSION} {schema}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def read_csv(path: Path) -> tuple[str, list[str], list[list[str]]]:
    """Returns (schema name, columns, rows); validates the version header."""
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        parts = header.split()
        if parts[:2] != ["#", "mocsim-csv"] or len(parts) != 4:
            raise ValueError(f"{path}: missing schema header line")
        if parts[2] != SCHEMA_VERSION:
            raise ValueError(f"{path}: schema version {parts[2]} != {SCHEMA_VERSION}")
        reader = csv.reader(fh)
        columns = next(reader)
        return parts[3], columns, [row for row in reader]


def _steady(result: CellResult, key: str) -> tuple[float | None, float | None]:
    est = result.steady.get(key)
    return (est.mean, est.stderr) if est else (None, None)


def phase_rows(rows: list[SweepRow]):
    for row in rows:
        for result, presult in zip(row.results, row.purify_results or [None] * len(row.results)):
            cfg = result.config
            s_m, s_e = _steady(result, "s_half")
            mi_m, mi_e = _steady(result, "mi_antipodal")
            tmi_m, tmi_e = _steady(result, "tmi")
            ent = row.entanglement
            pur = row.purification
            yield [
                cfg.alpha, cfg.density, cfg.basis.variant, cfg.basis.p, cfg.n_qubits,
                s_m, s_e, mi_m, mi_e, tmi_m, tmi_e,
                None if tmi_m is None else (tmi_m > 0) - (tmi_m < 0),
                result.t_ss, result.t_ss_first,
                presult.tau if presult else None,
                presult.tau_censored if presult else None,
                ent.delta_r2 if ent else None,
                ent.verdict if ent else None,
                pur.delta_r2 if pur else None,
                pur.verdict if pur else None,
                result.error or (presult.error if presult else None) or row.error,
            ]


def write_phase_table(path: Path, rows: list[SweepRow]) -> None:
    write_csv(path, "phase-diagram", PHASE_COLUMNS, phase_rows(rows))


def write_timeseries(path: Path, ensemble: list[TrajectorySeries]) -> None:
    def rows():
        for traj in ensemble:
            v = traj.values
            for k, layer in enumerate(traj.layers):
                yield [
                    traj.trajectory_id, int(layer),
                    v["s_half"][k] if "s_half" in v else None,
                    v["mi_antipodal"][k] if "mi_antipodal" in v else None,
                    v["tmi"][k] if "tmi" in v else None,
                    v["s_ancilla"][k] if "s_ancilla" in v else None,
                ]

    write_csv(path, "time-series", TIMESERIES_COLUMNS, rows())


def write_bell_census(path: Path, histogram: dict[int, int], n_qubits: int,
                      n_trajectories: int) -> None:
    # Bins r in [1, N/2] inclusive, zero-filled.
    rows = [[r, histogram.get(r, 0) / n_trajectories] for r in range(1, n_qubits // 2 + 1)]
    write_csv(path, "bell-census", BELL_COLUMNS, rows)


def write_mi_profile(path: Path, profile) -> None:
    write_csv(path, "mi-profile", PROFILE_COLUMNS,
              [[r + 1, float(v)] for r, v in enumerate(profile)])


def write_crossings(path: Path, rows) -> None:
    write_csv(path, "crossings", CROSSINGS_COLUMNS, rows)


def write_xxz(path: Path, results: list[CellResult]) -> None:
    def rows():
        for result in results:
            cfg = result.config
            s_m, s_e = _steady(result, "s_half")
            mi_m, mi_e = _steady(result, "mi_antipodal")
            tmi_m, tmi_e = _steady(result, "tmi")
            yield [cfg.basis.p, cfg.n_qubits, s_m, s_e, mi_m, mi_e, tmi_m, tmi_e,
                   result.kappa, result.kappa_r2]

    write_csv(path, "xxz-sweep", XXZ_COLUMNS, rows())


def write_manifest(path: Path, seed: int, config_text: str, outputs: list[str],
                   cell_status: list[dict], started: datetime, finished: datetime) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "tool": "mocsim",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "master_seed": seed,
        "config": config_text,
        "outputs": outputs,
        "cells": cell_status,
        "started": started.astimezone(timezone.utc).isoformat(),
        "finished": finished.astimezone(timezone.utc).isoformat(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
