"""Trajectory ensembles, steady-state estimation, and phase classification."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import fits
from .observables import (
    ancilla_entropy,
    antipodal_mutual_information,
    bell_census,
    half_cut_entropy,
    mi_profile,
    standard_tmi,
)
from .sampler import BasisMode, LayerPackingError, RangeDistribution, resolve_m2, sample_layer
from .tableau import PauliString, StabilizerTableau

# Ancilla entropy below this (in bits) counts as purified.
PURITY_FLOOR = 1e-3
# Fraction of the steady value defining the t_SS entry band.
TSS_BAND = 0.01
DEFAULT_CHECKPOINTS = 100
DEFAULT_WINDOW = 20
MAX_DEFAULT_DEPTH = 200_000


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation cell: a parameter point plus run controls."""

    n_qubits: int
    alpha: float
    density: float
    basis: BasisMode = BasisMode("random")
    depth: int | None = None
    n_checkpoints: int = DEFAULT_CHECKPOINTS
    n_trajectories: int = 10
    seed: int = 0
    purification: bool = False
    track_mi_profile: bool = False
    track_bell: bool = False

    @property
    def m2(self) -> int:
        return resolve_m2(self.n_qubits, self.density)

    def resolved_depth(self) -> int:
        if self.depth is not None:
            return self.depth
        # Default: 2 N^2 measurements total, i.e. 2 N^2 / M2 layers.
        d = int(np.ceil(2 * self.n_qubits**2 / self.m2))
        return min(max(d, 1), MAX_DEFAULT_DEPTH)


@dataclass
class TrajectorySeries:
    """Checkpointed observables along a single trajectory."""

    trajectory_id: int
    layers: np.ndarray
    values: dict[str, np.ndarray]
    bell_histogram: dict[int, int] | None = None
    mi_profile_final: np.ndarray | None = None


@dataclass
class SteadyStateEstimate:
    mean: float
    stderr: float
    n_samples: int


@dataclass
class CellResult:
    """Steady-state observables for one (parameter point, N) cell."""

    config: ExperimentConfig
    steady: dict[str, SteadyStateEstimate]
    t_ss: float | None = None
    t_ss_first: float | None = None
    t_ss_flags: list[str] = field(default_factory=list)
    tau: float | None = None
    tau_censored: bool = False
    kappa: float | None = None
    kappa_r2: float | None = None
    bell_histogram: dict[int, int] | None = None
    mi_profile_mean: np.ndarray | None = None
    error: str | None = None


def checkpoint_layers(depth: int, n_checkpoints: int) -> np.ndarray:
    """Evenly spaced layer indices in [1, depth], always ending at depth."""
    n = min(n_checkpoints, depth)
    pts = np.unique(np.round(np.linspace(depth / n, depth, n)).astype(int))
    pts = pts[pts >= 1]
    pts[-1] = depth
    return np.unique(pts)


def trajectory_rng(seed: int, trajectory_id: int) -> np.random.Generator:
    """Independent, reproducible stream per trajectory."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trajectory_id,))
    return np.random.Generator(np.random.PCG64(ss))


def run_trajectory(config: ExperimentConfig, trajectory_id: int) -> TrajectorySeries:
    n = config.n_qubits
    rng = trajectory_rng(config.seed, trajectory_id)
    if config.purification:
        state = StabilizerTableau.ancilla_seeded(n, seed_site=0)
    else:
        state = StabilizerTableau.plus_state(n)

    dist = RangeDistribution(n, config.alpha)
    depth = config.resolved_depth()
    if config.purification:
        checkpoints = np.arange(1, depth + 1)
    else:
        checkpoints = checkpoint_layers(depth, config.n_checkpoints)

    keys = ["s_ancilla"] if config.purification else ["s_half", "mi_antipodal", "tmi"]
    series: dict[str, list[float]] = {k: [] for k in keys}
    recorded_layers: list[int] = []
    purified = False

    ckpt_set = set(int(c) for c in checkpoints)
    # MI profile is averaged over the steady-state window of checkpoints,
    # matching the steady_state convention; a single-snapshot profile is too
    # quantized in the tail for a decay fit.
    profile_layers = set(int(c) for c in checkpoints[-DEFAULT_WINDOW:])
    profile_sum = np.zeros(n // 2) if config.track_mi_profile else None
    profile_count = 0
    for layer_idx in range(1, depth + 1):
        if not purified:
            layer = sample_layer(n, config.m2, dist, config.basis, rng)
            for (i, j), basis in zip(layer.pairs, layer.bases):
                state.measure(PauliString.two_site(basis, i, j, state.n), rng)
        if layer_idx in ckpt_set:
            recorded_layers.append(layer_idx)
            if config.purification:
                s_a = ancilla_entropy(state)
                series["s_ancilla"].append(s_a)
                # The ancilla never re-entangles once disentangled; the
                # remaining checkpoints are exact zeros.
                if s_a == 0.0:
                    purified = True
            else:
                series["s_half"].append(half_cut_entropy(state, n))
                series["mi_antipodal"].append(antipodal_mutual_information(state, n))
                series["tmi"].append(standard_tmi(state, n))
        if profile_sum is not None and layer_idx in profile_layers:
            profile_sum += mi_profile(state, n)
            profile_count += 1

    out = TrajectorySeries(
        trajectory_id=trajectory_id,
        layers=np.array(recorded_layers),
        values={k: np.array(v) for k, v in series.items()},
    )
    if config.track_bell:
        out.bell_histogram = bell_census(state, n)
    if config.track_mi_profile:
        out.mi_profile_final = profile_sum / max(profile_count, 1)
    return out


def run_ensemble(config: ExperimentConfig) -> list[TrajectorySeries]:
    return [run_trajectory(config, t) for t in range(config.n_trajectories)]


def _window_samples(ensemble: list[TrajectorySeries], key: str, window: int) -> np.ndarray:
    return np.concatenate([traj.values[key][-window:] for traj in ensemble])


def steady_state(
    ensemble: list[TrajectorySeries], key: str, window: int = DEFAULT_WINDOW
) -> SteadyStateEstimate:
    """Mean over the final `window` checkpoints of every trajectory."""
    samples = _window_samples(ensemble, key, window)
    stderr = float(samples.std(ddof=1) / np.sqrt(samples.size)) if samples.size > 1 else 0.0
    return SteadyStateEstimate(mean=float(samples.mean()), stderr=stderr, n_samples=samples.size)


def ensemble_mean_series(ensemble: list[TrajectorySeries], key: str) -> np.ndarray:
    return np.mean([traj.values[key] for traj in ensemble], axis=0)


def fit_purification_tau(
    layers: np.ndarray, s_ancilla_mean: np.ndarray
) -> tuple[float, bool]:
    """Decay time from log S_a(t) = -t/tau + c over the window S_a > floor.

    Returns (tau, censored).  censored=True means the series never decayed
    below the floor, so tau is only a lower bound.
    """
    keep = s_ancilla_mean > PURITY_FLOOR
    # Right-censored: the mean never decayed below 0.9 within the run.
    censored = bool(np.min(s_ancilla_mean) > 0.9)
    t = np.asarray(layers, dtype=float)[keep]
    y = np.log(s_ancilla_mean[keep])
    if t.size < 3:
        raise ValueError("too few points above the purity floor for a tau fit")
    # Weight by S_a: log-transforming an exponential amplifies relative noise
    # near the floor, so an unweighted fit is dominated by the tail.
    w = s_ancilla_mean[keep]
    wm = w.sum()
    tbar, ybar = (w * t).sum() / wm, (w * y).sum() / wm
    slope = float((w * (t - tbar) * (y - ybar)).sum() / (w * (t - tbar) ** 2).sum())
    if slope >= 0:
        # No decay at all within the run: report the run length as a bound.
        return float(t[-1]), True
    return -1.0 / slope, censored


def time_to_steady_state(
    layers: np.ndarray,
    series: np.ndarray,
    steady_value: float,
    band: float = TSS_BAND,
    first_entry: bool = False,
) -> tuple[float | None, list[str]]:
    """Checkpoint layer at which the series is within +-band of steady.

    Default semantics: sustained entry — the first checkpoint after which the
    series stays in the band for the rest of the run; absent (None) if it
    never does.  `first_entry=True` instead returns the first checkpoint at
    which the series is in the band or has crossed the steady value; this is
    the noise-tolerant 99%-rise-time reading.

    The band is relative to |steady_value|; a zero steady value falls back to
    an absolute band on the series scale (flagged).
    """
    flags: list[str] = []
    scale = abs(steady_value)
    if scale < 1e-12:
        scale = float(np.max(np.abs(series))) if series.size else 1.0
        flags.append("absolute-band")
        if scale == 0.0:
            return float(layers[0]), flags
    tol = band * scale
    dev = series - steady_value
    inside = np.abs(dev) <= tol
    if first_entry:
        crossed = inside | (np.sign(dev) != np.sign(dev[0])) | (dev == 0)
        hits = np.nonzero(crossed)[0]
        if hits.size == 0:
            flags.append("never-settled")
            return None, flags
        return float(layers[hits[0]]), flags
    # Sustained entry: the last crossing into the band.
    if not inside[-1]:
        flags.append("never-settled")
        return None, flags
    k = len(inside)
    while k > 0 and inside[k - 1]:
        k -= 1
    return float(layers[k]), flags


def mean_mi_profile(ensemble: list[TrajectorySeries]) -> np.ndarray:
    profiles = [t.mi_profile_final for t in ensemble if t.mi_profile_final is not None]
    if not profiles:
        raise ValueError("no trajectories carried an MI profile")
    return np.mean(profiles, axis=0)


def merged_bell_histogram(ensemble: list[TrajectorySeries]) -> dict[int, int]:
    merged: dict[int, int] = {}
    for traj in ensemble:
        if traj.bell_histogram:
            for r, c in traj.bell_histogram.items():
                merged[r] = merged.get(r, 0) + c
    return merged


def run_cell(config: ExperimentConfig, window: int = DEFAULT_WINDOW) -> CellResult:
    """Run one ensemble and condense it into steady-state numbers."""
    try:
        ensemble = run_ensemble(config)
    except LayerPackingError as exc:
        return CellResult(config=config, steady={}, error=f"packing: {exc}")

    steady = {k: steady_state(ensemble, k, window) for k in ensemble[0].values}
    result = CellResult(config=config, steady=steady)

    layers = ensemble[0].layers
    if config.purification:
        s_a = ensemble_mean_series(ensemble, "s_ancilla")
        try:
            result.tau, result.tau_censored = fit_purification_tau(layers, s_a)
        except ValueError:
            result.tau, result.tau_censored = None, False
    else:
        # t_SS from |TMI| per trajectory, then trajectory-averaged.  Both
        # banding semantics are recorded; see time_to_steady_state.
        abs_steady = float(np.abs(_window_samples(ensemble, "tmi", window)).mean())
        sustained, first = [], []
        for traj in ensemble:
            abs_tmi = np.abs(traj.values["tmi"])
            t, _ = time_to_steady_state(traj.layers, abs_tmi, abs_steady)
            if t is None:
                result.t_ss_flags.append(f"traj{traj.trajectory_id}:never-settled")
            else:
                sustained.append(t)
            tf, _ = time_to_steady_state(traj.layers, abs_tmi, abs_steady, first_entry=True)
            if tf is not None:
                first.append(tf)
        result.t_ss = float(np.mean(sustained)) if sustained else None
        result.t_ss_first = float(np.mean(first)) if first else None

    if config.track_mi_profile:
        profile = mean_mi_profile(ensemble)
        result.mi_profile_mean = profile
        n = config.n_qubits
        r = np.arange(1, len(profile) + 1)
        lo, hi = 2, max(n // 4, 4)
        sel = (r >= lo) & (r <= hi)
        try:
            kappa, _, r2 = fits.fit_mi_decay(r[sel], profile[sel])
            result.kappa, result.kappa_r2 = kappa, r2
        except ValueError:
            pass

    if config.track_bell:
        result.bell_histogram = merged_bell_histogram(ensemble)
    return result


def depth_sufficiency_check(
    config: ExperimentConfig, key: str = "s_half", window: int = DEFAULT_WINDOW
) -> tuple[bool, str]:
    """Compare the steady estimate at half depth vs full depth.

    A shift above 3 combined standard errors means the run had not converged.
    """
    full = steady_state(run_ensemble(config), key, window)
    half_cfg = replace(config, depth=max(config.resolved_depth() // 2, 1))
    half = steady_state(run_ensemble(half_cfg), key, window)
    sigma = np.hypot(full.stderr, half.stderr)
    shift = abs(full.mean - half.mean)
    ok = shift <= 3 * sigma or sigma == 0.0
    msg = f"|full-half| = {shift:.4g}, 3*sigma = {3 * sigma:.4g}"
    return ok, msg


@dataclass
class SweepCell:
    """A parameter point scanned over system sizes."""

    alpha: float
    density: float
    basis: BasisMode
    n_values: tuple[int, ...]


@dataclass
class SweepRow:
    cell: SweepCell
    results: list[CellResult]
    purify_results: list[CellResult]
    entanglement: fits.FitReport | None = None
    purification: fits.FitReport | None = None
    error: str | None = None


def run_sweep(
    cells: list[SweepCell],
    n_trajectories: int,
    seed: int,
    depth: int | None = None,
    window: int = DEFAULT_WINDOW,
    purify: bool = True,
) -> list[SweepRow]:
    """Scan parameter points over N; classify each point by R^2 contests.

    Failures are recorded per cell and the sweep continues.
    """
    rows = []
    for ci, cell in enumerate(cells):
        results: list[CellResult] = []
        purify_results: list[CellResult] = []
        row = SweepRow(cell=cell, results=results, purify_results=purify_results)
        for ni, n in enumerate(cell.n_values):
            base = ExperimentConfig(
                n_qubits=n,
                alpha=cell.alpha,
                density=cell.density,
                basis=cell.basis,
                depth=depth,
                n_trajectories=n_trajectories,
                seed=_cell_seed(seed, ci, ni, 0),
            )
            results.append(run_cell(base, window))
            if purify:
                purify_results.append(
                    run_cell(
                        replace(base, purification=True, seed=_cell_seed(seed, ci, ni, 1)),
                        window,
                    )
                )
        try:
            ok = [r for r in results if r.error is None]
            if len(ok) >= 3:
                row.entanglement = fits.classify_entanglement(
                    [r.config.n_qubits for r in ok], [r.steady["s_half"].mean for r in ok]
                )
            taus = [(r.config.n_qubits, r.tau) for r in purify_results
                    if r.error is None and r.tau is not None and not r.tau_censored]
            if len(taus) >= 3:
                row.purification = fits.classify_purification(
                    [t[0] for t in taus], [t[1] for t in taus], sparse=cell.density == 0.0
                )
        except (ValueError, np.linalg.LinAlgError) as exc:
            row.error = str(exc)
        rows.append(row)
    return rows


def _cell_seed(seed: int, cell_index: int, n_index: int, mode: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(cell_index, n_index, mode))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
