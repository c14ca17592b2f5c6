"""One renderer per figure kind.

Every renderer takes the input CSV paths and an output image path and
writes a deterministic file: fixed figure geometry, no timestamps, and
the PNG Software tag stripped so reruns are byte-identical.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import Table, load

_SAVE_KW = {"dpi": 100, "metadata": {"Software": None}}


def _finish(fig, out: str) -> None:
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)


def _grouped(table: Table, keys: list[str]):
    """Row indices grouped by the tuple of the given key columns, in file order."""
    cols = [table.column(k) for k in keys]
    groups: dict[tuple, list[int]] = {}
    for i in range(len(table.rows)):
        groups.setdefault(tuple(c[i] for c in cols), []).append(i)
    return groups


def _pivot(alphas, ns, values):
    a_ax = sorted(set(alphas))
    n_ax = sorted(set(ns))
    grid = np.full((len(a_ax), len(n_ax)), np.nan)
    for a, n, v in zip(alphas, ns, values):
        grid[a_ax.index(a), n_ax.index(n)] = v
    return a_ax, n_ax, grid


def phase_diagram(paths: list[str], out: str) -> None:
    """Four heatmap panels over (N, alpha) with the I3 zero contour."""
    table = load(paths, "phase-diagram",
                 ["alpha", "n", "s_mean", "mi_mean", "tmi_mean", "tau"])
    alphas = table.floats("alpha")
    ns = table.floats("n")
    fig, axes = plt.subplots(2, 2, figsize=(9, 7), constrained_layout=True)
    panels = [("s_mean", "half-cut entropy"), ("mi_mean", "antipodal MI"),
              ("tmi_mean", "tripartite MI"), ("tau", "purification tau")]
    for ax, (col, label) in zip(axes.flat, panels):
        a_ax, n_ax, grid = _pivot(alphas, ns, table.floats(col))
        if grid.size and np.isfinite(grid).any():
            im = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis",
                           extent=(-0.5, len(n_ax) - 0.5, -0.5, len(a_ax) - 0.5))
            fig.colorbar(im, ax=ax, shrink=0.85)
            if col == "tmi_mean" and len(a_ax) > 1 and len(n_ax) > 1 \
                    and np.isfinite(grid).all():
                ax.contour(grid, levels=[0.0], colors="white", linewidths=1.2)
        ax.set_xticks(range(len(n_ax)), [f"{v:g}" for v in n_ax])
        ax.set_yticks(range(len(a_ax)), [f"{v:g}" for v in a_ax])
        ax.set_xlabel("N")
        ax.set_ylabel("alpha")
        ax.set_title(label)
    _finish(fig, out)


def _lstsq(x, y, basis):
    m = np.stack([basis(x), np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(m, y, rcond=None)
    return coef


def scaling_fit(paths: list[str], out: str) -> None:
    """Steady entropy vs N per parameter point, with linear and log overlays."""
    table = load(paths, "phase-diagram", ["alpha", "density", "basis", "n", "s_mean"])
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    for key, idx in _grouped(table, ["alpha", "density", "basis"]).items():
        n = np.array([table.floats("n")[i] for i in idx])
        s = np.array([table.floats("s_mean")[i] for i in idx])
        order = np.argsort(n)
        n, s = n[order], s[order]
        label = f"alpha={key[0]} density={key[1]} {key[2]}"
        ax.plot(n, s, "o", label=label)
        if n.size >= 3 and np.isfinite(s).all():
            dense = np.linspace(n.min(), n.max(), 200)
            a, b = _lstsq(n, s, lambda v: v)
            ax.plot(dense, a * dense + b, "-", lw=0.8)
            a, b = _lstsq(n, s, np.log)
            ax.plot(dense, a * np.log(dense) + b, "--", lw=0.8)
    ax.set_xlabel("N")
    ax.set_ylabel("steady half-cut entropy (bits)")
    if table.rows:
        ax.legend(fontsize=7)
    _finish(fig, out)


def crossover(paths: list[str], out: str) -> None:
    """Entropy normalized by log N against alpha, one curve per N."""
    table = load(paths, "phase-diagram", ["alpha", "n", "s_mean"])
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    for (n_key,), idx in sorted(_grouped(table, ["n"]).items()):
        alphas = np.array([table.floats("alpha")[i] for i in idx])
        s = np.array([table.floats("s_mean")[i] for i in idx])
        order = np.argsort(alphas)
        n = float(n_key)
        ax.plot(alphas[order], s[order] / math.log(n), "o-", label=f"N={n:g}")
    ax.set_xlabel("alpha")
    ax.set_ylabel("S / log N")
    if table.rows:
        ax.legend(fontsize=8)
    _finish(fig, out)


def tss(paths: list[str], out: str) -> None:
    """Settling time of I3 against N on a semilog-x axis."""
    table = load(paths, "phase-diagram", ["alpha", "density", "basis", "n", "t_ss_first"])
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    for key, idx in _grouped(table, ["alpha", "density", "basis"]).items():
        n = np.array([table.floats("n")[i] for i in idx])
        t = np.array([table.floats("t_ss_first")[i] for i in idx])
        order = np.argsort(n)
        ax.semilogx(n[order], t[order], "o-",
                    label=f"alpha={key[0]} density={key[1]} {key[2]}")
    ax.set_xlabel("N")
    ax.set_ylabel("time to steady state (layers)")
    if table.rows:
        ax.legend(fontsize=7)
    _finish(fig, out)


def bell_census(paths: list[str], out: str) -> None:
    table = load(paths, "bell-census", ["r", "mean_count"])
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    r = table.floats("r")
    ax.bar(r, table.floats("mean_count"), width=0.8)
    ax.set_xlabel("pair distance r")
    ax.set_ylabel("Bell pairs per trajectory")
    _finish(fig, out)


def mi_decay(paths: list[str], out: str) -> None:
    """I(r) on log-log axes with a power-law fit over the positive points."""
    table = load(paths, "mi-profile", ["r", "mi_mean"])
    r = np.array(table.floats("r"))
    mi = np.array(table.floats("mi_mean"))
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    pos = (r > 0) & (mi > 0)
    if pos.sum() >= 3:
        ax.loglog(r[pos], mi[pos], "o")
        slope, inter = _lstsq(np.log(r[pos]), np.log(mi[pos]), lambda v: v)
        dense = np.geomspace(r[pos].min(), r[pos].max(), 100)
        ax.loglog(dense, np.exp(inter) * dense ** slope, "--",
                  label=f"kappa = {-slope:.2f}")
        ax.legend()
    elif pos.any():
        ax.loglog(r[pos], mi[pos], "o")
    ax.set_xlabel("r")
    ax.set_ylabel("mean mutual information (bits)")
    _finish(fig, out)


def xxz_sweep(paths: list[str], out: str) -> None:
    table = load(paths, "xxz-sweep", ["p", "n", "s_mean", "mi_mean"])
    fig, axes = plt.subplots(1, 2, figsize=(9, 4), constrained_layout=True)
    for (n_key,), idx in sorted(_grouped(table, ["n"]).items()):
        p = np.array([table.floats("p")[i] for i in idx])
        order = np.argsort(p)
        for ax, col in zip(axes, ("s_mean", "mi_mean")):
            y = np.array([table.floats(col)[i] for i in idx])
            ax.plot(p[order], y[order], "o-", label=f"N={float(n_key):g}")
    axes[0].set_ylabel("steady half-cut entropy (bits)")
    axes[1].set_ylabel("antipodal MI (bits)")
    for ax in axes:
        ax.set_xlabel("p")
        if table.rows:
            ax.legend(fontsize=8)
    _finish(fig, out)


RENDERERS = {
    "phase-diagram": phase_diagram,
    "scaling-fit": scaling_fit,
    "crossover": crossover,
    "tss": tss,
    "bell-census": bell_census,
    "mi-decay": mi_decay,
    "xxz-sweep": xxz_sweep,
}
