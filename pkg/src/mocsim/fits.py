"""Least-squares model fits and R^2 contests for scaling classification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Verdicts follow the sign of delta-R^2; an exact tie is indeterminate.
R2_TIE_MARGIN = 0.0


@dataclass
class ModelFit:
    """A single model fitted to (x, y) points."""

    model: str
    params: tuple[float, ...]
    r_squared: float

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        a, b = self.params
        if self.model == "linear":
            return a * x + b
        if self.model == "log":
            return a * np.log(x) + b
        if self.model == "nlogn":
            return a * x * np.log(x) + b
        if self.model == "exponential":
            # y = exp(a*x + b); fitted in log space.
            return np.exp(a * x + b)
        raise ValueError(f"unknown model {self.model!r}")


@dataclass
class FitReport:
    """Outcome of an R^2 contest between candidate models."""

    fits: dict[str, ModelFit]
    verdict: str
    delta_r2: float
    notes: list[str] = field(default_factory=list)

    def r2(self, model: str) -> float:
        return self.fits[model].r_squared


def _lstsq_line(u: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Fit y = a*u + b; return (a, b, R^2 in y-space)."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([u, np.ones_like(u)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-30 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(coef[0]), float(coef[1]), r2


def fit_model(model: str, x: np.ndarray, y: np.ndarray) -> ModelFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if model == "linear":
        a, b, r2 = _lstsq_line(x, y)
    elif model == "log":
        a, b, r2 = _lstsq_line(np.log(x), y)
    elif model == "nlogn":
        a, b, r2 = _lstsq_line(x * np.log(x), y)
    elif model == "exponential":
        # Contest runs in log space, so R^2 is computed on log(y).
        if np.any(y <= 0):
            raise ValueError("exponential fit requires positive y")
        a, b, r2 = _lstsq_line(x, np.log(y))
    else:
        raise ValueError(f"unknown model {model!r}")
    return ModelFit(model=model, params=(a, b), r_squared=r2)


def contest(
    x: np.ndarray,
    y: np.ndarray,
    models: tuple[str, str],
    labels: tuple[str, str],
    margin: float = R2_TIE_MARGIN,
) -> FitReport:
    """Fit two models and pick a winner; a close contest is indeterminate."""
    fits = {m: fit_model(m, x, y) for m in models}
    r2a = fits[models[0]].r_squared
    r2b = fits[models[1]].r_squared
    delta = r2a - r2b
    if abs(delta) <= margin:
        verdict = "indeterminate"
    else:
        verdict = labels[0] if delta > 0 else labels[1]
    return FitReport(fits=fits, verdict=verdict, delta_r2=delta)


def classify_entanglement(n_values, s_values, margin: float = R2_TIE_MARGIN) -> FitReport:
    """Volume law (S ~ a*N) vs area/log law (S ~ a*log N) from steady-state entropy."""
    return contest(n_values, s_values, ("linear", "log"), ("volume", "log"), margin)


def classify_purification(
    n_values,
    tau_values,
    sparse: bool,
    margin: float = R2_TIE_MARGIN,
) -> FitReport:
    """Mixed phase: tau grows exponentially in N.  Pure phase: tau stays O(1)
    (O(N) in the sparse limit, so tau/N is contested instead)."""
    tau = np.asarray(tau_values, dtype=float)
    report = contest(
        n_values,
        tau / np.asarray(n_values, dtype=float) if sparse else tau,
        ("exponential", "linear"),
        ("mixed", "pure"),
        margin,
    )
    if sparse:
        report.notes.append("tau rescaled by N before the contest (sparse limit)")
    return report


def classify_tss(n_values, tss_values, sparse: bool, margin: float = R2_TIE_MARGIN) -> FitReport:
    """Saturation time: log N in the dense regime, N log N in the sparse limit;
    contested against a plain linear-in-N alternative."""
    favored = "nlogn" if sparse else "log"
    return contest(n_values, tss_values, (favored, "linear"), (favored, "linear"), margin)


def fit_mi_decay(r_values, mi_values) -> tuple[float, float, float]:
    """Power-law exponent kappa from I(r) ~ r^-kappa on a log-log fit.

    Returns (kappa, amplitude, r_squared).  Non-positive MI values are
    excluded; fewer than 3 surviving points raises ValueError.
    """
    r = np.asarray(r_values, dtype=float)
    mi = np.asarray(mi_values, dtype=float)
    keep = mi > 0
    if keep.sum() < 3:
        raise ValueError("too few positive MI points for a power-law fit")
    slope, intercept, r2 = _lstsq_line(np.log(r[keep]), np.log(mi[keep]))
    return -slope, float(np.exp(intercept)), r2
