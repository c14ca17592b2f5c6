"""Flat key=value config files expanded into experiment grids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .harness import DEFAULT_CHECKPOINTS, DEFAULT_WINDOW, ExperimentConfig
from .sampler import BasisMode

_BASES = ("random", "single", "xxz")


class ConfigError(ValueError):
    """Malformed config file; message carries the offending line number."""


@dataclass
class ConfigSpec:
    """Normalized contents of a config file (grid keys are lists)."""

    n: list[int] = field(default_factory=lambda: [16])
    alpha: list[float] = field(default_factory=lambda: [0.0])
    density: list[float] = field(default_factory=lambda: [0.5])
    basis: list[str] = field(default_factory=lambda: ["random"])
    p: list[float] = field(default_factory=list)
    trajectories: int = 100
    depth: int | None = None
    checkpoints: int = DEFAULT_CHECKPOINTS
    seed: int = 0
    window: int = DEFAULT_WINDOW
    purify: bool = False
    bell: bool = False
    profile: bool = False
    max_cells: int = 512

    def cells(self) -> list[tuple[int, float, float, str, float | None]]:
        """Cartesian grid (n, alpha, density, basis, p); p only varies xxz."""
        out = []
        for b in self.basis:
            p_values: list[float | None] = [None]
            if b == "xxz":
                if not self.p:
                    raise ConfigError("basis xxz requires a p key")
                p_values = list(self.p)
            for pv in p_values:
                for a in self.alpha:
                    for dens in self.density:
                        for n in self.n:
                            out.append((n, a, dens, b, pv))
        if len(out) > self.max_cells:
            raise ConfigError(f"grid has {len(out)} cells, cap is {self.max_cells}")
        return out

    def experiment(self, cell) -> ExperimentConfig:
        n, a, dens, b, pv = cell
        return ExperimentConfig(
            n_qubits=n,
            alpha=a,
            density=dens,
            basis=BasisMode(b, pv) if b == "xxz" else BasisMode(b),
            depth=self.depth,
            n_checkpoints=self.checkpoints,
            n_trajectories=self.trajectories,
            seed=self.seed,
            purification=self.purify,
            track_bell=self.bell,
            track_mi_profile=self.profile,
        )


def _parse_scalar(key: str, raw: str, kind, lineno: int):
    try:
        if kind is bool:
            if raw.lower() in ("true", "on", "yes", "1"):
                return True
            if raw.lower() in ("false", "off", "no", "0"):
                return False
            raise ValueError(raw)
        if kind is float:
            v = float(raw)
            if math.isnan(v):
                raise ValueError(raw)
            return v
        return kind(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: bad value {raw!r} for key {key!r}") from None


def parse_config(path: str) -> ConfigSpec:
    """Parse a flat key=value file; comma-separated values form grid lists."""
    list_keys = {"n": int, "alpha": float, "density": float, "basis": str, "p": float}
    scalar_types = {f.name: f.type for f in fields(ConfigSpec)}
    spec = ConfigSpec()
    seen: set[str] = set()

    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            if "=" not in body:
                raise ConfigError(f"line {lineno}: expected key = value, got {body!r}")
            key, _, raw = body.partition("=")
            key, raw = key.strip(), raw.strip()
            if key in seen:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}")
            seen.add(key)
            if key in list_keys:
                kind = list_keys[key]
                values = [_parse_scalar(key, v.strip(), kind, lineno)
                          for v in raw.split(",") if v.strip() != ""]
                if not values:
                    raise ConfigError(f"line {lineno}: empty list for key {key!r}")
                if key == "basis":
                    for v in values:
                        if v not in _BASES:
                            raise ConfigError(f"line {lineno}: unknown basis {v!r}")
                setattr(spec, key, values)
            elif key in scalar_types and key not in list_keys:
                kind = {"trajectories": int, "depth": int, "checkpoints": int,
                        "seed": int, "window": int, "max_cells": int,
                        "purify": bool, "bell": bool, "profile": bool}[key]
                setattr(spec, key, _parse_scalar(key, raw, kind, lineno))
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return spec


def serialize_config(spec: ConfigSpec) -> str:
    """Inverse of parse_config: parse(serialize(spec)) == spec."""
    lines = []
    for key in ("n", "alpha", "density", "basis", "p"):
        values = getattr(spec, key)
        if values:
            lines.append(f"{key} = {','.join(_fmt(v) for v in values)}")
    for key in ("trajectories", "checkpoints", "seed", "window", "max_cells"):
        lines.append(f"{key} = {getattr(spec, key)}")
    if spec.depth is not None:
        lines.append(f"depth = {spec.depth}")
    for key in ("purify", "bell", "profile"):
        lines.append(f"{key} = {'true' if getattr(spec, key) else 'false'}")
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.17g}"
    return str(v)
