"""Layer generation: power-law distances, disjoint pairs, basis modes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BASES = ("XX", "YY", "ZZ")

MAX_RESAMPLES = 10_000


class LayerPackingError(RuntimeError):
    """Raised when a layer cannot be packed with disjoint pairs."""


@dataclass(frozen=True)
class BasisMode:
    """random | single | xxz(p)."""

    variant: str
    p: float | None = None

    def __post_init__(self):
        if self.variant not in ("random", "single", "xxz"):
            raise ValueError(f"unknown basis mode {self.variant!r}")
        if self.variant == "xxz":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("xxz mode needs a probability p in [0, 1]")


@dataclass(frozen=True)
class CircuitLayer:
    pairs: tuple[tuple[int, int], ...]
    bases: tuple[str, ...]


@dataclass
class RangeDistribution:
    """P(r) proportional to r^-alpha over r in [1, N/2], truncated normalization."""

    n_qubits: int
    alpha: float
    r_values: np.ndarray = field(init=False)
    probs: np.ndarray = field(init=False)
    cdf: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("need at least two qubits")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        r_max = self.n_qubits // 2
        self.r_values = np.arange(1, r_max + 1, dtype=np.int64)
        if math.isinf(self.alpha):
            weights = np.zeros(r_max)
            weights[0] = 1.0
        else:
            weights = self.r_values.astype(float) ** (-self.alpha)
        self.probs = weights / weights.sum()
        self.cdf = np.cumsum(self.probs)
        self.cdf[-1] = 1.0

    def sample(self, rng: np.random.Generator) -> int:
        """Inverse-CDF draw on the precomputed table."""
        u = rng.random()
        return int(self.r_values[np.searchsorted(self.cdf, u, side="right")])

    def mean_distance(self) -> float:
        return float((self.r_values * self.probs).sum())


def expected_crossings(n_qubits: int, alpha: float, m2: int) -> float:
    """Expected cut-straddling pairs per layer: M2 * E[r] / N (exact table)."""
    dist = RangeDistribution(n_qubits, alpha)
    return m2 * dist.mean_distance() / n_qubits


def resolve_m2(n_qubits: int, density: float) -> int:
    """density 0 is the sparse-limit token meaning exactly one pair."""
    if density == 0:
        return 1
    m2 = round(density * n_qubits)
    if m2 > n_qubits // 2:
        raise ValueError(f"density {density} exceeds 0.5 for N={n_qubits}")
    return max(m2, 1)


def _draw_basis(mode: BasisMode, rng: np.random.Generator, layer_basis: str | None) -> str:
    if mode.variant == "single":
        assert layer_basis is not None
        return layer_basis
    if mode.variant == "random":
        return BASES[rng.integers(3)]
    if rng.random() < mode.p:
        return "ZZ"
    return "XX" if rng.random() < 0.5 else "YY"


_FAST_ATTEMPTS = 64


def _place_exact(
    free: list[int],
    dist: RangeDistribution,
    n_qubits: int,
    used: np.ndarray,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Draw (i, j) from the law of full (i, r, direction) resampling,
    conditioned on j being free, by explicit enumeration.

    Repeated full resampling converges to exactly this conditional
    distribution; enumerating it avoids unbounded rejection loops when the
    acceptance probability is tiny (dense, short-range layers).
    """
    candidates: list[tuple[int, int]] = []
    weights: list[float] = []
    for i in free:
        for r, p_r in zip(dist.r_values, dist.probs):
            if p_r == 0.0:
                continue
            for direction in (1, -1):
                j = (i + direction * int(r)) % n_qubits
                if j != i and not used[j]:
                    candidates.append((i, j))
                    weights.append(p_r)
    if not candidates:
        raise LayerPackingError(
            f"no admissible pair among {len(free)} free qubits "
            f"(N={n_qubits}, alpha={dist.alpha})"
        )
    w = np.asarray(weights)
    idx = rng.choice(len(candidates), p=w / w.sum())
    return candidates[idx]


def sample_layer(
    n_qubits: int,
    m2: int,
    dist: RangeDistribution,
    mode: BasisMode,
    rng: np.random.Generator,
) -> CircuitLayer:
    """Pack m2 disjoint pairs; occupied-partner collisions trigger a full
    resample of (i, r, direction).

    After a bounded number of rejections the remaining draw is made from
    the equivalent conditional distribution directly (see _place_exact);
    a packing error is raised only when no admissible pair exists at all.
    """
    if m2 > n_qubits // 2:
        raise ValueError("m2 exceeds floor(N/2)")
    layer_basis = BASES[rng.integers(3)] if mode.variant == "single" else None
    used = np.zeros(n_qubits, dtype=bool)
    free = list(range(n_qubits))
    pairs: list[tuple[int, int]] = []
    bases: list[str] = []
    for _ in range(m2):
        placed = None
        for _attempt in range(_FAST_ATTEMPTS):
            i = free[rng.integers(len(free))]
            r = dist.sample(rng)
            direction = 1 if rng.random() < 0.5 else -1
            j = (i + direction * r) % n_qubits
            if not used[j] and j != i:
                placed = (i, j)
                break
        if placed is None:
            placed = _place_exact(free, dist, n_qubits, used, rng)
        i, j = placed
        used[i] = used[j] = True
        free = [q for q in free if not used[q]]
        pairs.append((i, j))
        bases.append(_draw_basis(mode, rng, layer_basis))
    return CircuitLayer(tuple(pairs), tuple(bases))


def minimal_arc_crosses(i: int, j: int, cut: int, n_qubits: int) -> bool:
    """Whether the minimal arc between i and j covers the bond (cut-1, cut)."""
    r = min((i - j) % n_qubits, (j - i) % n_qubits)
    # walk the minimal arc from the lower endpoint of the shorter direction
    if (j - i) % n_qubits == r:
        start = i
    else:
        start = j
    # bonds covered: (start, start+1), ..., (start+r-1, start+r), mod N
    offset = (cut - start) % n_qubits
    return 1 <= offset <= r


def count_crossings_mc(
    n_qubits: int,
    alpha: float,
    m2: int,
    mode: BasisMode,
    cut: int,
    n_layers: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Per-layer counts of cut-straddling pairs over sampled layers."""
    dist = RangeDistribution(n_qubits, alpha)
    counts = np.zeros(n_layers, dtype=np.int64)
    for layer_idx in range(n_layers):
        layer = sample_layer(n_qubits, m2, dist, mode, rng)
        counts[layer_idx] = sum(
            minimal_arc_crosses(i, j, cut, n_qubits) for (i, j) in layer.pairs
        )
    return counts
