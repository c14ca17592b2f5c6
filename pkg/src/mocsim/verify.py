"""Self-check suites: tableau-vs-dense oracle pairing and replica identities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import statmech
from .dense import DenseState
from .permutations import Permutation
from .sampler import BasisMode, RangeDistribution, sample_layer
from .tableau import PauliString, StabilizerTableau


@dataclass
class CheckLine:
    name: str
    ok: bool
    detail: str


def oracle_suite(
    n_max: int = 8, n_circuits: int = 200, depth: int = 20, seed: int = 0
) -> list[CheckLine]:
    """Run paired random circuits on the tableau and the dense oracle.

    The tableau draws each outcome; the dense state replays it via projection.
    Entropies of every contiguous bipartition are compared at each step.
    """
    rng = np.random.default_rng(seed)
    mismatches = 0
    checked = 0
    for _ in range(n_circuits):
        n = int(rng.integers(2, n_max + 1))
        tab = StabilizerTableau.plus_state(n)
        den = DenseState.plus_state(n)
        dist = RangeDistribution(n, float(rng.choice([0.0, 1.0, 2.0, 4.0])))
        mode = BasisMode("random")
        for _ in range(depth):
            layer = sample_layer(n, 1, dist, mode, rng)
            (i, j), basis = layer.pairs[0], layer.bases[0]
            outcome = tab.measure(PauliString.two_site(basis, i, j, n), rng)
            den.project_parity(basis, i, j, outcome)
            for cut in range(1, n):
                region = np.arange(cut)
                checked += 1
                if abs(tab.entropy(region) - den.entropy(region)) > 1e-9:
                    mismatches += 1
    return [
        CheckLine(
            "oracle-equivalence",
            mismatches == 0,
            f"{mismatches} mismatches over {checked} bipartition checks "
            f"({n_circuits} circuits, N <= {n_max})",
        )
    ]


def statmech_suite(mc_samples: int = 0, seed: int = 0) -> list[CheckLine]:
    """Replica identity suite: W_M forms, Weingarten inversion, projection."""
    lines: list[CheckLine] = []

    for n, d in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        perms = Permutation.all(n)
        total = ok = 0
        for quad in itertools.product(perms, repeat=4):
            total += 1
            w = statmech.wm_weight(*quad, d=d)
            if w == statmech.wm_bruteforce(*quad, d=d) == statmech.wm_weight_alt(*quad, d=d):
                ok += 1
        lines.append(CheckLine(f"wm-exhaustive n={n} d={d}", ok == total, f"{ok}/{total}"))

    ident, swap = Permutation.all(2)
    if swap.cycle_count() != 1:
        ident, swap = swap, ident
    w_eq = statmech.wm_weight(ident, ident, ident, ident, d=2)
    w_neq = statmech.wm_weight(ident, swap, ident, ident, d=2)
    lines.append(CheckLine("wm-values n=2 d=2", (w_eq, w_neq) == (8, 4), f"{w_eq}, {w_neq}"))

    for n in (1, 2, 3):
        for d in (2, 3, 4):
            if d < n:
                try:
                    statmech.weingarten_table(n, d)
                    lines.append(CheckLine(f"weingarten n={n} d={d}", False, "missed singularity"))
                except ValueError:
                    lines.append(CheckLine(f"weingarten n={n} d={d}", True, "singular (reported)"))
                continue
            tab = statmech.weingarten_table(n, d)
            lines.append(
                CheckLine(
                    f"weingarten n={n} d={d}",
                    tab.gram_times_wg_is_identity(),
                    "G*Wg == I (rational)",
                )
            )

    _, c, j, residual = statmech.effective_gate_projection()
    lines.append(
        CheckLine(
            "effective-gate",
            residual < 1e-10 and abs(c - Fraction(1, 3)) < 1e-12 and abs(j - Fraction(1, 6)) < 1e-12,
            f"C={c:.6f} J={j:.6f} residual={residual:.3g}",
        )
    )

    if mc_samples > 0:
        rng = np.random.default_rng(seed)
        for n_qubits, layers in [(2, 1), (3, 2)]:
            pairs = [[(0, 1)]] * layers if n_qubits == 2 else [[(0, 1)], [(1, 2)]]
            z0 = statmech.partition_function(statmech.build_lattice(n_qubits, pairs, None))
            za = statmech.partition_function(statmech.build_lattice(n_qubits, pairs, [0]))
            exact = float(za / z0)
            est, err = statmech.haar_mc_replica(n_qubits, pairs, [0], mc_samples, rng)
            z = abs(est - exact) / err if err > 0 else 0.0
            lines.append(
                CheckLine(
                    f"replica-mc N={n_qubits} layers={layers}",
                    z <= 3.0,
                    f"exact={exact:.6f} mc={est:.6f}+-{err:.6f} z={z:.2f}",
                )
            )
    return lines
