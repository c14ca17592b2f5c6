"""Trajectory-level observables computed from a stabilizer tableau.

All quantities are in bits; on stabilizer states they are integers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tableau import StabilizerTableau


@dataclass
class ObservableSet:
    s_half: int | None = None
    mi_antipodal: int | None = None
    tmi: int | None = None
    s_ancilla: int | None = None
    bell_histogram: dict[int, int] | None = None


def _mask(*indices) -> np.ndarray:
    out = np.concatenate([np.atleast_1d(np.asarray(ix, dtype=np.int64)) for ix in indices])
    return np.unique(out)


def mutual_information(state: StabilizerTableau, a: np.ndarray, b: np.ndarray) -> int:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if np.intersect1d(a, b).size:
        raise ValueError("mutual information masks must be disjoint")
    return state.entropy(a) + state.entropy(b) - state.entropy(_mask(a, b))


def tripartite_mutual_information(
    state: StabilizerTableau, a: np.ndarray, b: np.ndarray, c: np.ndarray
) -> int:
    a, b, c = (np.asarray(m, dtype=np.int64) for m in (a, b, c))
    for m1, m2 in ((a, b), (a, c), (b, c)):
        if np.intersect1d(m1, m2).size:
            raise ValueError("tripartite masks must be pairwise disjoint")
    s = state.entropy
    return (
        s(a) + s(b) + s(c)
        - s(_mask(a, b)) - s(_mask(a, c)) - s(_mask(b, c))
        + s(_mask(a, b, c))
    )


def quarter_masks(n_system: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Contiguous quarters A, B, C, D of the system."""
    q = n_system // 4
    idx = np.arange(n_system)
    return idx[:q], idx[q:2 * q], idx[2 * q:3 * q], idx[3 * q:]


def half_cut_entropy(state: StabilizerTableau, n_system: int | None = None) -> int:
    """S of the first half (AB) against the rest; ancilla excluded if present."""
    n = state.n if n_system is None else n_system
    return state.entropy(np.arange(n // 2))


def antipodal_mutual_information(state: StabilizerTableau, n_system: int | None = None) -> int:
    n = state.n if n_system is None else n_system
    return mutual_information(state, np.array([0]), np.array([n // 2 - 1]))


def standard_tmi(state: StabilizerTableau, n_system: int | None = None) -> int:
    n = state.n if n_system is None else n_system
    a, b, c, _ = quarter_masks(n)
    return tripartite_mutual_information(state, a, b, c)


def ancilla_entropy(state: StabilizerTableau) -> int:
    """Entropy of the ancilla qubit (last index); 0 or 1 bit."""
    return state.entropy(np.array([state.n - 1]))


def minimal_arc_distance(i: int, j: int, n: int) -> int:
    return min((i - j) % n, (j - i) % n)


def bell_census(state: StabilizerTableau, n_system: int | None = None) -> dict[int, int]:
    """Histogram over minimal-arc distance of decoupled maximally entangled pairs.

    A pair (i, j) counts iff S_i = S_j = 1 and S_{ij} = 0: the two qubits
    are maximally entangled with each other and with nothing else.
    """
    n = state.n if n_system is None else n_system
    single = np.array([state.entropy(np.array([i])) for i in range(n)])
    hot = np.nonzero(single == 1)[0]
    hist: dict[int, int] = {}
    for ai in range(hot.size):
        for bi in range(ai + 1, hot.size):
            i, j = int(hot[ai]), int(hot[bi])
            if state.entropy(np.array([i, j])) == 0:
                r = minimal_arc_distance(i, j, n)
                hist[r] = hist.get(r, 0) + 1
    return hist


def mi_profile(state: StabilizerTableau, n_system: int | None = None) -> np.ndarray:
    """I(q0; q_r) for r = 1 .. N/2, as a vector indexed by r-1."""
    n = state.n if n_system is None else n_system
    out = np.zeros(n // 2, dtype=np.int64)
    for r in range(1, n // 2 + 1):
        out[r - 1] = mutual_information(state, np.array([0]), np.array([r]))
    return out
