"""Stabilizer tableau with projective Pauli-string measurement.

Rows are bit-packed into uint64 words (X block and Z block separately).
Destabilizer rows are kept alongside the stabilizers so that every
measurement costs O(N^2) bit operations worst case.  Phases are tracked
as powers of i; physical generator signs are always +-1 (phase 0 or 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bitmat

_ONE = np.uint64(1)

PAULI_CHARS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


@dataclass
class PauliString:
    """An N-qubit Pauli operator i^phase * prod_s X^x Z^z (Y = (1,1))."""

    n_qubits: int
    x: np.ndarray  # packed, shape (n_words,)
    z: np.ndarray
    phase: int = 0  # power of i, mod 4

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        w = bitmat.n_words(n_qubits)
        return cls(n_qubits, np.zeros(w, dtype=np.uint64), np.zeros(w, dtype=np.uint64))

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> "PauliString":
        p = cls.identity(len(label))
        for i, ch in enumerate(label):
            xb, zb = PAULI_CHARS[ch]
            bitmat.set_bit(p.x, i, xb)
            bitmat.set_bit(p.z, i, zb)
        p.phase = phase % 4
        return p

    @classmethod
    def two_site(cls, basis: str, i: int, j: int, n_qubits: int) -> "PauliString":
        """Parity check X_iX_j, Y_iY_j or Z_iZ_j with phase +1."""
        if i == j:
            raise ValueError("parity check needs two distinct sites")
        if basis not in ("XX", "YY", "ZZ"):
            raise ValueError(f"unknown parity basis {basis!r}")
        p = cls.identity(n_qubits)
        xb, zb = PAULI_CHARS[basis[0]]
        for q in (i, j):
            if not 0 <= q < n_qubits:
                raise ValueError(f"site {q} out of range for {n_qubits} qubits")
            bitmat.set_bit(p.x, q, xb)
            bitmat.set_bit(p.z, q, zb)
        return p

    def to_label(self) -> str:
        chars = []
        for i in range(self.n_qubits):
            xb, zb = bitmat.get_bit(self.x, i), bitmat.get_bit(self.z, i)
            chars.append("IXZY"[xb + 2 * zb] if (xb, zb) != (1, 1) else "Y")
        return "".join(chars)

    def weight(self) -> int:
        return int(bitmat.popcount_rows((self.x | self.z)[None, :])[0])

    def is_identity(self) -> bool:
        return self.weight() == 0


def _phase_contrib(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Sum over sites of the i-power picked up in sigma(x1,z1) * sigma(x2,z2).

    Rows of (x1, z1) are the left factors; (x2, z2) is a single row
    broadcast against them.  Returns the per-row sum mod 4.
    """
    y1 = x1 & z1
    xo1 = x1 & ~z1
    zo1 = ~x1 & z1
    plus = (
        np.bitwise_count(y1 & z2 & ~x2).sum(axis=-1)
        + np.bitwise_count(xo1 & z2 & x2).sum(axis=-1)
        + np.bitwise_count(zo1 & x2 & ~z2).sum(axis=-1)
    )
    minus = (
        np.bitwise_count(y1 & x2 & ~z2).sum(axis=-1)
        + np.bitwise_count(xo1 & z2 & ~x2).sum(axis=-1)
        + np.bitwise_count(zo1 & x2 & z2).sum(axis=-1)
    )
    return (plus.astype(np.int64) - minus.astype(np.int64)) % 4


class StabilizerTableau:
    """Pure N-qubit stabilizer state.

    Layout: rows [0, n) are destabilizers, rows [n, 2n) are stabilizers.
    """

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        self.n = n_qubits
        w = bitmat.n_words(n_qubits)
        self.x = np.zeros((2 * n_qubits, w), dtype=np.uint64)
        self.z = np.zeros((2 * n_qubits, w), dtype=np.uint64)
        self.phase = np.zeros(2 * n_qubits, dtype=np.uint8)  # powers of i

    # -- constructors ---------------------------------------------------

    @classmethod
    def plus_state(cls, n_qubits: int) -> "StabilizerTableau":
        """|+>^N: stabilizers X_i, destabilizers Z_i."""
        t = cls(n_qubits)
        for i in range(n_qubits):
            bitmat.set_bit(t.z[i], i)                  # destabilizer Z_i
            bitmat.set_bit(t.x[n_qubits + i], i)       # stabilizer X_i
        return t

    @classmethod
    def ancilla_seeded(cls, n_system: int, seed_site: int) -> "StabilizerTableau":
        """|+>^N on the system plus an ancilla Bell-paired with seed_site.

        The ancilla lives at index n_system.  The Bell pair is stabilized
        by X_s X_a and Z_s Z_a.
        """
        if not 0 <= seed_site < n_system:
            raise ValueError(f"seed_site {seed_site} out of range")
        n = n_system + 1
        t = cls.plus_state(n)
        anc = n_system
        rng = np.random.default_rng(0)  # outcomes below are deterministic or irrelevant
        t.measure(PauliString.two_site("ZZ", seed_site, anc, n), rng)
        t.measure(PauliString.two_site("XX", seed_site, anc, n), rng)
        return t

    # -- internals ------------------------------------------------------

    def _anticommute_mask(self, op: PauliString) -> np.ndarray:
        a = bitmat.parity_rows(self.x & op.z)
        b = bitmat.parity_rows(self.z & op.x)
        return a ^ b

    def _mul_rows(self, targets: np.ndarray, src: int) -> None:
        """row_t <- row_src * row_t for each target row (left-multiply)."""
        contrib = _phase_contrib(self.x[src], self.z[src], self.x[targets], self.z[targets])
        self.phase[targets] = (self.phase[targets] + self.phase[src] + contrib) % 4
        self.x[targets] ^= self.x[src]
        self.z[targets] ^= self.z[src]

    # -- measurement ----------------------------------------------------

    def measure(self, op: PauliString, rng: np.random.Generator) -> int:
        """Projectively measure a Pauli string; returns the outcome +-1."""
        if op.phase % 4 != 0:
            raise ValueError("measurement operator must carry phase +1")
        if op.is_identity():
            raise ValueError("cannot measure the identity operator")
        n = self.n
        ac = self._anticommute_mask(op)
        stab_ac = np.nonzero(ac[n:])[0]
        if stab_ac.size:
            p = n + int(stab_ac[0])  # lowest-index anticommuting generator
            others = np.nonzero(ac)[0]
            others = others[others != p]
            if others.size:
                self._mul_rows(others, p)
            # old stabilizer becomes the destabilizer of the measured operator
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.phase[p - n] = self.phase[p]
            outcome = 1 if rng.random() < 0.5 else -1
            self.x[p] = op.x
            self.z[p] = op.z
            self.phase[p] = 0 if outcome == 1 else 2
            return outcome
        # deterministic: op is (+-) a product of stabilizers, selected by the
        # destabilizer rows that anticommute with it
        rows = np.nonzero(ac[:n])[0] + n
        acc_x = np.zeros_like(op.x)
        acc_z = np.zeros_like(op.z)
        acc_ph = 0
        for r in rows:
            acc_ph = (acc_ph + int(self.phase[r])
                      + int(_phase_contrib(acc_x[None, :], acc_z[None, :], self.x[r], self.z[r])[0])) % 4
            acc_x ^= self.x[r]
            acc_z ^= self.z[r]
        if not (np.array_equal(acc_x, op.x) and np.array_equal(acc_z, op.z)):
            raise AssertionError("deterministic measurement reconstruction failed")
        return 1 if acc_ph % 4 == 0 else -1

    # -- queries --------------------------------------------------------

    def stab_x(self) -> np.ndarray:
        return self.x[self.n:]

    def stab_z(self) -> np.ndarray:
        return self.z[self.n:]

    def check_matrix_rank(self) -> int:
        xb = bitmat.to_bool(self.stab_x(), self.n)
        zb = bitmat.to_bool(self.stab_z(), self.n)
        packed = bitmat.from_bool(np.concatenate([xb, zb], axis=1))
        return bitmat.rank(packed, 2 * self.n)

    def generators_commute(self) -> bool:
        sx, sz = self.stab_x(), self.stab_z()
        for i in range(self.n):
            a = bitmat.parity_rows(sx & sz[i])
            b = bitmat.parity_rows(sz & sx[i])
            if np.any(a ^ b):
                return False
        return True

    def entropy(self, region: np.ndarray) -> int:
        """Entanglement entropy of the region in bits.

        rank_GF2 of the stabilizer rows restricted to the region's X and Z
        columns, minus the region size.
        """
        region = np.asarray(region, dtype=np.int64)
        if region.size == 0:
            raise ValueError("entropy region must be non-empty")
        if region.size == self.n:
            return 0
        xb = bitmat.to_bool(self.stab_x(), self.n)[:, region]
        zb = bitmat.to_bool(self.stab_z(), self.n)[:, region]
        packed = bitmat.from_bool(np.concatenate([xb, zb], axis=1))
        r = bitmat.rank(packed, 2 * region.size)
        return r - region.size
