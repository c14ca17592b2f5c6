"""Dense state-vector oracle for small systems (<= 12 qubits)."""

from __future__ import annotations

import numpy as np

MAX_QUBITS = 12

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DenseState:
    """Pure state on n qubits; qubit 0 is the most significant index."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if n_qubits > MAX_QUBITS:
            raise ValueError(f"dense oracle capped at {MAX_QUBITS} qubits")
        self.n = n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(2**n_qubits, dtype=complex)
            amplitudes[0] = 1.0
        self.amps = np.asarray(amplitudes, dtype=complex)

    @classmethod
    def plus_state(cls, n_qubits: int) -> "DenseState":
        amps = np.full(2**n_qubits, 2 ** (-n_qubits / 2), dtype=complex)
        return cls(n_qubits, amps)

    @classmethod
    def ancilla_seeded(cls, n_system: int, seed_site: int) -> "DenseState":
        """Match StabilizerTableau.ancilla_seeded: Bell pair + |+> elsewhere."""
        n = n_system + 1
        state = cls.plus_state(n)
        # project the (seed, ancilla) pair onto the +1 eigenspaces of ZZ and XX
        state.project_parity("ZZ", seed_site, n_system, +1)
        state.project_parity("XX", seed_site, n_system, +1)
        return state

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def _apply_pauli(self, basis: str, i: int, j: int) -> np.ndarray:
        """Amplitudes of (P_i P_j)|psi> for a two-site Pauli."""
        v = self.amps.reshape([2] * self.n)
        p = _PAULI[basis[0]]
        v = np.tensordot(p, v, axes=([1], [i]))
        v = np.moveaxis(v, 0, i)
        v = np.tensordot(p, v, axes=([1], [j]))
        v = np.moveaxis(v, 0, j)
        return v.reshape(-1)

    def project_parity(self, basis: str, i: int, j: int, outcome: int) -> float:
        """Apply K = (I + outcome*P)/2 and renormalize; returns the branch prob."""
        pv = self._apply_pauli(basis, i, j)
        branch = 0.5 * (self.amps + outcome * pv)
        prob = float(np.vdot(branch, branch).real)
        if prob < 1e-12:
            raise ValueError("projected onto a zero-norm branch")
        self.amps = branch / np.sqrt(prob)
        return prob

    def measure_parity(self, basis: str, i: int, j: int, rng: np.random.Generator) -> int:
        """Born-rule parity measurement; mutates the state, returns +-1."""
        if i == j:
            raise ValueError("parity check needs two distinct sites")
        pv = self._apply_pauli(basis, i, j)
        plus = 0.5 * (self.amps + pv)
        p_plus = float(np.vdot(plus, plus).real)
        outcome = 1 if rng.random() < p_plus else -1
        if outcome == 1:
            self.amps = plus / np.sqrt(p_plus)
        else:
            minus = 0.5 * (self.amps - pv)
            p_minus = float(np.vdot(minus, minus).real)
            if p_minus < 1e-12:
                raise ValueError("projected onto a zero-norm branch")
            self.amps = minus / np.sqrt(p_minus)
        return outcome

    def expect_parity(self, basis: str, i: int, j: int) -> float:
        return float(np.vdot(self.amps, self._apply_pauli(basis, i, j)).real)

    def apply_single(self, u: np.ndarray, i: int) -> None:
        v = self.amps.reshape([2] * self.n)
        v = np.tensordot(u, v, axes=([1], [i]))
        self.amps = np.moveaxis(v, 0, i).reshape(-1)

    def reduced_density(self, region: np.ndarray) -> np.ndarray:
        region = np.asarray(region, dtype=np.int64)
        keep = list(region)
        rest = [q for q in range(self.n) if q not in keep]
        v = self.amps.reshape([2] * self.n)
        v = np.transpose(v, keep + rest)
        v = v.reshape(2 ** len(keep), 2 ** len(rest))
        return v @ v.conj().T

    def entropy(self, region: np.ndarray) -> float:
        """von Neumann entropy of the region, in bits."""
        region = np.asarray(region, dtype=np.int64)
        if region.size == 0:
            raise ValueError("entropy region must be non-empty")
        rho = self.reduced_density(region)
        evals = np.linalg.eigvalsh(rho)
        evals = evals[evals > 1e-12]
        return float(-(evals * np.log2(evals)).sum())


def haar_single_qubit(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary via QR of a Gaussian matrix with phase fix."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
