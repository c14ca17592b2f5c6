"""Replica statistical-mechanics model for the Haar-dressed parity circuit.

Measurement plaquettes carry the orbit-counting weight
W_M = d^(1 + #orbits), Haar links carry Weingarten weights (the exact
rational inverse of the Gram matrix d^#cycles), and small-lattice
partition functions are summed over permutation-spin assignments exactly.
A dense Monte Carlo estimator over explicit Haar samples provides the
independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian

import numpy as np
import sympy

from .dense import haar_single_qubit
from .permutations import Permutation, orbit_count


# -- measurement weight -------------------------------------------------


def wm_weight(s1: Permutation, s2: Permutation, t1: Permutation, t2: Permutation,
              d: int) -> int:
    """Orbit-counting form of the two-site measurement weight.

    Composition convention: (f * g)(x) = f(g(x)).
    """
    if d < 2:
        raise ValueError("local dimension must be >= 2")
    gens = [t1 * s1, t2 * s1, t2 * s2]
    return d ** (1 + orbit_count(gens))


def wm_weight_alt(s1: Permutation, s2: Permutation, t1: Permutation, t2: Permutation,
                  d: int) -> int:
    """Equivalent generator set for the same subgroup orbit count."""
    gens = [t1 * t2.inverse(), t2 * s1, s1.inverse() * s2]
    return d ** (1 + orbit_count(gens))


def _chi_matrix(g: Permutation, d: int) -> np.ndarray:
    """Replica-permutation operator on (C^d)^{tensor n}: |i_1..i_n> ->
    |i_{g(1)}..i_{g(n)}>."""
    n = g.n
    dim = d**n
    m = np.zeros((dim, dim))
    for idx in range(dim):
        digits = [(idx // d**(n - 1 - k)) % d for k in range(n)]
        new = [digits[g(k)] for k in range(n)]
        out = sum(v * d**(n - 1 - k) for k, v in enumerate(new))
        m[out, idx] = 1.0
    return m


def _chi_pair_matrix(g1: Permutation, g2: Permutation, d: int) -> np.ndarray:
    """chi_{g1} x chi_{g2} on the replicated two-site space, replica-major
    ordering: basis index is the tuple ((a_1,b_1),...,(a_n,b_n))."""
    n = g1.n
    dim = (d * d) ** n
    m = np.zeros((dim, dim))
    for idx in range(dim):
        # decode replica-major: most significant replica first
        digits = [(idx // (d * d) ** (n - 1 - k)) % (d * d) for k in range(n)]
        a = [dd // d for dd in digits]
        b = [dd % d for dd in digits]
        na = [a[g1(k)] for k in range(n)]
        nb = [b[g2(k)] for k in range(n)]
        out = sum((na[k] * d + nb[k]) * (d * d) ** (n - 1 - k) for k in range(n))
        m[out, idx] = 1.0
    return m


def _kraus_replicated(i: int, n: int, d: int) -> np.ndarray:
    """K_i^{tensor n} for the mod-d parity Kraus K_i = sum_j |j,j+i><j,j+i|."""
    k = np.zeros((d * d, d * d))
    for j in range(d):
        col = j * d + (j + i) % d
        k[col, col] = 1.0
    out = np.array([[1.0]])
    for _ in range(n):
        out = np.kron(out, k)
    return out


def _chi_pair_perm(g1: Permutation, g2: Permutation, d: int) -> np.ndarray:
    """Index form of _chi_pair_matrix: perm[idx] = out, chi e_idx = e_out."""
    m = _chi_pair_matrix(g1, g2, d)
    return np.argmax(m, axis=0)


def _kraus_mask(i: int, n: int, d: int) -> np.ndarray:
    """Diagonal 0/1 mask of _kraus_replicated as a boolean index array."""
    return np.diag(_kraus_replicated(i, n, d)) > 0.5


@lru_cache(maxsize=None)
def _chi_pair_perm_cached(g1: Permutation, g2: Permutation, d: int):
    return _chi_pair_perm(g1, g2, d)


@lru_cache(maxsize=None)
def _kraus_mask_cached(i: int, n: int, d: int):
    return _kraus_mask(i, n, d)


def wm_bruteforce(s1: Permutation, s2: Permutation, t1: Permutation, t2: Permutation,
                  d: int) -> int:
    """Literal trace sum over Kraus and replica indices (independent oracle).

    Every factor is a 0/1 permutation or diagonal matrix, so the trace
    Tr(K chi_s K chi_t) is evaluated by index chasing rather than matmul.
    """
    n = s1.n
    if n > 3 or d > 3:
        raise ValueError("brute-force weight capped at n <= 3, d <= 3")
    perm_s = _chi_pair_perm_cached(s1, s2, d)
    perm_t = _chi_pair_perm_cached(t1, t2, d)
    idx = np.arange(perm_s.size)
    total = 0
    for i in range(d):
        mask = _kraus_mask_cached(i, n, d)
        z = perm_t[idx]
        total += int(np.sum(mask & mask[z] & (perm_s[z] == idx)))
    return total


# -- Weingarten table ---------------------------------------------------


@dataclass
class WeingartenTable:
    n: int
    d: int
    perms: list[Permutation]
    values: dict[Permutation, Fraction]  # Wg as a function of sigma^-1 tau

    def wg(self, sigma: Permutation, tau: Permutation) -> Fraction:
        return self.values[sigma.inverse() * tau]

    def gram(self, sigma: Permutation, tau: Permutation) -> int:
        return self.d ** (sigma.inverse() * tau).cycle_count()

    def gram_times_wg_is_identity(self) -> bool:
        for rho in self.perms:
            for tau in self.perms:
                acc = Fraction(0)
                for s in self.perms:
                    acc += self.gram(rho, s) * self.wg(s, tau)
                if acc != (1 if rho == tau else 0):
                    return False
        return True


def weingarten_table(n: int, d: int) -> WeingartenTable:
    """Exact rational inverse of the Gram matrix G_{sigma,tau} = d^#cycles(sigma^-1 tau)."""
    if n > 4:
        raise ValueError("table capped at n <= 4")
    perms = Permutation.all(n)
    k = len(perms)
    g = sympy.Matrix(k, k, lambda i, j: sympy.Integer(d) ** (perms[i].inverse() * perms[j]).cycle_count())
    if g.det() == 0:
        raise ValueError(f"singular Gram matrix for n={n}, d={d}")
    ginv = g.inv()
    ident = Permutation.identity(n)
    row = perms.index(ident)
    values = {}
    for j, p in enumerate(perms):
        q = ginv[row, j]
        values[p] = Fraction(int(sympy.numer(q)), int(sympy.denom(q)))
    return WeingartenTable(n, d, perms, values)


# -- replica lattice and partition function -----------------------------


@dataclass
class ReplicaLattice:
    """Permutation-spin lattice for one Haar-dressed parity circuit.

    Spins live on the input (tau) and output (sigma) side of every
    per-site Haar average.  wg_links couple the two sides of one Haar
    average; trace_links propagate a spin through an unmeasured time step;
    plaquettes are measurement interactions; pinned spins implement the
    final-time boundary.
    """

    n: int
    d: int
    n_free: int
    pinned: dict[int, Permutation]          # spin id -> boundary permutation
    wg_links: list[tuple[int, int]]         # (sigma_id, tau_id)
    trace_links: list[tuple[int, int]]      # (sigma_id, tau_id), weight d^#cycles
    plaquettes: list[tuple[int, int, int, int]]  # (sig_x, sig_y, tau_x', tau_y')
    init_spins: list[int]                   # bottom-boundary taus, weight Tr(chi rho0^n) = 1


def build_lattice(n_qubits: int, layers: list[list[tuple[int, int]]], region,
                  n: int = 2, d: int = 2) -> ReplicaLattice:
    """Lattice for the given pair layers with the final boundary pinned to
    the identity everywhere (region None) or to the replica cycle on the
    region's sites."""
    t_layers = len(layers)
    ident = Permutation.identity(n)
    cyc = Permutation.cycle(n, range(n))
    region = set() if region is None else {int(q) for q in np.atleast_1d(region)}

    # spin ids: tau(x, l) = 2*(l*N + x), sigma(x, l) = tau + 1
    def tau_id(x, l):
        return 2 * (l * n_qubits + x)

    def sig_id(x, l):
        return 2 * (l * n_qubits + x) + 1

    n_free = 2 * n_qubits * t_layers
    pinned = {}
    for x in range(n_qubits):
        pinned[n_free + x] = cyc if x in region else ident

    def top_id(x, l):
        return tau_id(x, l + 1) if l + 1 < t_layers else n_free + x

    wg_links = [(sig_id(x, l), tau_id(x, l)) for l in range(t_layers) for x in range(n_qubits)]
    plaquettes = []
    trace_links = []
    for l, pairs in enumerate(layers):
        measured = set()
        for (i, j) in pairs:
            plaquettes.append((sig_id(i, l), sig_id(j, l), top_id(i, l), top_id(j, l)))
            measured.update((i, j))
        for x in range(n_qubits):
            if x not in measured:
                trace_links.append((sig_id(x, l), top_id(x, l)))
    init_spins = [tau_id(x, 0) for x in range(n_qubits)]
    return ReplicaLattice(n, d, n_free, pinned, wg_links, trace_links, plaquettes, init_spins)


def partition_function(lattice: ReplicaLattice, max_assignments: int = 2_000_000) -> Fraction:
    """Exact sum over S_n spin assignments of the product of all weights."""
    n, d = lattice.n, lattice.d
    perms = Permutation.all(n)
    k = len(perms)
    index = {p: i for i, p in enumerate(perms)}
    if k**lattice.n_free > max_assignments:
        raise ValueError(
            f"{k}^{lattice.n_free} assignments exceed the cap {max_assignments}")
    table = weingarten_table(n, d)
    wg = [[table.wg(a, b) for b in perms] for a in perms]
    trace_w = [[d ** (a.inverse() * b).cycle_count() for b in perms] for a in perms]
    inv = [index[p.inverse()] for p in perms]
    wm = np.zeros((k, k, k, k), dtype=np.int64)
    for i1, a in enumerate(perms):
        for i2, b in enumerate(perms):
            for i3, c in enumerate(perms):
                for i4, e in enumerate(perms):
                    wm[i1, i2, i3, i4] = wm_weight(a, b, c, e, d)

    pinned_vals = {sid: index[p] for sid, p in lattice.pinned.items()}
    total = Fraction(0)
    for assignment in _cartesian(range(k), repeat=lattice.n_free):
        def val(sid):
            return assignment[sid] if sid < lattice.n_free else pinned_vals[sid]

        weight = Fraction(1)
        for (a, b) in lattice.wg_links:
            weight *= wg[val(a)][val(b)]
        if weight == 0:
            continue
        for (a, b) in lattice.trace_links:
            weight *= trace_w[val(a)][val(b)]
        # plaquette: sum over Kraus of Tr((chi_t x chi_t')^dagger K (chi_s x chi_s') K),
        # which is W_M evaluated at the inverted top-side permutations
        for (s1, s2, t1, t2) in lattice.plaquettes:
            weight *= int(wm[val(s1), val(s2), inv[val(t1)], inv[val(t2)]])
        # initial boundary: Tr(chi rho0^{x n}) = 1 for a pure product state
        for _sid in lattice.init_spins:
            weight *= 1
        total += weight
    return total


def conditional_renyi(z_a: Fraction, z_empty: Fraction, n: int) -> float:
    """(log2 Z_A - log2 Z_0) / (1 - n), in bits."""
    if n < 2:
        raise ValueError("replica order must be >= 2")
    if z_a <= 0 or z_empty <= 0:
        raise ValueError("non-positive partition function (weight bug upstream)")
    return (math.log2(z_a) - math.log2(z_empty)) / (1 - n)


# -- dense Haar Monte Carlo cross-check ---------------------------------


def _apply_single(state: np.ndarray, u: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    v = state.reshape([2] * n_qubits)
    v = np.tensordot(u, v, axes=([1], [site]))
    return np.moveaxis(v, 0, site).reshape(-1)


def _apply_zz_kraus(state: np.ndarray, i: int, j: int, outcome: int, n_qubits: int) -> np.ndarray:
    """(I +- Z_i Z_j)/2 without renormalization."""
    idx = np.arange(state.size)
    bi = (idx >> (n_qubits - 1 - i)) & 1
    bj = (idx >> (n_qubits - 1 - j)) & 1
    parity = 1 - 2 * ((bi ^ bj).astype(float))
    sign = 1.0 if outcome == 0 else -1.0
    return 0.5 * (state + sign * parity * state)


def haar_mc_replica(
    n_qubits: int,
    layers: list[list[tuple[int, int]]],
    region,
    samples: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte Carlo estimate of Z_A / Z_0 for n = 2 replicas.

    Each sample draws fresh single-qubit Haar unitaries for every site and
    layer, sums over all outcome branches the squared branch weights
    (denominator) and the branch purities of region A (numerator), and the
    ratio of means is returned with a jackknife standard error.
    """
    if n_qubits > 4 or len(layers) > 3:
        raise ValueError("Monte Carlo replica check capped at 4 qubits, 3 layers")
    region = np.atleast_1d(np.asarray(region, dtype=np.int64))
    rest = np.array([q for q in range(n_qubits) if q not in set(region.tolist())], dtype=np.int64)
    psi0 = np.zeros(2**n_qubits, dtype=complex)
    psi0[0] = 1.0
    nums = np.empty(samples)
    dens = np.empty(samples)
    for s in range(samples):
        states = [psi0]
        for pairs in layers:
            us = [haar_single_qubit(rng) for _ in range(n_qubits)]
            nxt = []
            for st in states:
                for x, u in enumerate(us):
                    st = _apply_single(st, u, x, n_qubits)
                nxt.append(st)
            states = nxt
            for (i, j) in pairs:
                states = [
                    _apply_zz_kraus(st, i, j, outcome, n_qubits)
                    for st in states
                    for outcome in (0, 1)
                ]
        num = 0.0
        den = 0.0
        for st in states:
            p = float(np.vdot(st, st).real)
            den += p * p
            v = st.reshape([2] * n_qubits)
            v = np.transpose(v, list(region) + list(rest)).reshape(2**region.size, -1)
            rho = v @ v.conj().T
            num += float(np.trace(rho @ rho).real)
        nums[s] = num
        dens[s] = den
    ratio = nums.mean() / dens.mean()
    # jackknife over samples
    if samples < 2:
        return ratio, 0.0
    tot_n, tot_d = nums.sum(), dens.sum()
    loo = (tot_n - nums) / (tot_d - dens)
    err = math.sqrt((samples - 1) / samples * ((loo - loo.mean()) ** 2).sum())
    return ratio, err


# -- effective two-site gate projection ---------------------------------


def effective_gate_projection(d: int = 2):
    """Project the two-site parity channel onto the per-site span of the
    identity and swap vectors (n = 2 replicas, duplicated-space picture).

    Returns (matrix, c, j, residual) with matrix = c*I + j*(zz + xx) in the
    orthonormal basis built from |identity>> +- |swap>>.
    """
    if d != 2:
        raise ValueError("projection derived for qubits (d = 2)")
    perms = Permutation.all(2)
    ident, swap = perms[0], perms[1]
    if not swap.images == (1, 0):
        ident, swap = swap, ident
    # Gram of the non-orthogonal per-site basis {|I>>, |S>>}
    gram = np.array([[4.0, 2.0], [2.0, 4.0]])
    # orthonormal basis u_up = (|I>> + |S>>)/sqrt(12), u_dn = (|I>> - |S>>)/2
    combos = np.array([[1.0, 1.0], [1.0, -1.0]])  # rows: coefficients over (I, S)
    norms = np.sqrt(np.einsum("ai,ij,aj->a", combos, gram, combos))
    coeff = combos / norms[:, None]  # rows are orthonormal vectors in (I, S) coords
    # raw bilinear form: W_M matrix elements in the permutation basis
    plist = [ident, swap]
    w = np.zeros((4, 4))
    for a1 in range(2):
        for a2 in range(2):
            for b1 in range(2):
                for b2 in range(2):
                    w[a1 * 2 + a2, b1 * 2 + b2] = wm_weight(
                        plist[b1], plist[b2], plist[a1], plist[a2], d)
    # express in the orthonormal two-site basis: M_ab,cd = sum over perm labels
    c2 = np.kron(coeff, coeff)  # (4 orthonormal pair states) x (4 perm pair labels)
    m_eff = c2 @ w @ c2.T
    # decompose as c*I + j*(sigma_z sigma_z + sigma_x sigma_x)
    eye = np.eye(4)
    zz = np.diag([1.0, -1.0, -1.0, 1.0])
    xx = np.fliplr(np.eye(4))
    basis = np.stack([eye.ravel(), (zz + xx).ravel()], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, m_eff.ravel(), rcond=None)
    c_val, j_val = float(coeffs[0]), float(coeffs[1])
    residual = float(np.linalg.norm(m_eff.ravel() - basis @ coeffs))
    if residual > 1e-10:
        raise ArithmeticError(f"gate decomposition residual {residual:.3e} exceeds 1e-10")
    return m_eff, c_val, j_val, residual
